#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edgecl/model.hpp"

namespace edgecl {

// Scene-similarity gate for the base update. Static and full-replacement
// baselines are the degenerate cases eps_low == eps_high.
struct EwmaPolicy {
  double similarity_threshold = 0.9;
  double eps_high = 0.3;
  double eps_low = 0.05;

  void validate() const;
  static EwmaPolicy fixed(double eps) { return {0.9, eps, eps}; }
};

struct BaseUpdateRecord {
  std::size_t scene_id = 0;
  std::optional<double> similarity;  // nullopt on cold start
  double epsilon = 0.0;
};

struct BaseModelState {
  ModelWeights phi;
  std::optional<Embedding> previous_centroid;
  std::size_t update_count = 0;
  std::vector<BaseUpdateRecord> history;
};

// eps_high iff s >= similarity_threshold.
double select_epsilon(double similarity, const EwmaPolicy& policy);

// One Reptile step: phi <- (1 - eps) phi + eps zeta, with eps gated on the cosine
// similarity between the previous and current scene centroids.
BaseModelState update_base(BaseModelState state, const ModelWeights& zeta, const Embedding& scene_centroid,
                           const EwmaPolicy& policy, std::size_t scene_id = 0);

inline constexpr int kBaseFormatVersion = 1;

std::string save_base(const BaseModelState& state);
BaseModelState load_base(const std::string& artifact, const ModelConfig& expected);

void save_base_file(const BaseModelState& state, const std::filesystem::path& path);
BaseModelState load_base_file(const std::filesystem::path& path, const ModelConfig& expected);

}  // namespace edgecl
