#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgecl/meta_update.hpp"
#include "edgecl/model.hpp"
#include "edgecl/stream.hpp"

namespace edgecl {

enum class PolicyId { Legilimens, Ekya, StaticEwma, VanillaFull, Oracle };

inline constexpr PolicyId kAllPolicies[] = {PolicyId::Legilimens, PolicyId::Ekya, PolicyId::StaticEwma,
                                            PolicyId::VanillaFull, PolicyId::Oracle};

std::string_view to_string(PolicyId id);
PolicyId parse_policy(std::string_view name);

enum class InitSource { Base, PreviousSpecialized };
enum class StoppingRule { Score, FixedEpochs };
enum class ServingMode { StaleServe, QueueReplay };

std::string_view to_string(InitSource v);
std::string_view to_string(StoppingRule v);
std::string_view to_string(ServingMode v);
ServingMode parse_serving_mode(std::string_view name);

// Everything that distinguishes one policy from another. The scheduler reads
// only this; there is no per-policy code path beyond the offline oracle.
struct PolicyTraits {
  PolicyId id = PolicyId::Legilimens;
  InitSource init = InitSource::Base;
  std::optional<EwmaPolicy> ewma;  // nullopt: no base model is maintained
  StoppingRule stopping = StoppingRule::Score;
  ServingMode serving = ServingMode::StaleServe;
  bool offline_oracle = false;
};

inline constexpr double kStaticEwmaEpsilon = 0.1;
inline constexpr double kVanillaEpsilon = 1.0;

PolicyTraits policy_traits(PolicyId id, const EwmaPolicy& dynamic = {});

struct OracleOptions {
  std::size_t samples = 2000;
  std::size_t epochs = 40;
  double learning_rate = 0.1;
  std::size_t minibatch_size = 16;
};

// Model trained offline from scratch on ample ground-truth samples of one scene.
ModelWeights train_oracle_model(const SceneSpec& scene, const ModelConfig& config, const OracleOptions& options,
                                std::uint64_t seed);

}  // namespace edgecl
