#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "edgecl/data_item.hpp"

namespace edgecl {

// One stationary distribution: an isotropic Gaussian blob per class.
struct SceneSpec {
  std::size_t scene_id = 0;
  std::vector<std::vector<double>> centroids;  // K x d
  double noise = 1.0;
  std::vector<double> priors;  // simplex over K
  std::size_t family_id = 0;

  std::size_t num_classes() const { return centroids.size(); }
  std::size_t input_dim() const { return centroids.empty() ? 0 : centroids.front().size(); }
  void validate() const;
  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

struct ScriptSegment {
  SceneSpec scene;
  double duration = 0.0;  // simulated seconds
  std::string tag;
};

struct StreamScript {
  std::vector<ScriptSegment> segments;
  double rate = 40.0;  // items per simulated second

  void validate() const;
  double total_duration() const;
  double segment_start(std::size_t segment) const;
  // Index of the segment active at time t (latest segment whose start <= t).
  std::size_t segment_at(double t) const;
};

SceneSpec make_scene(std::uint64_t seed, std::size_t num_classes, std::size_t input_dim,
                     double separation, double noise, std::size_t family_id);

// Translates every centroid by a seeded random vector of norm `drift_magnitude` and
// reweights the class priors by a log-normal factor with spread `prior_jitter`.
SceneSpec perturb_scene(const SceneSpec& scene, double drift_magnitude, std::uint64_t seed,
                        double prior_jitter = 0.5);

std::vector<DataItem> sample_stream(const StreamScript& script, std::uint64_t seed);

// Draws `count` i.i.d. items from one scene (arrival_time = 0). Used for probe
// sets and offline oracle training.
std::vector<DataItem> sample_scene(const SceneSpec& scene, std::size_t count, std::uint64_t seed);

// Replays named scenes in order; reusing a tag reuses the identical SceneSpec.
StreamScript stitched_script(const std::vector<std::pair<std::string, double>>& segments,
                             const std::map<std::string, SceneSpec>& library, double rate);

// Parameters of a structural family: scenes share a backbone layout shifted by
// a family-wide offset, and differ by a common per-scene shift, a per-class
// translation and prior reweighting.
struct FamilyParams {
  std::size_t num_classes = 4;
  std::size_t input_dim = 16;
  double separation = 4.0;
  double noise = 1.0;
  double family_offset = 3.0;  // norm of the shift shared by every scene of the family
  double scene_shift = 1.0;    // norm of the shift shared by every class of one scene
  double scene_drift = 3.5;    // per-class translation norm
  std::size_t drift_rank = 3;  // per-class translations stay in a family subspace of this rank (0: unrestricted)
  double prior_jitter = 0.25;

  void validate() const;
};

SceneSpec family_backbone(std::uint64_t seed, std::size_t family_id, const FamilyParams& params);
SceneSpec family_scene(const SceneSpec& backbone, std::uint64_t seed, std::size_t variant,
                       const FamilyParams& params);

// A script of `count` distinct scenes drawn from one family, `duration` seconds each.
StreamScript family_script(const SceneSpec& backbone, std::uint64_t seed, std::size_t first_variant,
                           std::size_t count, double duration, double rate, const FamilyParams& params);

// One row per item: time, scene_id, label, features...
void write_stream_csv(std::ostream& out, const std::vector<DataItem>& items);

}  // namespace edgecl
