#include "edgecl/policy.hpp"

#include <stdexcept>
#include <string>

namespace edgecl {

std::string_view to_string(PolicyId id) {
  switch (id) {
    case PolicyId::Legilimens: return "legilimens";
    case PolicyId::Ekya: return "ekya";
    case PolicyId::StaticEwma: return "static_ewma";
    case PolicyId::VanillaFull: return "vanilla_full";
    case PolicyId::Oracle: return "oracle";
  }
  return "unknown";
}

PolicyId parse_policy(std::string_view name) {
  for (auto id : kAllPolicies) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (valid: legilimens, ekya, static_ewma, vanilla_full, oracle)");
}

std::string_view to_string(InitSource v) { return v == InitSource::Base ? "base" : "previous_specialized"; }
std::string_view to_string(StoppingRule v) { return v == StoppingRule::Score ? "score" : "fixed_epochs"; }
std::string_view to_string(ServingMode v) { return v == ServingMode::StaleServe ? "stale_serve" : "queue_replay"; }

ServingMode parse_serving_mode(std::string_view name) {
  if (name == "stale_serve") return ServingMode::StaleServe;
  if (name == "queue_replay") return ServingMode::QueueReplay;
  throw std::invalid_argument("unknown serving mode '" + std::string(name) + "' (valid: stale_serve, queue_replay)");
}

PolicyTraits policy_traits(PolicyId id, const EwmaPolicy& dynamic) {
  PolicyTraits t;
  t.id = id;
  switch (id) {
    case PolicyId::Legilimens:
      t.ewma = dynamic;
      break;
    case PolicyId::StaticEwma:
      t.ewma = EwmaPolicy::fixed(kStaticEwmaEpsilon);
      break;
    case PolicyId::VanillaFull:
      t.ewma = EwmaPolicy::fixed(kVanillaEpsilon);
      break;
    case PolicyId::Ekya:
      t.init = InitSource::PreviousSpecialized;
      t.stopping = StoppingRule::FixedEpochs;
      t.serving = ServingMode::QueueReplay;
      break;
    case PolicyId::Oracle:
      t.offline_oracle = true;
      break;
  }
  return t;
}

ModelWeights train_oracle_model(const SceneSpec& scene, const ModelConfig& config, const OracleOptions& options,
                                std::uint64_t seed) {
  auto items = sample_scene(scene, options.samples, derive_seed(seed, {seed_tag::kOracle, scene.scene_id}));
  auto init_rng = make_rng(seed, {seed_tag::kOracle, scene.scene_id, seed_tag::kModelInit});
  auto weights = ModelWeights::random(config, init_rng);
  auto shuffle_rng = make_rng(seed, {seed_tag::kOracle, scene.scene_id, seed_tag::kShuffle});
  const SgdOptions sgd{options.learning_rate, options.minibatch_size};
  for (std::size_t e = 0; e < options.epochs; ++e) {
    weights = sgd_epoch(weights, items, sgd, {}, shuffle_rng).weights;
  }
  return weights;
}

}  // namespace edgecl
