#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "edgecl/experiments.hpp"
#include "edgecl/scheduler.hpp"

using namespace edgecl;

namespace {

StreamScript script_for(std::uint64_t seed, std::size_t scenes, double duration, double rate = 20.0) {
  const FamilyParams fp;
  return family_script(family_backbone(seed, 0, fp), seed, 0, scenes, duration, rate, fp);
}

PipelineConfig quick_config() {
  PipelineConfig pc;
  pc.retrain_period = 10.0;
  return pc;
}

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("traits describe each policy") {
    const auto l = policy_traits(PolicyId::Legilimens);
    CHECK(l.init == InitSource::Base);
    CHECK(l.stopping == StoppingRule::Score);
    CHECK(l.serving == ServingMode::StaleServe);
    REQUIRE(l.ewma.has_value());
    CHECK(l.ewma->eps_high == 0.3);
    CHECK(l.ewma->eps_low == 0.05);

    const auto e = policy_traits(PolicyId::Ekya);
    CHECK(e.init == InitSource::PreviousSpecialized);
    CHECK(e.stopping == StoppingRule::FixedEpochs);
    CHECK(e.serving == ServingMode::QueueReplay);
    CHECK_FALSE(e.ewma.has_value());

    CHECK(policy_traits(PolicyId::StaticEwma).ewma->eps_high == kStaticEwmaEpsilon);
    CHECK(policy_traits(PolicyId::StaticEwma).ewma->eps_low == kStaticEwmaEpsilon);
    CHECK(policy_traits(PolicyId::VanillaFull).ewma->eps_low == kVanillaEpsilon);
    CHECK(policy_traits(PolicyId::Oracle).offline_oracle);

    for (auto id : kAllPolicies) CHECK(parse_policy(to_string(id)) == id);
    CHECK_THROWS(parse_policy("nope"));
  }

  TEST_CASE("static and vanilla bases follow their fixed epsilon") {
    const auto script = script_for(1, 3, 20.0);
    const auto pc = quick_config();

    const auto st = run_pipeline(script, PolicyId::StaticEwma, pc, 1);
    REQUIRE(st.final_base.has_value());
    REQUIRE_FALSE(st.final_base->history.empty());
    for (const auto& r : st.final_base->history) CHECK(r.epsilon == 0.1);

    const auto va = run_pipeline(script, PolicyId::VanillaFull, pc, 1);
    REQUIRE(va.final_base.has_value());
    for (const auto& r : va.final_base->history) CHECK(r.epsilon == 1.0);
    // Full replacement: the base is the last specialized model.
    const RetrainSession* last = nullptr;
    for (const auto& s : va.sessions) {
      if (s.deployed) last = &s;
    }
    REQUIRE(last != nullptr);
    CHECK(va.final_base->phi == *last->deployed);
    CHECK(va.final_deployed == *last->deployed);

    const auto ek = run_pipeline(script, PolicyId::Ekya, pc, 1);
    CHECK_FALSE(ek.final_base.has_value());
  }

  TEST_CASE("ekya starts each session from its previous specialized model") {
    const auto script = script_for(2, 3, 20.0);
    const auto trace = run_pipeline(script, PolicyId::Ekya, quick_config(), 2);
    const ModelWeights* previous = nullptr;
    std::size_t checked = 0;
    for (const auto& s : trace.sessions) {
      if (s.skipped || !s.initial) continue;
      if (previous) {
        CHECK(*s.initial == *previous);
        ++checked;
      }
      if (s.deployed) previous = &*s.deployed;
    }
    CHECK(checked > 0);
    for (const auto& s : trace.sessions) {
      if (!s.skipped && !s.truncated) CHECK(s.epochs.size() == quick_config().fixed_epochs);
    }
  }

  TEST_CASE("the oracle never trains online and is near perfect on clean scenes") {
    FamilyParams fp;
    fp.noise = 0.05;
    const auto script = family_script(family_backbone(3, 0, fp), 3, 0, 2, 15.0, 20.0, fp);
    const auto trace = run_pipeline(script, PolicyId::Oracle, quick_config(), 3);
    CHECK(trace.sessions.empty());
    CHECK(trace.timeline.total(LaneTag::Training) == 0.0);
    CHECK(trace.ledger.total == 0);
    CHECK(trace.overall_accuracy() >= 0.999);
  }

  TEST_CASE("ekya with a zero epoch budget never changes its model") {
    const auto script = script_for(4, 2, 20.0);
    auto pc = quick_config();
    pc.fixed_epochs = 0;
    auto rng = make_rng(4);
    InitialState init;
    init.deployed = ModelWeights::random(pc.model, rng);
    const auto trace = run_pipeline(script, PolicyId::Ekya, pc, 4, init);
    for (const auto& s : trace.sessions) {
      CHECK(s.epochs.empty());
      CHECK(s.skipped);
    }
    CHECK(trace.final_deployed == *init.deployed);
  }

  TEST_CASE("on a stationary scene ekya and legilimens reach the same steady state") {
    // Steady state: accuracy over the last third of a 600 s single-scene stream.
    ExperimentConfig cfg;
    cfg.script.scenes = 1;
    cfg.script.scene_duration = 600.0;
    cfg.pipeline.retrain_period = 10.0;
    const double from = 400.0;
    auto tail_accuracy = [&](const RunTrace& t) {
      double ok = 0.0, n = 0.0;
      for (const auto& item : t.items) {
        if (item.arrival_time < from) continue;
        ok += item.correct ? 1.0 : 0.0;
        n += 1.0;
      }
      return ok / n;
    };
    double gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto script = build_script(cfg, seed);
      const double l = tail_accuracy(run_pipeline(script, PolicyId::Legilimens, cfg.pipeline, seed));
      const double e = tail_accuracy(run_pipeline(script, PolicyId::Ekya, cfg.pipeline, seed));
      gap += (l - e) / 10.0;
    }
    CHECK(std::abs(gap) <= 0.02);
  }

  TEST_CASE("with expensive training ekya spends a larger share of the device on it") {
    const auto script = script_for(5, 2, 30.0);
    auto pc = quick_config();
    pc.cost.train_cost_per_item *= 8.0;
    const double l = run_pipeline(script, PolicyId::Legilimens, pc, 5).training_fraction();
    const double e = run_pipeline(script, PolicyId::Ekya, pc, 5).training_fraction();
    CHECK(e > l);
  }

  TEST_CASE("the oracle model learns its scene") {
    const FamilyParams fp;
    const auto scene = family_scene(family_backbone(6, 0, fp), 6, 0, fp);
    OracleOptions o;
    o.samples = 800;
    o.epochs = 20;
    const auto w = train_oracle_model(scene, ModelConfig{}, o, 6);
    const auto test = sample_scene(scene, 500, 66);
    std::size_t ok = 0;
    for (const auto& item : test) ok += forward(w, item.features).prediction.predicted_class == item.label ? 1 : 0;
    CHECK(static_cast<double>(ok) / 500.0 >= 0.9);
    CHECK(train_oracle_model(scene, ModelConfig{}, o, 6) == w);
  }
}
