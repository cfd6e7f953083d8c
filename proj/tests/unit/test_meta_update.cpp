#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <doctest.h>

#include "edgecl/meta_update.hpp"

using namespace edgecl;

namespace {

ModelWeights filled(const ModelConfig& c, double v) {
  ModelWeights w(c);
  for (auto& x : w.flat()) x = v;
  return w;
}

BaseModelState warm_state(const ModelWeights& phi, Embedding centroid) {
  BaseModelState s;
  s.phi = phi;
  s.previous_centroid = std::move(centroid);
  return s;
}

}  // namespace

TEST_SUITE("meta_update") {
  TEST_CASE("epsilon gate") {
    const EwmaPolicy p;
    CHECK(select_epsilon(1.0, p) == 0.3);
    CHECK(select_epsilon(0.0, p) == 0.05);
    CHECK(select_epsilon(0.9, p) == 0.3);
    CHECK(select_epsilon(0.8999, p) == 0.05);
    CHECK(select_epsilon(-1.0, p) == 0.05);
    CHECK_THROWS_AS(select_epsilon(1.5, p), std::invalid_argument);
    CHECK_THROWS_AS(select_epsilon(std::nan(""), p), std::invalid_argument);
  }

  TEST_CASE("update examples") {
    const ModelConfig c{2, 2, 2};
    const auto phi = filled(c, 2.0);
    const Embedding centroid{1.0, 0.0};

    // zeta == phi leaves phi unchanged whatever the gate says.
    for (const auto& incoming : {Embedding{1.0, 0.0}, Embedding{0.0, 1.0}}) {
      CHECK(update_base(warm_state(phi, centroid), phi, incoming, EwmaPolicy{}).phi == phi);
    }
    // eps = 0 keeps phi.
    CHECK(update_base(warm_state(phi, centroid), filled(c, -3.0), centroid, EwmaPolicy::fixed(0.0)).phi == phi);
    // Same scene: eps_high, 2 -> 0.7 * 2 + 0.3 * 0.
    const auto same = update_base(warm_state(phi, centroid), filled(c, 0.0), Embedding{2.0, 0.0}, EwmaPolicy{});
    for (double v : same.phi.flat()) CHECK(v == doctest::Approx(1.4).epsilon(1e-15));
    REQUIRE(same.history.size() == 1);
    CHECK(*same.history[0].similarity == doctest::Approx(1.0));
    CHECK(same.history[0].epsilon == 0.3);
    // Orthogonal scene: eps_low, 2 -> 1.9.
    const auto other = update_base(warm_state(phi, centroid), filled(c, 0.0), Embedding{0.0, 1.0}, EwmaPolicy{});
    for (double v : other.phi.flat()) CHECK(v == doctest::Approx(1.9).epsilon(1e-15));
    CHECK(other.previous_centroid == Embedding{0.0, 1.0});
    CHECK(other.update_count == 1);
  }

  TEST_CASE("distance to zeta contracts by 1 - eps") {
    auto rng = make_rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const ModelConfig c{3, 4, 3};
    for (int trial = 0; trial < 50; ++trial) {
      const auto phi = ModelWeights::random(c, rng);
      const auto zeta = ModelWeights::random(c, rng);
      const Embedding prev{u(rng), u(rng), u(rng), u(rng)};
      const Embedding cur{u(rng), u(rng), u(rng), u(rng)};
      const auto next = update_base(warm_state(phi, prev), zeta, cur, EwmaPolicy{});
      const double eps = next.history.back().epsilon;
      double before = 0.0, after = 0.0;
      for (std::size_t q = 0; q < phi.size(); ++q) {
        before += std::pow(phi.flat()[q] - zeta.flat()[q], 2);
        after += std::pow(next.phi.flat()[q] - zeta.flat()[q], 2);
        CHECK(next.phi.flat()[q] >= std::min(phi.flat()[q], zeta.flat()[q]) - 1e-15);
        CHECK(next.phi.flat()[q] <= std::max(phi.flat()[q], zeta.flat()[q]) + 1e-15);
      }
      CHECK(std::sqrt(after) == doctest::Approx((1.0 - eps) * std::sqrt(before)).epsilon(1e-12));
    }
  }

  TEST_CASE("cold start uses eps_low and records no similarity") {
    const ModelConfig c{2, 2, 2};
    BaseModelState s;
    s.phi = filled(c, 1.0);
    const auto next = update_base(s, filled(c, 0.0), Embedding{1.0, 1.0}, EwmaPolicy{}, 7);
    REQUIRE(next.history.size() == 1);
    CHECK_FALSE(next.history[0].similarity.has_value());
    CHECK(next.history[0].epsilon == 0.05);
    CHECK(next.history[0].scene_id == 7);
    for (double v : next.phi.flat()) CHECK(v == doctest::Approx(0.95));
  }

  TEST_CASE("shape mismatch is rejected") {
    BaseModelState s;
    s.phi = filled(ModelConfig{2, 2, 2}, 0.0);
    CHECK_THROWS_AS(update_base(s, filled(ModelConfig{3, 2, 2}, 0.0), Embedding{1.0, 0.0}, EwmaPolicy{}),
                    std::invalid_argument);
    EwmaPolicy bad;
    bad.eps_low = 0.5;
    bad.eps_high = 0.2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("save and load are bit-identical") {
    auto rng = make_rng(22);
    const ModelConfig c{16, 12, 4};
    BaseModelState s;
    s.phi = ModelWeights::random(c, rng);
    s = update_base(s, ModelWeights::random(c, rng), Embedding(12, 0.25), EwmaPolicy{}, 3);
    s = update_base(s, ModelWeights::random(c, rng), Embedding(12, -0.1), EwmaPolicy{}, 4);
    const auto text = save_base(s);
    const auto back = load_base(text, c);
    CHECK(back.phi == s.phi);
    CHECK(back.previous_centroid == s.previous_centroid);
    CHECK(back.update_count == s.update_count);
    CHECK(save_base(back) == text);

    const auto path = std::filesystem::temp_directory_path() / "edgecl_unit_base.json";
    save_base_file(s, path);
    CHECK(load_base_file(path, c).phi == s.phi);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_base(text, ModelConfig{16, 8, 4}), std::invalid_argument);
    CHECK_THROWS_AS(load_base("{not json", c), std::invalid_argument);
    CHECK_THROWS_AS(load_base(R"({"format":"other","version":1})", c), std::invalid_argument);
  }
}
