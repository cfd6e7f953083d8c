#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "edgecl/model.hpp"
#include "oracles.hpp"

using namespace edgecl;

namespace {

ModelWeights hand_model() {
  ModelWeights w(ModelConfig{2, 2, 2});
  w.w1(0, 0) = 0.5;
  w.w1(0, 1) = -0.3;
  w.w1(1, 0) = 0.2;
  w.w1(1, 1) = 0.8;
  w.b1(0) = 0.3;
  w.b1(1) = -0.2;
  w.w2(0, 0) = 1.0;
  w.w2(0, 1) = -1.0;
  w.w2(1, 0) = 0.5;
  w.w2(1, 1) = 0.25;
  w.b2(0) = 0.0;
  w.b2(1) = 0.1;
  return w;
}

std::vector<DataItem> random_batch(const ModelConfig& c, std::size_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> label(0, c.num_classes - 1);
  std::vector<DataItem> batch(n);
  for (std::size_t i = 0; i < n; ++i) {
    batch[i].features.resize(c.input_dim);
    for (auto& v : batch[i].features) v = g(rng);
    batch[i].label = label(rng);
    batch[i].index = i;
  }
  return batch;
}

std::vector<DataItem> two_blobs(std::size_t n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> g(0.0, 0.7);
  std::vector<DataItem> items(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = i % 2;
    const double c = y == 0 ? -1.5 : 1.5;
    items[i].features = {c + g(rng), c + g(rng)};
    items[i].label = y;
    items[i].index = i;
  }
  return items;
}

// Plain logistic regression by full-batch gradient descent.
double logistic_regression_accuracy(const std::vector<DataItem>& train, const std::vector<DataItem>& test) {
  double w0 = 0, w1 = 0, b = 0;
  for (int it = 0; it < 500; ++it) {
    double g0 = 0, g1 = 0, gb = 0;
    for (const auto& item : train) {
      const double z = w0 * item.features[0] + w1 * item.features[1] + b;
      const double err = 1.0 / (1.0 + std::exp(-z)) - static_cast<double>(item.label);
      g0 += err * item.features[0];
      g1 += err * item.features[1];
      gb += err;
    }
    const double n = static_cast<double>(train.size());
    w0 -= 0.5 * g0 / n;
    w1 -= 0.5 * g1 / n;
    b -= 0.5 * gb / n;
  }
  std::size_t ok = 0;
  for (const auto& item : test) {
    const double z = w0 * item.features[0] + w1 * item.features[1] + b;
    ok += static_cast<std::size_t>((z > 0) == (item.label == 1));
  }
  return static_cast<double>(ok) / static_cast<double>(test.size());
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("zero weights give uniform probabilities") {
    const ModelConfig c{5, 3, 4};
    const ModelWeights w(c);
    const auto out = forward(w, std::vector<double>{1.0, -2.0, 3.0, 0.5, 7.0});
    for (double p : out.prediction.probabilities) CHECK(p == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(out.prediction.entropy == doctest::Approx(std::log(4.0)));
  }

  TEST_CASE("equal logits split evenly") {
    ModelWeights w(ModelConfig{1, 1, 2});
    w.b2(0) = 3.7;
    w.b2(1) = 3.7;
    const auto out = forward(w, std::vector<double>{0.4});
    CHECK(out.prediction.probabilities[0] == 0.5);
    CHECK(out.prediction.probabilities[1] == 0.5);
  }

  TEST_CASE("hand-evaluated forward pass") {
    const auto out = forward(hand_model(), std::vector<double>{1.0, 2.0});
    CHECK(std::abs(out.embedding[0] - 0.197375320224904) < 1e-12);
    CHECK(std::abs(out.embedding[1] - 0.9216685544064713) < 1e-12);
    CHECK(std::abs(out.prediction.probabilities[0] - 0.23986896589749757) < 1e-12);
    CHECK(std::abs(out.prediction.probabilities[1] - 0.7601310341025024) < 1e-12);
    CHECK(std::abs(out.prediction.entropy - 0.5509288406893419) < 1e-12);
    CHECK(out.prediction.predicted_class == 1);
  }

  TEST_CASE("forward rejects a feature dimension mismatch") {
    CHECK_THROWS_AS(forward(hand_model(), std::vector<double>{1.0}), std::invalid_argument);
  }

  TEST_CASE("probabilities form a simplex and entropy is bounded") {
    auto rng = make_rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const ModelConfig c{1 + trial % 8, 1 + trial % 7, 2 + trial % 5};
      auto w = ModelWeights::random(c, rng);
      for (auto& v : w.flat()) v *= 4.0;
      const auto batch = random_batch(c, 1, rng);
      const auto out = forward(w, batch[0].features);
      double sum = 0.0;
      for (double p : out.prediction.probabilities) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
      CHECK(out.prediction.entropy >= 0.0);
      CHECK(out.prediction.entropy <= std::log(static_cast<double>(c.num_classes)) + 1e-12);
      for (double e : out.embedding) {
        CHECK(e > -1.0);
        CHECK(e < 1.0);
      }
    }
  }

  TEST_CASE("cross-entropy values") {
    CHECK(cross_entropy_loss(Prediction{{0.0, 1.0}, 1, 0.0}, 1) == 0.0);
    CHECK(cross_entropy_loss(Prediction{{0.25, 0.25, 0.25, 0.25}, 0, 0.0}, 2) ==
          doctest::Approx(1.386294).epsilon(1e-6));
    CHECK(cross_entropy_loss(Prediction{{0.5, 0.5}, 0, 0.0}, 0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK_THROWS_AS(cross_entropy_loss(Prediction{{0.5, 0.5}, 0, 0.0}, 2), std::invalid_argument);
  }

  TEST_CASE("gradient matches finite differences") {
    auto rng = make_rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const ModelConfig c{1 + trial % 8, 1 + (trial * 3) % 8, 2 + trial % 7};
      const auto w = ModelWeights::random(c, rng);
      const auto batch = random_batch(c, 1 + trial % 16, rng);
      const auto g = gradient(w, batch);
      const auto fd = oracle::finite_difference_gradient(oracle::from(w), batch, 1e-5);
      for (std::size_t q = 0; q < fd.size(); ++q) {
        const double scale = std::max(std::abs(fd[q]), 1e-8);
        CHECK(std::abs(g.flat()[q] - fd[q]) <= 1e-4 * std::max(scale, 1e-4));
      }
    }
  }

  TEST_CASE("gradient vanishes at a saturated separable minimum") {
    ModelWeights w(ModelConfig{1, 1, 2});
    w.w1(0, 0) = 10.0;
    w.w2(0, 0) = -50.0;
    w.w2(1, 0) = 50.0;
    std::vector<DataItem> batch{{{1.0}, 1, 0, 0, 0}, {{-1.0}, 0, 0, 0, 1}};
    CHECK(gradient(w, batch).norm() < 1e-6);
  }

  TEST_CASE("duplicating the batch leaves the mean gradient unchanged") {
    auto rng = make_rng(6);
    const ModelConfig c{6, 5, 3};
    const auto w = ModelWeights::random(c, rng);
    const auto batch = random_batch(c, 9, rng);
    auto doubled = batch;
    doubled.insert(doubled.end(), batch.begin(), batch.end());
    const auto a = gradient(w, batch);
    const auto b = gradient(w, doubled);
    for (std::size_t q = 0; q < a.size(); ++q) CHECK(std::abs(a.flat()[q] - b.flat()[q]) < 1e-12);
  }

  TEST_CASE("gradient rejects an empty batch") {
    CHECK_THROWS_AS(gradient(hand_model(), std::vector<DataItem>{}), std::invalid_argument);
  }

  TEST_CASE("zero learning rate leaves weights unchanged") {
    auto rng = make_rng(7);
    const ModelConfig c{4, 3, 3};
    const auto w = ModelWeights::random(c, rng);
    const auto batch = random_batch(c, 12, rng);
    auto shuffle = make_rng(8);
    const auto r = sgd_epoch(w, batch, SgdOptions{0.0, 4}, {}, shuffle);
    CHECK(r.weights == w);
    CHECK_FALSE(r.holdout_accuracy.has_value());
  }

  TEST_CASE("a single-item epoch is one step against the gradient") {
    auto rng = make_rng(9);
    const ModelConfig c{3, 4, 2};
    const auto w = ModelWeights::random(c, rng);
    const auto batch = random_batch(c, 1, rng);
    // Hand-applied update with the oracle's finite-difference gradient as the direction.
    const auto g = gradient(w, batch);
    auto shuffle = make_rng(10);
    const auto r = sgd_epoch(w, batch, SgdOptions{0.3, 8}, batch, shuffle);
    for (std::size_t q = 0; q < w.size(); ++q) {
      CHECK(std::abs(r.weights.flat()[q] - (w.flat()[q] - 0.3 * g.flat()[q])) < 1e-12);
    }
    REQUIRE(r.holdout_accuracy.has_value());
    CHECK((*r.holdout_accuracy == 0.0 || *r.holdout_accuracy == 1.0));
  }

  TEST_CASE("learns a linearly separable two-class set") {
    const auto train = two_blobs(200, 1);
    const auto test = two_blobs(400, 2);
    REQUIRE(logistic_regression_accuracy(train, test) >= 0.95);
    auto rng = make_rng(3);
    auto w = ModelWeights::random(ModelConfig{2, 4, 2}, rng);
    for (int epoch = 0; epoch < 50; ++epoch) w = sgd_epoch(w, train, SgdOptions{}, {}, rng).weights;
    CHECK(*accuracy(w, test) >= 0.95);
  }

  TEST_CASE("training is deterministic in the seed") {
    const auto train = two_blobs(64, 4);
    auto run = [&] {
      auto rng = make_rng(12);
      auto w = ModelWeights::random(ModelConfig{2, 3, 2}, rng);
      for (int epoch = 0; epoch < 7; ++epoch) w = sgd_epoch(w, train, SgdOptions{}, {}, rng).weights;
      return w;
    };
    CHECK(run() == run());
  }

  TEST_CASE("entropy values") {
    CHECK(entropy(std::vector<double>{0.0, 1.0, 0.0}) == 0.0);
    CHECK(entropy(std::vector<double>(5, 0.2)) == doctest::Approx(std::log(5.0)));
    CHECK(entropy(std::vector<double>{0.5, 0.5}) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK_THROWS_AS(entropy(std::vector<double>{0.6, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(entropy(std::vector<double>{-0.5, 1.5}), std::invalid_argument);
  }

  TEST_CASE("cosine similarity values") {
    const std::vector<double> a{0.3, -1.2, 2.0};
    CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
    CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
    CHECK(cosine_similarity(std::vector<double>{1, 1}, std::vector<double>{1, 0}) ==
          doctest::Approx(0.707107).epsilon(1e-6));
    CHECK_THROWS_AS(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}), std::invalid_argument);
  }

  TEST_CASE("centroid values") {
    const std::vector<Embedding> one{{0.5, -2.0}};
    CHECK(centroid(one) == one[0]);
    const std::vector<Embedding> pair{{1.5, -2.0}, {-1.5, 2.0}};
    CHECK(centroid(pair) == Embedding{0.0, 0.0});
    const std::vector<Embedding> three{{1, 0}, {0, 1}, {2, 3}};
    const auto c = centroid(three);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(4.0 / 3.0));
    CHECK_THROWS_AS(centroid(std::vector<Embedding>{}), std::invalid_argument);
  }

  TEST_CASE("interpolation endpoints and hull") {
    auto rng = make_rng(13);
    const ModelConfig c{3, 3, 3};
    const auto phi = ModelWeights::random(c, rng);
    const auto zeta = ModelWeights::random(c, rng);
    CHECK(interpolate(phi, zeta, 0.0) == phi);
    CHECK(interpolate(phi, zeta, 1.0) == zeta);
    for (double eps : {0.05, 0.3, 0.77}) {
      const auto mid = interpolate(phi, zeta, eps);
      for (std::size_t q = 0; q < phi.size(); ++q) {
        CHECK(mid.flat()[q] >= std::min(phi.flat()[q], zeta.flat()[q]));
        CHECK(mid.flat()[q] <= std::max(phi.flat()[q], zeta.flat()[q]));
      }
    }
    ModelWeights one(ModelConfig{1, 1, 2}), zero(ModelConfig{1, 1, 2});
    for (auto& v : one.flat()) v = 1.0;
    const auto blended = interpolate(one, zero, 0.3);
    for (double v : blended.flat()) CHECK(v == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS_AS(interpolate(phi, ModelWeights(ModelConfig{2, 3, 3}), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(interpolate(phi, zeta, 1.5), std::invalid_argument);
  }

  TEST_CASE("weights round-trip through the flat layout") {
    auto rng = make_rng(14);
    const ModelConfig c{4, 2, 3};
    const auto w = ModelWeights::random(c, rng);
    const std::vector<double> flat(w.flat().begin(), w.flat().end());
    CHECK(ModelWeights::from_flat(c, flat) == w);
    CHECK_THROWS_AS(ModelWeights::from_flat(c, std::vector<double>(3)), std::invalid_argument);
    CHECK_THROWS_AS(ModelConfig({2, 2, 1}).validate(), std::invalid_argument);
  }
}
