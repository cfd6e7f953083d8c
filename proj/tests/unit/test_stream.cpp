#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "edgecl/stream.hpp"

using namespace edgecl;

namespace {

double nearest_centroid_accuracy(const SceneSpec& scene, const std::vector<DataItem>& items) {
  std::size_t ok = 0;
  for (const auto& item : items) {
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t k = 0; k < scene.centroids.size(); ++k) {
      double d = 0;
      for (std::size_t i = 0; i < item.features.size(); ++i) {
        d += (item.features[i] - scene.centroids[k][i]) * (item.features[i] - scene.centroids[k][i]);
      }
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    ok += static_cast<std::size_t>(best == item.label);
  }
  return static_cast<double>(ok) / static_cast<double>(items.size());
}

double norm_of_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

StreamScript one_scene(const SceneSpec& s, double duration, double rate) {
  StreamScript script;
  script.rate = rate;
  script.segments.push_back({s, duration, "A"});
  return script;
}

}  // namespace

TEST_SUITE("stream") {
  TEST_CASE("make_scene is deterministic and honors separation") {
    CHECK(make_scene(3, 4, 16, 4.0, 1.0, 0) == make_scene(3, 4, 16, 4.0, 1.0, 0));
    CHECK_FALSE(make_scene(3, 4, 16, 4.0, 1.0, 0) == make_scene(4, 4, 16, 4.0, 1.0, 0));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto s = make_scene(seed, 2, 2, 4.0, 1.0, 0);
      CHECK(norm_of_difference(s.centroids[0], s.centroids[1]) >= 4.0);
    }
    CHECK_THROWS_AS(make_scene(1, 8, 1, 50.0, 1.0, 0), std::invalid_argument);
  }

  TEST_CASE("low noise is separable, high noise is not") {
    const auto clean = make_scene(5, 4, 16, 4.0, 0.01, 0);
    CHECK(nearest_centroid_accuracy(clean, sample_scene(clean, 1000, 1)) >= 0.999);
    const auto noisy = make_scene(5, 4, 16, 4.0, 4.0, 0);
    CHECK(nearest_centroid_accuracy(noisy, sample_scene(noisy, 1000, 1)) <= 0.9);
  }

  TEST_CASE("perturb_scene moves every centroid by the drift norm") {
    const auto s = make_scene(8, 4, 16, 4.0, 1.0, 7);
    CHECK(perturb_scene(s, 0.0, 3) == s);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      for (double m : {1.0, 2.5}) {
        const auto p = perturb_scene(s, m, seed);
        CHECK(p.family_id == 7);
        double mean = 0;
        for (std::size_t k = 0; k < s.centroids.size(); ++k) {
          const double moved = norm_of_difference(p.centroids[k], s.centroids[k]);
          CHECK(std::abs(moved - m) < 1e-9);
          mean += moved / static_cast<double>(s.centroids.size());
        }
        CHECK(std::abs(mean - m) < 1e-9);
        double sum = 0;
        for (double q : p.priors) sum += q;
        CHECK(std::abs(sum - 1.0) < 1e-12);
      }
    }
    CHECK_THROWS_AS(perturb_scene(s, -1.0, 0), std::invalid_argument);
  }

  TEST_CASE("one 10 s scene at 5 items/s yields 50 items") {
    const auto s = make_scene(1, 3, 4, 3.0, 1.0, 0);
    const auto items = sample_stream(one_scene(s, 10.0, 5.0), 2);
    CHECK(items.size() == 50);
    for (std::size_t n = 0; n < items.size(); ++n) {
      CHECK(items[n].scene_id == s.scene_id);
      CHECK(items[n].index == n);
      CHECK(items[n].label < 3);
      if (n > 0) CHECK(items[n].arrival_time > items[n - 1].arrival_time);
    }
  }

  TEST_CASE("the scene that started last owns the boundary") {
    auto a = make_scene(1, 3, 4, 3.0, 1.0, 0);
    auto b = make_scene(2, 3, 4, 3.0, 1.0, 0);
    a.scene_id = 11;
    b.scene_id = 22;
    StreamScript script;
    script.rate = 10.0;
    script.segments = {{a, 10.0, "A"}, {b, 10.0, "B"}};
    const auto items = sample_stream(script, 3);
    for (const auto& item : items) {
      if (std::abs(item.arrival_time - 9.9) < 1e-9) CHECK(item.scene_id == 11);
      if (std::abs(item.arrival_time - 10.1) < 1e-9) CHECK(item.scene_id == 22);
      CHECK(item.scene_id == (item.arrival_time < 10.0 ? 11u : 22u));
    }
    CHECK(script.segment_at(9.99) == 0);
    CHECK(script.segment_at(10.0) == 1);
  }

  TEST_CASE("streams are deterministic in the seed") {
    const auto s = make_scene(4, 4, 8, 4.0, 1.0, 0);
    const auto a = sample_stream(one_scene(s, 20.0, 10.0), 9);
    const auto b = sample_stream(one_scene(s, 20.0, 10.0), 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
      CHECK(a[n].features == b[n].features);
      CHECK(a[n].label == b[n].label);
    }
  }

  TEST_CASE("class frequencies match priors within three standard errors") {
    auto s = make_scene(6, 4, 4, 3.0, 1.0, 0);
    s.priors = {0.1, 0.2, 0.3, 0.4};
    const auto items = sample_stream(one_scene(s, 1000.0, 10.0), 5);
    REQUIRE(items.size() == 10000);
    std::vector<double> counts(4, 0.0);
    for (const auto& item : items) counts[item.label] += 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double p = s.priors[k];
      const double se = std::sqrt(p * (1 - p) / 10000.0);
      CHECK(std::abs(counts[k] / 10000.0 - p) <= 3 * se);
    }
  }

  TEST_CASE("class distribution is stationary within a segment") {
    // Chi-square homogeneity test, first half vs second half, alpha 0.001 with 3 degrees of freedom.
    const double critical = 16.266;
    const FamilyParams fp;
    const auto backbone = family_backbone(10, 0, fp);
    const auto script = family_script(backbone, 10, 0, 3, 60.0, 40.0, fp);
    const auto items = sample_stream(script, 10);
    for (std::size_t seg = 0; seg < script.segments.size(); ++seg) {
      const double start = script.segment_start(seg);
      const double mid = start + script.segments[seg].duration / 2;
      const double end = start + script.segments[seg].duration;
      std::vector<std::vector<double>> table(2, std::vector<double>(4, 0.0));
      std::size_t n = 0;
      for (const auto& item : items) {
        if (item.arrival_time < start || item.arrival_time >= end) continue;
        table[item.arrival_time < mid ? 0 : 1][item.label] += 1.0;
        ++n;
      }
      REQUIRE(n >= 2000);
      double chi2 = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        const double col = table[0][k] + table[1][k];
        if (col == 0) continue;
        for (int r = 0; r < 2; ++r) {
          double row = 0;
          for (double v : table[r]) row += v;
          const double expected = row * col / static_cast<double>(n);
          chi2 += (table[r][k] - expected) * (table[r][k] - expected) / expected;
        }
      }
      CHECK(chi2 < critical);
    }
  }

  TEST_CASE("stitched scripts reuse scenes by tag") {
    std::map<std::string, SceneSpec> library{{"S1", make_scene(1, 4, 8, 4.0, 1.0, 0)},
                                             {"S2", make_scene(2, 4, 8, 4.0, 1.0, 0)},
                                             {"S3", make_scene(3, 4, 8, 4.0, 1.0, 0)}};
    const auto script =
        stitched_script({{"S1", 30}, {"S2", 30}, {"S1", 30}, {"S3", 30}, {"S3", 30}}, library, 10.0);
    REQUIRE(script.segments.size() == 5);
    CHECK(script.segments[0].scene == script.segments[2].scene);
    CHECK(script.segments[3].scene == script.segments[4].scene);
    CHECK_FALSE(script.segments[0].scene == script.segments[1].scene);
    CHECK(script.total_duration() == 150.0);
    CHECK_THROWS_AS(stitched_script({{"S9", 30}}, library, 10.0), std::invalid_argument);

    const auto single = stitched_script({{"S2", 30}}, library, 10.0);
    const auto a = sample_stream(single, 4);
    const auto b = sample_stream(one_scene(library["S2"], 30, 10.0), 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) CHECK(a[n].features == b[n].features);
  }

  TEST_CASE("family scenes share the family id and differ by variant") {
    const FamilyParams fp;
    const auto backbone = family_backbone(2, 3, fp);
    const auto s0 = family_scene(backbone, 2, 0, fp);
    const auto s1 = family_scene(backbone, 2, 1, fp);
    CHECK(s0.family_id == 3);
    CHECK(s1.family_id == 3);
    CHECK(s0.scene_id != s1.scene_id);
    CHECK(family_scene(backbone, 2, 1, fp) == s1);
    s0.validate();
  }

  TEST_CASE("streams dump to CSV with a header row") {
    const auto s = make_scene(1, 2, 3, 2.0, 1.0, 0);
    const auto items = sample_stream(one_scene(s, 1.0, 4.0), 1);
    std::ostringstream out;
    write_stream_csv(out, items);
    std::istringstream in(out.str());
    std::string line;
    std::size_t rows = 0;
    std::getline(in, line);
    CHECK(line.rfind("time,scene_id,label", 0) == 0);
    while (std::getline(in, line)) ++rows;
    CHECK(rows == items.size());
  }

  TEST_CASE("invalid scripts are rejected") {
    StreamScript empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
    auto script = one_scene(make_scene(1, 2, 3, 2.0, 1.0, 0), 0.0, 4.0);
    CHECK_THROWS_AS(script.validate(), std::invalid_argument);
    script = one_scene(make_scene(1, 2, 3, 2.0, 1.0, 0), 1.0, 0.0);
    CHECK_THROWS_AS(script.validate(), std::invalid_argument);
  }
}
