#include "edgecl/stream.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "edgecl/rng.hpp"

namespace edgecl {

namespace {

constexpr int kMaxSceneRetries = 1000;

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double min_pairwise(const std::vector<std::vector<double>>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::min(best, distance(points[i], points[j]));
  }
  return best;
}

std::vector<double> random_direction(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& x : v) {
      x = normal(rng);
      n2 += x * x;
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& x : v) x *= inv;
  return v;
}

}  // namespace

void SceneSpec::validate() const {
  if (centroids.size() < 2) throw std::invalid_argument("SceneSpec: need at least two classes");
  const std::size_t d = centroids.front().size();
  if (d == 0) throw std::invalid_argument("SceneSpec: zero-dimensional centroids");
  for (const auto& c : centroids) {
    if (c.size() != d) throw std::invalid_argument("SceneSpec: centroid dimension mismatch");
    for (double v : c) {
      if (!std::isfinite(v)) throw std::invalid_argument("SceneSpec: non-finite centroid");
    }
  }
  if (!(noise > 0.0) || !std::isfinite(noise)) throw std::invalid_argument("SceneSpec: noise must be > 0");
  if (priors.size() != centroids.size()) throw std::invalid_argument("SceneSpec: priors size != num classes");
  double sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) throw std::invalid_argument("SceneSpec: negative prior");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("SceneSpec: priors must sum to 1");
}

void StreamScript::validate() const {
  if (segments.empty()) throw std::invalid_argument("StreamScript: no segments");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("StreamScript: rate must be > 0");
  const auto d = segments.front().scene.input_dim();
  const auto k = segments.front().scene.num_classes();
  for (const auto& s : segments) {
    if (!(s.duration > 0.0)) throw std::invalid_argument("StreamScript: segment durations must be > 0");
    s.scene.validate();
    if (s.scene.input_dim() != d || s.scene.num_classes() != k) {
      throw std::invalid_argument("StreamScript: scenes disagree on dimensions");
    }
  }
}

double StreamScript::total_duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

double StreamScript::segment_start(std::size_t segment) const {
  double t = 0.0;
  for (std::size_t i = 0; i < segment && i < segments.size(); ++i) t += segments[i].duration;
  return t;
}

std::size_t StreamScript::segment_at(double t) const {
  double start = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (start <= t) active = i;
    start += segments[i].duration;
  }
  return active;
}

SceneSpec make_scene(std::uint64_t seed, std::size_t num_classes, std::size_t input_dim,
                     double separation, double noise, std::size_t family_id) {
  if (num_classes < 2) throw std::invalid_argument("make_scene: need at least two classes");
  if (input_dim < 1) throw std::invalid_argument("make_scene: input_dim must be >= 1");
  if (!(separation > 0.0)) throw std::invalid_argument("make_scene: separation must be > 0");
  if (!(noise > 0.0)) throw std::invalid_argument("make_scene: noise must be > 0");

  auto rng = make_rng(seed, {seed_tag::kScene});
  // Typical pairwise distance of N(0, s^2 I) points is s*sqrt(2d); aim a bit above the floor.
  const double spread = 1.25 * separation / std::sqrt(2.0 * static_cast<double>(input_dim));
  std::normal_distribution<double> normal(0.0, spread);

  SceneSpec scene;
  scene.noise = noise;
  scene.family_id = family_id;
  scene.priors.assign(num_classes, 1.0 / static_cast<double>(num_classes));
  for (int attempt = 0; attempt < kMaxSceneRetries; ++attempt) {
    scene.centroids.assign(num_classes, std::vector<double>(input_dim));
    for (auto& c : scene.centroids) {
      for (auto& v : c) v = normal(rng);
    }
    if (min_pairwise(scene.centroids) >= separation) return scene;
  }
  throw std::invalid_argument("make_scene: could not place " + std::to_string(num_classes) +
                              " centroids at separation " + std::to_string(separation) + " in " +
                              std::to_string(input_dim) + " dimensions");
}

namespace {

void jitter_priors(SceneSpec& scene, double prior_jitter, Rng& rng) {
  if (prior_jitter == 0.0) return;
  std::normal_distribution<double> normal(0.0, prior_jitter);
  double sum = 0.0;
  for (auto& p : scene.priors) {
    p *= std::exp(normal(rng));
    sum += p;
  }
  for (auto& p : scene.priors) p /= sum;
}

}  // namespace

SceneSpec perturb_scene(const SceneSpec& scene, double drift_magnitude, std::uint64_t seed,
                        double prior_jitter) {
  if (!(drift_magnitude >= 0.0)) throw std::invalid_argument("perturb_scene: drift_magnitude must be >= 0");
  if (!(prior_jitter >= 0.0)) throw std::invalid_argument("perturb_scene: prior_jitter must be >= 0");
  scene.validate();
  SceneSpec out = scene;
  if (drift_magnitude == 0.0) return out;

  auto rng = make_rng(seed, {seed_tag::kScene});
  for (auto& c : out.centroids) {
    const auto dir = random_direction(c.size(), rng);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += drift_magnitude * dir[i];
  }
  jitter_priors(out, prior_jitter, rng);
  return out;
}

std::vector<DataItem> sample_scene(const SceneSpec& scene, std::size_t count, std::uint64_t seed) {
  scene.validate();
  auto rng = make_rng(seed, {seed_tag::kStream});
  std::discrete_distribution<std::size_t> classes(scene.priors.begin(), scene.priors.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DataItem> items(count);
  for (std::size_t n = 0; n < count; ++n) {
    auto& item = items[n];
    item.label = classes(rng);
    item.scene_id = scene.scene_id;
    item.index = n;
    const auto& c = scene.centroids[item.label];
    item.features.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) item.features[i] = c[i] + scene.noise * normal(rng);
  }
  return items;
}

std::vector<DataItem> sample_stream(const StreamScript& script, std::uint64_t seed) {
  script.validate();
  const double total = script.total_duration();
  // Regular grid t_n = n / rate over [0, total).
  auto count = static_cast<std::size_t>(std::ceil(total * script.rate));
  while (count > 0 && static_cast<double>(count - 1) / script.rate >= total) --count;
  while (static_cast<double>(count) / script.rate < total) ++count;

  std::vector<double> starts(script.segments.size());
  for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = script.segment_start(i);

  auto rng = make_rng(seed, {seed_tag::kStream});
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::discrete_distribution<std::size_t>> classes;
  for (const auto& s : script.segments) classes.emplace_back(s.scene.priors.begin(), s.scene.priors.end());

  std::vector<DataItem> items(count);
  std::size_t seg = 0;
  for (std::size_t n = 0; n < count; ++n) {
    const double t = static_cast<double>(n) / script.rate;
    while (seg + 1 < starts.size() && starts[seg + 1] <= t) ++seg;
    const auto& scene = script.segments[seg].scene;
    auto& item = items[n];
    item.arrival_time = t;
    item.index = n;
    item.scene_id = scene.scene_id;
    item.label = classes[seg](rng);
    const auto& c = scene.centroids[item.label];
    item.features.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) item.features[i] = c[i] + scene.noise * normal(rng);
  }
  return items;
}

StreamScript stitched_script(const std::vector<std::pair<std::string, double>>& segments,
                             const std::map<std::string, SceneSpec>& library, double rate) {
  StreamScript script;
  script.rate = rate;
  for (const auto& [tag, duration] : segments) {
    auto it = library.find(tag);
    if (it == library.end()) throw std::invalid_argument("stitched_script: unknown scene tag '" + tag + "'");
    script.segments.push_back({it->second, duration, tag});
  }
  script.validate();
  return script;
}

void FamilyParams::validate() const {
  if (num_classes < 2 || input_dim < 1) throw std::invalid_argument("FamilyParams: need num_classes >= 2, input_dim >= 1");
  if (!(separation > 0.0) || !(noise > 0.0)) throw std::invalid_argument("FamilyParams: separation and noise must be > 0");
  if (!(family_offset >= 0.0) || !(scene_shift >= 0.0) || !(scene_drift >= 0.0) || !(prior_jitter >= 0.0)) {
    throw std::invalid_argument("FamilyParams: offsets, drift and jitter must be >= 0");
  }
}

namespace {

void shift_all(SceneSpec& scene, double magnitude, Rng& rng) {
  if (magnitude == 0.0) return;
  const auto dir = random_direction(scene.input_dim(), rng);
  for (auto& c : scene.centroids) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += magnitude * dir[i];
  }
}

// Orthonormal directions along which the scenes of one family move: the span
// of the backbone's class layout, topped up with seeded random directions.
std::vector<std::vector<double>> family_drift_basis(const SceneSpec& backbone, std::uint64_t seed, std::size_t rank) {
  const std::size_t dim = backbone.input_dim();
  std::vector<double> mean(dim, 0.0);
  for (const auto& c : backbone.centroids) {
    for (std::size_t i = 0; i < dim; ++i) mean[i] += c[i] / static_cast<double>(backbone.num_classes());
  }
  std::vector<std::vector<double>> candidates;
  for (const auto& c : backbone.centroids) {
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = c[i] - mean[i];
    candidates.push_back(std::move(v));
  }
  auto rng = make_rng(seed, {seed_tag::kFamily, backbone.family_id, seed_tag::kStream});
  std::vector<std::vector<double>> basis;
  std::size_t next = 0;
  while (basis.size() < rank) {
    auto v = next < candidates.size() ? candidates[next++] : random_direction(dim, rng);
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += v[i] * b[i];
      for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * b[i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

SceneSpec family_backbone(std::uint64_t seed, std::size_t family_id, const FamilyParams& params) {
  params.validate();
  auto scene = make_scene(derive_seed(seed, {seed_tag::kFamily, family_id}), params.num_classes,
                          params.input_dim, params.separation, params.noise, family_id);
  auto rng = make_rng(seed, {seed_tag::kFamily, family_id, seed_tag::kScene});
  shift_all(scene, params.family_offset, rng);
  scene.scene_id = family_id * 1000;
  return scene;
}

SceneSpec family_scene(const SceneSpec& backbone, std::uint64_t seed, std::size_t variant,
                       const FamilyParams& params) {
  params.validate();
  const auto variant_seed = derive_seed(seed, {seed_tag::kFamily, backbone.family_id, variant + 1});
  SceneSpec scene;
  if (params.drift_rank == 0 || params.drift_rank >= backbone.input_dim()) {
    scene = perturb_scene(backbone, params.scene_drift, variant_seed, params.prior_jitter);
  } else {
    scene = backbone;
    const auto basis = family_drift_basis(backbone, seed, params.drift_rank);
    auto drift_rng = make_rng(variant_seed, {seed_tag::kScene});
    for (auto& c : scene.centroids) {
      const auto coeff = random_direction(params.drift_rank, drift_rng);
      for (std::size_t r = 0; r < basis.size(); ++r) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += params.scene_drift * coeff[r] * basis[r][i];
      }
    }
    jitter_priors(scene, params.prior_jitter, drift_rng);
  }
  auto rng = make_rng(variant_seed, {seed_tag::kFamily});
  shift_all(scene, params.scene_shift, rng);
  scene.scene_id = backbone.family_id * 1000 + variant + 1;
  return scene;
}

StreamScript family_script(const SceneSpec& backbone, std::uint64_t seed, std::size_t first_variant,
                           std::size_t count, double duration, double rate, const FamilyParams& params) {
  StreamScript script;
  script.rate = rate;
  for (std::size_t v = first_variant; v < first_variant + count; ++v) {
    script.segments.push_back({family_scene(backbone, seed, v, params), duration,
                               "f" + std::to_string(backbone.family_id) + "v" + std::to_string(v)});
  }
  script.validate();
  return script;
}

void write_stream_csv(std::ostream& out, const std::vector<DataItem>& items) {
  const std::size_t d = items.empty() ? 0 : items.front().features.size();
  out << "time,scene_id,label";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << i;
  out << '\n';
  out << std::setprecision(17);
  for (const auto& item : items) {
    out << item.arrival_time << ',' << item.scene_id << ',' << item.label;
    for (double v : item.features) out << ',' << v;
    out << '\n';
  }
}

}  // namespace edgecl
