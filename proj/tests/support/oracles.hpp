#pragma once

// Independent reference implementations used to check the library. They are
// written for clarity, not speed, and share no code with core/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "edgecl/data_item.hpp"
#include "edgecl/model.hpp"

namespace oracle {

struct Net {
  std::size_t d, h, k;
  std::vector<double> p;  // [W1 | b1 | W2 | b2], row-major

  double W1(std::size_t i, std::size_t j) const { return p[i * d + j]; }
  double B1(std::size_t i) const { return p[h * d + i]; }
  double W2(std::size_t c, std::size_t i) const { return p[h * d + h + c * h + i]; }
  double B2(std::size_t c) const { return p[h * d + h + k * h + c]; }
};

inline Net from(const edgecl::ModelWeights& w) {
  const auto& c = w.config();
  return {c.input_dim, c.hidden_dim, c.num_classes, std::vector<double>(w.flat().begin(), w.flat().end())};
}

inline std::vector<double> hidden(const Net& n, const std::vector<double>& x) {
  std::vector<double> a(n.h);
  for (std::size_t i = 0; i < n.h; ++i) {
    long double z = n.B1(i);
    for (std::size_t j = 0; j < n.d; ++j) z += static_cast<long double>(n.W1(i, j)) * x[j];
    a[i] = std::tanh(static_cast<double>(z));
  }
  return a;
}

inline std::vector<double> probabilities(const Net& n, const std::vector<double>& x) {
  const auto a = hidden(n, x);
  std::vector<long double> z(n.k);
  for (std::size_t c = 0; c < n.k; ++c) {
    z[c] = n.B2(c);
    for (std::size_t i = 0; i < n.h; ++i) z[c] += static_cast<long double>(n.W2(c, i)) * a[i];
  }
  const long double top = *std::max_element(z.begin(), z.end());
  long double sum = 0;
  for (auto& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  std::vector<double> out(n.k);
  for (std::size_t c = 0; c < n.k; ++c) out[c] = static_cast<double>(z[c] / sum);
  return out;
}

inline double mean_loss(const Net& n, const std::vector<edgecl::DataItem>& batch) {
  long double total = 0;
  for (const auto& item : batch) {
    const auto a = hidden(n, item.features);
    std::vector<long double> z(n.k);
    for (std::size_t c = 0; c < n.k; ++c) {
      z[c] = n.B2(c);
      for (std::size_t i = 0; i < n.h; ++i) z[c] += static_cast<long double>(n.W2(c, i)) * a[i];
    }
    const long double top = *std::max_element(z.begin(), z.end());
    long double sum = 0;
    for (auto v : z) sum += std::exp(v - top);
    total += top + std::log(sum) - z[item.label];
  }
  return static_cast<double>(total / static_cast<long double>(batch.size()));
}

// Central differences with step `h` on every parameter.
inline std::vector<double> finite_difference_gradient(const Net& n, const std::vector<edgecl::DataItem>& batch,
                                                      double step) {
  std::vector<double> g(n.p.size());
  for (std::size_t q = 0; q < n.p.size(); ++q) {
    Net plus = n, minus = n;
    plus.p[q] += step;
    minus.p[q] -= step;
    g[q] = (mean_loss(plus, batch) - mean_loss(minus, batch)) / (2.0 * step);
  }
  return g;
}

inline double entropy(const std::vector<double>& p) {
  double h = 0;
  for (double v : p) {
    if (v > 0) h -= v * std::log(v);
  }
  return h;
}

inline double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  c = std::clamp(c, -1.0, 1.0);
  return 1.0 - c;
}

// Linear-interpolation percentile on a sorted copy.
inline double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct ReplayDecision {
  bool accepted;
  std::optional<double> min_distance;
  double threshold;
};

// From-scratch replay of the thresholded diversity sampler: for every offer,
// recompute the buffer contents, the minimum distance and the threshold
// without any incremental state.
inline std::vector<ReplayDecision> replay_sampler(const std::vector<std::vector<double>>& embeddings,
                                                  std::size_t capacity, double pct, std::size_t window,
                                                  double bootstrap, std::size_t bootstrap_min) {
  std::vector<ReplayDecision> out;
  std::vector<std::size_t> accepted_ids;  // in acceptance order
  std::vector<double> distances;          // every computed min distance, in offer order
  for (std::size_t n = 0; n < embeddings.size(); ++n) {
    std::vector<std::size_t> buffer(accepted_ids.end() - static_cast<std::ptrdiff_t>(
                                                              std::min(capacity, accepted_ids.size())),
                                    accepted_ids.end());
    double threshold = bootstrap;
    const std::size_t start = distances.size() > window ? distances.size() - window : 0;
    std::vector<double> recent(distances.begin() + static_cast<std::ptrdiff_t>(start), distances.end());
    if (recent.size() >= bootstrap_min) threshold = percentile(recent, pct);

    if (buffer.empty()) {
      out.push_back({true, std::nullopt, threshold});
      accepted_ids.push_back(n);
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (auto id : buffer) best = std::min(best, cosine_distance(embeddings[id], embeddings[n]));
    const bool accept = best >= threshold;
    out.push_back({accept, best, threshold});
    if (accept) accepted_ids.push_back(n);
    distances.push_back(best);
  }
  return out;
}

}  // namespace oracle
