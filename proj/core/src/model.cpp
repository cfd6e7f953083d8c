#include "edgecl/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace edgecl {

namespace {

void check_dims(const ModelWeights& weights, std::span<const double> features) {
  if (weights.size() == 0) throw std::invalid_argument("forward: model has no parameters");
  if (features.size() != weights.config().input_dim) {
    throw std::invalid_argument("forward: feature dimension " + std::to_string(features.size()) +
                                " does not match model input_dim " +
                                std::to_string(weights.config().input_dim));
  }
}

// Hidden activations and raw logits for one input.
void forward_raw(const ModelWeights& w, std::span<const double> x, Vector& hidden, Vector& logits) {
  const auto& c = w.config();
  hidden.assign(c.hidden_dim, 0.0);
  logits.assign(c.num_classes, 0.0);
  for (std::size_t i = 0; i < c.hidden_dim; ++i) {
    double z = w.b1(i);
    for (std::size_t j = 0; j < c.input_dim; ++j) z += w.w1(i, j) * x[j];
    hidden[i] = std::tanh(z);
  }
  for (std::size_t k = 0; k < c.num_classes; ++k) {
    double z = w.b2(k);
    for (std::size_t i = 0; i < c.hidden_dim; ++i) z += w.w2(k, i) * hidden[i];
    logits[k] = z;
  }
}

Vector softmax(const Vector& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  Vector p(logits.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp(logits[k] - top);
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

double log_sum_exp(const Vector& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - top);
  return top + std::log(sum);
}

double raw_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace

void ModelConfig::validate() const {
  if (input_dim < 1) throw std::invalid_argument("ModelConfig: input_dim must be >= 1");
  if (hidden_dim < 1) throw std::invalid_argument("ModelConfig: hidden_dim must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("ModelConfig: num_classes must be >= 2");
}

ModelWeights::ModelWeights(const ModelConfig& config) : config_(config) {
  config_.validate();
  params_.assign(config_.parameter_count(), 0.0);
}

ModelWeights ModelWeights::random(const ModelConfig& config, Rng& rng) {
  ModelWeights w(config);
  const double r1 = 1.0 / std::sqrt(static_cast<double>(config.input_dim));
  const double r2 = 1.0 / std::sqrt(static_cast<double>(config.hidden_dim));
  std::uniform_real_distribution<double> layer1(-r1, r1);
  std::uniform_real_distribution<double> layer2(-r2, r2);
  const std::size_t split = w.w2_offset();
  for (std::size_t i = 0; i < w.params_.size(); ++i) {
    w.params_[i] = i < split ? layer1(rng) : layer2(rng);
  }
  return w;
}

ModelWeights ModelWeights::from_flat(const ModelConfig& config, std::vector<double> flat) {
  config.validate();
  if (flat.size() != config.parameter_count()) {
    throw std::invalid_argument("ModelWeights::from_flat: expected " +
                                std::to_string(config.parameter_count()) + " parameters, got " +
                                std::to_string(flat.size()));
  }
  ModelWeights w;
  w.config_ = config;
  w.params_ = std::move(flat);
  return w;
}

bool ModelWeights::all_finite() const {
  return std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); });
}

double ModelWeights::norm() const {
  double s = 0.0;
  for (double v : params_) s += v * v;
  return std::sqrt(s);
}

ForwardResult forward(const ModelWeights& weights, std::span<const double> features) {
  check_dims(weights, features);
  ForwardResult out;
  Vector logits;
  forward_raw(weights, features, out.embedding, logits);
  auto& pred = out.prediction;
  pred.probabilities = softmax(logits);
  pred.predicted_class = static_cast<std::size_t>(
      std::max_element(pred.probabilities.begin(), pred.probabilities.end()) -
      pred.probabilities.begin());
  const double max_entropy = std::log(static_cast<double>(pred.probabilities.size()));
  pred.entropy = std::clamp(raw_entropy(pred.probabilities), 0.0, max_entropy);
  return out;
}

double cross_entropy_loss(const Prediction& prediction, std::size_t label) {
  if (label >= prediction.probabilities.size()) {
    throw std::invalid_argument("cross_entropy_loss: label " + std::to_string(label) +
                                " out of range for " +
                                std::to_string(prediction.probabilities.size()) + " classes");
  }
  return -std::log(prediction.probabilities[label]);
}

double mean_loss(const ModelWeights& weights, std::span<const DataItem> batch) {
  if (batch.empty()) throw std::invalid_argument("mean_loss: empty batch");
  Vector hidden, logits;
  double total = 0.0;
  for (const auto& item : batch) {
    check_dims(weights, item.features);
    if (item.label >= weights.config().num_classes) {
      throw std::invalid_argument("mean_loss: label out of range");
    }
    forward_raw(weights, item.features, hidden, logits);
    total += log_sum_exp(logits) - logits[item.label];
  }
  return total / static_cast<double>(batch.size());
}

ModelWeights gradient(const ModelWeights& weights, std::span<const DataItem> batch) {
  if (batch.empty()) throw std::invalid_argument("gradient: empty batch");
  const auto& c = weights.config();
  ModelWeights grad(c);
  Vector hidden, logits, delta_hidden(c.hidden_dim);
  for (const auto& item : batch) {
    check_dims(weights, item.features);
    if (item.label >= c.num_classes) throw std::invalid_argument("gradient: label out of range");
    forward_raw(weights, item.features, hidden, logits);
    Vector delta_out = softmax(logits);
    delta_out[item.label] -= 1.0;

    std::fill(delta_hidden.begin(), delta_hidden.end(), 0.0);
    for (std::size_t k = 0; k < c.num_classes; ++k) {
      grad.b2(k) += delta_out[k];
      for (std::size_t i = 0; i < c.hidden_dim; ++i) {
        grad.w2(k, i) += delta_out[k] * hidden[i];
        delta_hidden[i] += weights.w2(k, i) * delta_out[k];
      }
    }
    for (std::size_t i = 0; i < c.hidden_dim; ++i) {
      const double dz = delta_hidden[i] * (1.0 - hidden[i] * hidden[i]);
      grad.b1(i) += dz;
      for (std::size_t j = 0; j < c.input_dim; ++j) grad.w1(i, j) += dz * item.features[j];
    }
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (auto& g : grad.flat()) g *= scale;
  return grad;
}

std::optional<double> accuracy(const ModelWeights& weights, std::span<const DataItem> items) {
  if (items.empty()) return std::nullopt;
  std::size_t correct = 0;
  for (const auto& item : items) {
    if (forward(weights, item.features).prediction.predicted_class == item.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(items.size());
}

EpochResult sgd_epoch(const ModelWeights& weights, std::span<const DataItem> batch,
                      const SgdOptions& options, std::span<const DataItem> holdout, Rng& rng) {
  if (!(options.learning_rate >= 0.0)) {
    throw std::invalid_argument("sgd_epoch: learning_rate must be non-negative");
  }
  if (options.minibatch_size == 0) throw std::invalid_argument("sgd_epoch: minibatch_size must be >= 1");

  ModelWeights current = weights;
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<DataItem> minibatch;
  for (std::size_t start = 0; start < order.size(); start += options.minibatch_size) {
    const std::size_t stop = std::min(order.size(), start + options.minibatch_size);
    minibatch.clear();
    for (std::size_t i = start; i < stop; ++i) minibatch.push_back(batch[order[i]]);
    if (options.learning_rate == 0.0) continue;
    const ModelWeights grad = gradient(current, minibatch);
    auto params = current.flat();
    auto g = grad.flat();
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= options.learning_rate * g[i];
  }
  auto holdout_accuracy = accuracy(current, holdout);
  return {std::move(current), holdout_accuracy};
}

double entropy(std::span<const double> probabilities) {
  if (probabilities.empty()) throw std::invalid_argument("entropy: empty probability vector");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("entropy: negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-8) throw std::invalid_argument("entropy: probabilities do not sum to 1");
  return raw_entropy(probabilities);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine_similarity: zero-norm vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

Embedding centroid(std::span<const Embedding> embeddings) {
  if (embeddings.empty()) throw std::invalid_argument("centroid: empty input");
  Embedding mean(embeddings.front().size(), 0.0);
  for (const auto& e : embeddings) {
    if (e.size() != mean.size()) throw std::invalid_argument("centroid: dimension mismatch");
    for (std::size_t i = 0; i < e.size(); ++i) mean[i] += e[i];
  }
  for (auto& v : mean) v /= static_cast<double>(embeddings.size());
  return mean;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("euclidean_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

ModelWeights interpolate(const ModelWeights& phi, const ModelWeights& zeta, double eps) {
  if (!(phi.config() == zeta.config()) || phi.size() != zeta.size()) {
    throw std::invalid_argument("interpolate: shape mismatch");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("interpolate: eps must be in [0, 1]");
  if (eps == 0.0) return phi;
  if (eps == 1.0) return zeta;
  ModelWeights out = phi;
  auto o = out.flat();
  auto z = zeta.flat();
  for (std::size_t i = 0; i < o.size(); ++i) {
    const double lo = std::min(o[i], z[i]);
    const double hi = std::max(o[i], z[i]);
    // rounding can step one ulp outside the segment; keep the hull property exact
    o[i] = std::clamp((1.0 - eps) * o[i] + eps * z[i], lo, hi);
  }
  return out;
}

Embedding probe_centroid(const ModelWeights& weights, std::span<const DataItem> probe) {
  if (probe.empty()) throw std::invalid_argument("probe_centroid: empty probe set");
  std::vector<Embedding> embeddings;
  embeddings.reserve(probe.size());
  for (const auto& item : probe) embeddings.push_back(forward(weights, item.features).embedding);
  return centroid(embeddings);
}

double embedding_distance(const ModelWeights& a, const ModelWeights& b, std::span<const DataItem> probe) {
  return euclidean_distance(probe_centroid(a, probe), probe_centroid(b, probe));
}

}  // namespace edgecl
