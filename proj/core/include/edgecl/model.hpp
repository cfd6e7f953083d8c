#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "edgecl/data_item.hpp"
#include "edgecl/rng.hpp"

namespace edgecl {

using Vector = std::vector<double>;
using Embedding = std::vector<double>;

// Shape of the two-layer classifier: input -> tanh hidden -> softmax.
struct ModelConfig {
  std::size_t input_dim = 16;
  std::size_t hidden_dim = 12;
  std::size_t num_classes = 4;

  void validate() const;
  std::size_t parameter_count() const {
    return hidden_dim * input_dim + hidden_dim + num_classes * hidden_dim + num_classes;
  }
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// All trainable parameters, stored flat as [W1 (h x d) | b1 (h) | W2 (K x h) | b2 (K)],
// row-major. Gradients use the same type.
class ModelWeights {
 public:
  ModelWeights() = default;
  explicit ModelWeights(const ModelConfig& config);  // all zeros

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer.
  static ModelWeights random(const ModelConfig& config, Rng& rng);
  static ModelWeights from_flat(const ModelConfig& config, std::vector<double> flat);

  const ModelConfig& config() const { return config_; }
  std::span<const double> flat() const { return params_; }
  std::span<double> flat() { return params_; }
  std::size_t size() const { return params_.size(); }

  double& w1(std::size_t row, std::size_t col) { return params_[row * config_.input_dim + col]; }
  double w1(std::size_t row, std::size_t col) const { return params_[row * config_.input_dim + col]; }
  double& b1(std::size_t i) { return params_[b1_offset() + i]; }
  double b1(std::size_t i) const { return params_[b1_offset() + i]; }
  double& w2(std::size_t row, std::size_t col) { return params_[w2_offset() + row * config_.hidden_dim + col]; }
  double w2(std::size_t row, std::size_t col) const {
    return params_[w2_offset() + row * config_.hidden_dim + col];
  }
  double& b2(std::size_t k) { return params_[b2_offset() + k]; }
  double b2(std::size_t k) const { return params_[b2_offset() + k]; }

  bool all_finite() const;
  double norm() const;

  friend bool operator==(const ModelWeights&, const ModelWeights&) = default;

 private:
  std::size_t b1_offset() const { return config_.hidden_dim * config_.input_dim; }
  std::size_t w2_offset() const { return b1_offset() + config_.hidden_dim; }
  std::size_t b2_offset() const { return w2_offset() + config_.num_classes * config_.hidden_dim; }

  ModelConfig config_{};
  std::vector<double> params_;
};

struct Prediction {
  Vector probabilities;
  std::size_t predicted_class = 0;
  double entropy = 0.0;  // nats
};

struct ForwardResult {
  Embedding embedding;
  Prediction prediction;
};

ForwardResult forward(const ModelWeights& weights, std::span<const double> features);

double cross_entropy_loss(const Prediction& prediction, std::size_t label);

// Mean cross-entropy over the batch. Used by finite-difference checks.
double mean_loss(const ModelWeights& weights, std::span<const DataItem> batch);

// Exact gradient of the mean cross-entropy over `batch`.
ModelWeights gradient(const ModelWeights& weights, std::span<const DataItem> batch);

struct SgdOptions {
  double learning_rate = 0.1;
  std::size_t minibatch_size = 8;
};

struct EpochResult {
  ModelWeights weights;
  std::optional<double> holdout_accuracy;  // nullopt when the holdout set is empty
};

// One pass of minibatch SGD over `batch` in an order shuffled by `rng`,
// followed by evaluation on `holdout`.
EpochResult sgd_epoch(const ModelWeights& weights, std::span<const DataItem> batch,
                      const SgdOptions& options, std::span<const DataItem> holdout, Rng& rng);

// Fraction of `items` classified correctly; nullopt for an empty set.
std::optional<double> accuracy(const ModelWeights& weights, std::span<const DataItem> items);

double entropy(std::span<const double> probabilities);
double cosine_similarity(std::span<const double> a, std::span<const double> b);
Embedding centroid(std::span<const Embedding> embeddings);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

ModelWeights interpolate(const ModelWeights& phi, const ModelWeights& zeta, double eps);

// Centroid of the model's embeddings over a probe set of items.
Embedding probe_centroid(const ModelWeights& weights, std::span<const DataItem> probe);

// Euclidean distance between two models' probe-set centroids.
double embedding_distance(const ModelWeights& a, const ModelWeights& b, std::span<const DataItem> probe);

}  // namespace edgecl
