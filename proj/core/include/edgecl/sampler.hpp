#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "edgecl/data_item.hpp"
#include "edgecl/model.hpp"

namespace edgecl {

struct SamplerConfig {
  std::size_t capacity = 1024;
  double percentile = 0.3;
  std::size_t window_size = 512;
  double top_fraction = 0.05;
  double bootstrap_threshold = 0.05;
  std::size_t bootstrap_min = 8;  // window entries needed before the percentile rule applies

  void validate() const;
};

// p-th percentile of `distances`, linearly interpolated between order statistics.
double adaptive_threshold(std::span<const double> distances, double percentile);

double cosine_distance(std::span<const double> a, std::span<const double> b);

struct BufferEntry {
  DataItem item;
  Embedding embedding;
  double threshold_at_accept = 0.0;
  std::size_t offer_index = 0;
};

struct OfferRecord {
  std::size_t item_index = 0;
  bool accepted = false;
  std::optional<double> min_distance;  // nullopt when the buffer was empty
  double threshold = 0.0;              // threshold the decision was made against
};

// Online thresholded diversity sampler. Single writer; the scheduler takes a
// snapshot and clears it at each retrain boundary.
class CandidateBuffer {
 public:
  explicit CandidateBuffer(SamplerConfig config = {});

  // Accept iff the minimum cosine distance to every buffered embedding is at
  // least the current threshold; the first offer to an empty buffer is accepted.
  bool offer(const DataItem& item, const Embedding& embedding);

  const std::deque<BufferEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double threshold() const { return threshold_; }
  const std::deque<double>& distance_window() const { return window_; }
  const SamplerConfig& config() const { return config_; }
  const std::vector<OfferRecord>& offers() const { return offers_; }

  // Drops the buffered entries and the offer log. The distance window and
  // threshold carry over so the acceptance rate stays calibrated.
  void clear();

 private:
  void refresh_threshold();

  SamplerConfig config_;
  std::deque<BufferEntry> entries_;
  std::deque<double> window_;
  double threshold_;
  std::size_t offer_count_ = 0;
  std::vector<OfferRecord> offers_;
  std::optional<std::size_t> embedding_dim_;
};

// Rank buffered items by the base model's predictive entropy (descending) and
// keep the top ceil(top_fraction * size). Ties: earlier arrival, then lower item index.
std::vector<DataItem> prioritize(std::span<const BufferEntry> buffer, const ModelWeights& base,
                                 double top_fraction);
std::vector<DataItem> prioritize(const CandidateBuffer& buffer, const ModelWeights& base, double top_fraction);

struct LabelLedger {
  std::size_t total = 0;
  std::vector<std::size_t> per_round;
};

// Simulated golden teacher: ground truth is the label, every item is billed.
std::vector<DataItem> label(std::span<const DataItem> items, LabelLedger& ledger);

// Ablation baseline: `count` items uniformly without replacement, in stream order.
std::vector<DataItem> uniform_sample(std::span<const DataItem> pool, std::size_t count, Rng& rng);

}  // namespace edgecl
