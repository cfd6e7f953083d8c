#include "edgecl/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace edgecl {

void SamplerConfig::validate() const {
  if (capacity < 1) throw std::invalid_argument("SamplerConfig: capacity must be >= 1");
  if (!(percentile > 0.0 && percentile < 1.0)) throw std::invalid_argument("SamplerConfig: percentile must be in (0, 1)");
  if (window_size < 1) throw std::invalid_argument("SamplerConfig: window_size must be >= 1");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw std::invalid_argument("SamplerConfig: top_fraction must be in (0, 1]");
  }
  if (!(bootstrap_threshold >= 0.0)) throw std::invalid_argument("SamplerConfig: bootstrap_threshold must be >= 0");
}

double adaptive_threshold(std::span<const double> distances, double percentile) {
  if (distances.empty()) throw std::invalid_argument("adaptive_threshold: empty distance window");
  if (!(percentile >= 0.0 && percentile <= 1.0)) throw std::invalid_argument("adaptive_threshold: percentile out of range");
  std::vector<double> sorted(distances.begin(), distances.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = percentile * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  return 1.0 - cosine_similarity(a, b);
}

CandidateBuffer::CandidateBuffer(SamplerConfig config) : config_(config), threshold_(config.bootstrap_threshold) {
  config_.validate();
}

bool CandidateBuffer::offer(const DataItem& item, const Embedding& embedding) {
  if (embedding_dim_ && embedding.size() != *embedding_dim_) {
    throw std::invalid_argument("CandidateBuffer::offer: embedding dimension mismatch");
  }
  embedding_dim_ = embedding.size();

  OfferRecord record{item.index, false, std::nullopt, threshold_};
  if (entries_.empty()) {
    record.accepted = true;
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : entries_) best = std::min(best, cosine_distance(embedding, e.embedding));
    record.min_distance = best;
    record.accepted = best >= threshold_;
  }

  if (record.accepted) {
    if (entries_.size() == config_.capacity) entries_.pop_front();
    entries_.push_back({item, embedding, threshold_, offer_count_});
  }
  if (record.min_distance) {
    window_.push_back(*record.min_distance);
    if (window_.size() > config_.window_size) window_.pop_front();
    refresh_threshold();
  }
  ++offer_count_;
  offers_.push_back(record);
  return record.accepted;
}

void CandidateBuffer::refresh_threshold() {
  if (window_.size() < config_.bootstrap_min) {
    threshold_ = config_.bootstrap_threshold;
    return;
  }
  std::vector<double> w(window_.begin(), window_.end());
  threshold_ = adaptive_threshold(w, config_.percentile);
}

void CandidateBuffer::clear() {
  entries_.clear();
  offers_.clear();
}

std::vector<DataItem> prioritize(std::span<const BufferEntry> buffer, const ModelWeights& base,
                                 double top_fraction) {
  if (buffer.empty()) throw std::invalid_argument("prioritize: empty buffer");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw std::invalid_argument("prioritize: top_fraction must be in (0, 1]");

  std::vector<double> entropies(buffer.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    entropies[i] = forward(base, buffer[i].item.features).prediction.entropy;
  }
  std::vector<std::size_t> order(buffer.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (entropies[a] != entropies[b]) return entropies[a] > entropies[b];
    if (buffer[a].item.arrival_time != buffer[b].item.arrival_time) {
      return buffer[a].item.arrival_time < buffer[b].item.arrival_time;
    }
    if (buffer[a].item.index != buffer[b].item.index) return buffer[a].item.index < buffer[b].item.index;
    return a < b;
  });
  const auto keep = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(buffer.size())));
  std::vector<DataItem> selected;
  selected.reserve(keep);
  for (std::size_t i = 0; i < keep && i < order.size(); ++i) selected.push_back(buffer[order[i]].item);
  return selected;
}

std::vector<DataItem> prioritize(const CandidateBuffer& buffer, const ModelWeights& base, double top_fraction) {
  std::vector<BufferEntry> entries(buffer.entries().begin(), buffer.entries().end());
  return prioritize(entries, base, top_fraction);
}

std::vector<DataItem> label(std::span<const DataItem> items, LabelLedger& ledger) {
  std::vector<DataItem> labeled(items.begin(), items.end());
  if (!labeled.empty()) {
    ledger.total += labeled.size();
    ledger.per_round.push_back(labeled.size());
  }
  return labeled;
}

std::vector<DataItem> uniform_sample(std::span<const DataItem> pool, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  count = std::min(count, pool.size());
  // partial Fisher-Yates
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<DataItem> out;
  out.reserve(count);
  for (auto i : idx) out.push_back(pool[i]);
  return out;
}

}  // namespace edgecl
