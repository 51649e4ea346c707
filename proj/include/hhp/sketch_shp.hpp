#pragma once

#include <cstdint>
#include <vector>

#include "hhp/keyspace.hpp"
#include "hhp/report.hpp"

namespace hhp {

// Volume estimate from the q selected bins: mean is the default, median is
// exposed for confidence boosting on noisy rows.
enum class ShpEstimate { kMean, kMedian };

// Simple hashing pursuit: q octet-indexed counter rows. Each update adds its
// magnitude to one bin per row (the octets of the permuted key), so every
// row sums to the stream total. Top-k extraction repeatedly takes the
// per-row argmax over bins not yet selected in that row, decodes the q bin
// indices back to a key, and estimates its magnitude from the selected bins.
class ShpSketch {
 public:
  ShpSketch(const HashConfig& cfg, const PermutationParams& params);

  void update(Key key, std::uint64_t v);

  // k in 1..m (per-row exclusion cannot skip more than m bins). Pure:
  // repeated queries return identical reports.
  HeavyHitterReport topk(unsigned k,
                         ShpEstimate estimate = ShpEstimate::kMean) const;

  // Elementwise sum; requires identical config and params.
  void merge(const ShpSketch& other);
  void reset();

  std::uint64_t total() const { return total_; }
  bool overflow_fault() const { return overflow_; }
  const HashConfig& config() const { return cfg_; }
  const PermutationParams& params() const { return params_; }

  // Row-major q x m counters, for tests and the max-count marginalization
  // cross-check.
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  std::size_t cell_count() const { return counts_.size(); }
  std::size_t byte_footprint() const { return counts_.size() * 8; }

 private:
  HashConfig cfg_;
  PermutationParams params_;
  std::vector<std::uint64_t> counts_;  // [i * m + j]
  std::uint64_t total_ = 0;
  bool overflow_ = false;
};

}  // namespace hhp
