#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hhp/keyspace.hpp"
#include "hhp/report.hpp"

namespace hhp {

// Exact per-key accumulation: a hash map of totals for scalar signals, or of
// element sets for distinct-count signals. Memory grows with the number of
// live keys; that growth is the point of comparison against the
// constant-size sketches.
class GroundTruth {
 public:
  enum class Mode { kScalar, kDistinct };

  explicit GroundTruth(Mode mode = Mode::kScalar) : mode_(mode) {}

  void update(Key key, std::uint64_t v);            // scalar mode
  void update_element(Key key, std::uint32_t el);   // distinct mode

  // Exact top-k by magnitude, ties broken by ascending key. k beyond the
  // population returns everything.
  std::vector<ReportEntry> topk(unsigned k) const;

  std::uint64_t value_of(Key key) const;  // 0 for unseen keys
  std::uint64_t total() const { return total_; }
  Mode mode() const { return mode_; }

  std::size_t entry_count() const;
  std::size_t byte_footprint() const;

 private:
  Mode mode_;
  std::unordered_map<Key, std::uint64_t> scalar_;
  std::unordered_map<Key, std::unordered_set<std::uint32_t>> sets_;
  std::uint64_t total_ = 0;
};

struct MetricResult {
  double identification_rate = 0.0;  // |reported set ∩ true top-k| / k
  bool exact_recovery = false;       // reported set equals the true top-k set
  // Per matched key, estimate / truth (raw ratio; > 1 under collision
  // inflation) and the Table-style accuracy percent
  // 100 * (1 - |est - truth| / truth), clamped to [0, 100].
  std::vector<double> ratios;
  double mean_accuracy_pct = 0.0;  // 0 when nothing matched
};

MetricResult score(const HeavyHitterReport& report, const GroundTruth& truth,
                   unsigned k);

struct Footprint {
  std::size_t cells = 0;  // counters / cells / map entries
  std::size_t bytes = 0;
};

class ShpSketch;
class MaxCountSketch;
class BoyerMooreSketch;
class MaxStableSketch;

Footprint memory_footprint(const ShpSketch& s);
Footprint memory_footprint(const MaxCountSketch& s);
Footprint memory_footprint(const BoyerMooreSketch& s);
Footprint memory_footprint(const MaxStableSketch& s);
Footprint memory_footprint(const GroundTruth& g);

}  // namespace hhp
