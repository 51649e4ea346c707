#include "hhp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "hhp/sketch_boyermoore.hpp"
#include "hhp/sketch_maxcount.hpp"
#include "hhp/sketch_maxstable.hpp"
#include "hhp/sketch_shp.hpp"

namespace hhp {

void GroundTruth::update(Key key, std::uint64_t v) {
  if (mode_ != Mode::kScalar)
    throw std::logic_error("scalar update on a distinct-count oracle");
  scalar_[key] += v;
  total_ += v;
}

void GroundTruth::update_element(Key key, std::uint32_t el) {
  if (mode_ != Mode::kDistinct)
    throw std::logic_error("element update on a scalar oracle");
  auto& set = sets_[key];
  if (set.insert(el).second) ++total_;
}

std::uint64_t GroundTruth::value_of(Key key) const {
  if (mode_ == Mode::kScalar) {
    auto it = scalar_.find(key);
    return it == scalar_.end() ? 0 : it->second;
  }
  auto it = sets_.find(key);
  return it == sets_.end() ? 0 : it->second.size();
}

std::vector<ReportEntry> GroundTruth::topk(unsigned k) const {
  std::vector<std::pair<Key, std::uint64_t>> all;
  if (mode_ == Mode::kScalar) {
    all.reserve(scalar_.size());
    for (const auto& [key, v] : scalar_) all.emplace_back(key, v);
  } else {
    all.reserve(sets_.size());
    for (const auto& [key, set] : sets_) all.emplace_back(key, set.size());
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;  // ties by ascending key
  });
  if (all.size() > k) all.resize(k);
  std::vector<ReportEntry> out;
  out.reserve(all.size());
  for (const auto& [key, v] : all) out.push_back({key, double(v)});
  return out;
}

std::size_t GroundTruth::entry_count() const {
  return mode_ == Mode::kScalar ? scalar_.size() : sets_.size();
}

std::size_t GroundTruth::byte_footprint() const {
  if (mode_ == Mode::kScalar) {
    // key + counter + bucket overhead estimate per live entry
    return scalar_.size() * (sizeof(Key) + 8 + 16);
  }
  std::size_t bytes = 0;
  for (const auto& [key, set] : sets_)
    bytes += sizeof(Key) + 16 + set.size() * (4 + 16);
  return bytes;
}

MetricResult score(const HeavyHitterReport& report, const GroundTruth& truth,
                   unsigned k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  MetricResult res;
  std::vector<ReportEntry> top = truth.topk(k);
  std::unordered_set<Key> true_set;
  for (const auto& e : top) true_set.insert(e.key);

  // First estimate per distinct reported key, at most k report rows.
  std::unordered_map<Key, double> reported;
  for (std::size_t i = 0; i < report.entries.size() && i < k; ++i)
    reported.emplace(report.entries[i].key, report.entries[i].estimate);

  unsigned hits = 0;
  double acc_sum = 0.0;
  for (const auto& [key, est] : reported) {
    if (!true_set.count(key)) continue;
    ++hits;
    double tv = double(truth.value_of(key));
    res.ratios.push_back(tv > 0 ? est / tv : 0.0);
    if (tv > 0) {
      double acc = 100.0 * (1.0 - std::abs(est - tv) / tv);
      acc_sum += std::clamp(acc, 0.0, 100.0);
    }
  }
  res.identification_rate = double(hits) / double(k);
  // Exactness judges the report as delivered: every distinct reported key,
  // including rows past k, must sit in the true top-k and cover it.
  std::unordered_set<Key> all_reported;
  for (const auto& e : report.entries) all_reported.insert(e.key);
  res.exact_recovery =
      !all_reported.empty() && all_reported == true_set;
  res.mean_accuracy_pct = hits > 0 ? acc_sum / double(hits) : 0.0;
  return res;
}

Footprint memory_footprint(const ShpSketch& s) {
  return {s.cell_count(), s.byte_footprint()};
}
Footprint memory_footprint(const MaxCountSketch& s) {
  return {s.cell_count(), s.byte_footprint()};
}
Footprint memory_footprint(const BoyerMooreSketch& s) {
  return {s.cell_count() + s.slot_count(), s.byte_footprint()};
}
Footprint memory_footprint(const MaxStableSketch& s) {
  return {s.cell_count(), s.byte_footprint()};
}
Footprint memory_footprint(const GroundTruth& g) {
  return {g.entry_count(), g.byte_footprint()};
}

}  // namespace hhp
