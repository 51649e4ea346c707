#include "hhp/sketch_shp.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace hhp {

namespace {

bool same_shape(const HashConfig& a, const HashConfig& b) {
  return a.q == b.q && a.m == b.m && a.m_prime == b.m_prime &&
         a.thinning_gamma == b.thinning_gamma &&
         a.estimator_gamma == b.estimator_gamma;
}

}  // namespace

ShpSketch::ShpSketch(const HashConfig& cfg, const PermutationParams& params)
    : cfg_(cfg), params_(params) {
  if (cfg_.q < 1 || cfg_.q > 4) throw std::invalid_argument("q must be 1..4");
  if (cfg_.m != 256) throw std::invalid_argument("octet hashing needs m=256");
  counts_.assign(std::size_t(cfg_.q) * cfg_.m, 0);
}

void ShpSketch::update(Key key, std::uint64_t v) {
  Key p = permute(key, params_);
  for (unsigned i = 1; i <= cfg_.q; ++i) {
    std::uint64_t& cell = counts_[(i - 1) * cfg_.m + octet(p, i)];
    if (__builtin_add_overflow(cell, v, &cell)) overflow_ = true;
  }
  if (__builtin_add_overflow(total_, v, &total_)) overflow_ = true;
}

HeavyHitterReport ShpSketch::topk(unsigned k, ShpEstimate estimate) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > cfg_.m) throw std::invalid_argument("k must be <= m");
  HeavyHitterReport rep;
  rep.algo = "shp";
  rep.unit = "bytes";
  rep.overflow_fault = overflow_;
  rep.zero_signal = (total_ == 0);
  std::vector<char> used(counts_.size(), 0);
  for (unsigned r = 0; r < k; ++r) {
    std::array<std::uint32_t, 4> sel = {0, 0, 0, 0};
    std::array<std::uint64_t, 4> vals = {0, 0, 0, 0};
    for (unsigned i = 0; i < cfg_.q; ++i) {
      const std::uint64_t* row = &counts_[i * cfg_.m];
      std::uint32_t best = cfg_.m;  // sentinel: nothing picked yet
      for (std::uint32_t j = 0; j < cfg_.m; ++j) {
        if (used[i * cfg_.m + j]) continue;
        if (best == cfg_.m || row[j] > row[best]) best = j;  // tie: lowest j
      }
      used[i * cfg_.m + best] = 1;
      sel[i] = best;
      vals[i] = row[best];
    }
    double est;
    if (estimate == ShpEstimate::kMean) {
      std::uint64_t sum = 0;
      for (unsigned i = 0; i < cfg_.q; ++i) sum += vals[i];
      est = double(sum) / double(cfg_.q);
    } else {
      std::sort(vals.begin(), vals.begin() + cfg_.q);
      est = cfg_.q % 2 ? double(vals[cfg_.q / 2])
                       : (double(vals[cfg_.q / 2 - 1]) +
                          double(vals[cfg_.q / 2])) /
                             2.0;
    }
    rep.entries.push_back({decode(sel, params_), est});
  }
  return rep;
}

void ShpSketch::merge(const ShpSketch& other) {
  if (!same_shape(cfg_, other.cfg_) || params_.forward != other.params_.forward)
    throw std::invalid_argument("merge requires identical config and params");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (__builtin_add_overflow(counts_[i], other.counts_[i], &counts_[i]))
      overflow_ = true;
  }
  if (__builtin_add_overflow(total_, other.total_, &total_)) overflow_ = true;
  overflow_ = overflow_ || other.overflow_;
}

void ShpSketch::reset() {
  counts_.assign(counts_.size(), 0);
  total_ = 0;
  overflow_ = false;
}

}  // namespace hhp
