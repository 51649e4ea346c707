#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hhp/keyspace.hpp"
#include "hhp/report.hpp"
#include "hhp/rng.hpp"

namespace hhp {

// Max-stable sketch for set-valued signals (distinct-element heavy hitter).
//
// Each set element deterministically seeds L standard 1-Frechet draws
// (P{Z <= x} = exp(-1/x)). A cell keeps the running max of the draws of all
// elements routed to it; by max-stability the max over n distinct elements
// is 1-Frechet with scale n, whose median is n / ln 2. The estimator reads
// the median over the L lanes and rescales by ln 2. Duplicates change
// nothing (max of equal values), and sketches built with the same salt merge
// by elementwise max into exactly the union-stream sketch.

// Inverse CDF of the standard 1-Frechet law at u in (0,1).
inline double frechet_from_uniform(double u) { return -1.0 / std::log(u); }

// Deterministic draw for (element, lane) under a sketch-wide salt. The
// 64-bit hash is mapped into (0,1) as (h + 0.5) / 2^64, so the log never
// sees 0 or 1.
inline double frechet_draw(std::uint32_t element, std::uint32_t ell,
                           std::uint64_t salt) {
  std::uint64_t h = mix64(mix64(salt ^ element) + ell);
  return frechet_from_uniform((double(h) + 0.5) * 0x1.0p-64);
}

struct Top1Result {
  Key key = 0;
  double estimate = 0.0;
  bool zero_signal = false;
};

class MaxStableSketch {
 public:
  MaxStableSketch(const HashConfig& cfg, const PermutationParams& params,
                  std::uint32_t L, std::uint64_t salt);

  void update(Key key, std::uint32_t element);

  // Per (row, bin): median over lanes; per row: argmax bin (ties lowest);
  // decode the bins; estimate = ln 2 * mean of the q selected medians.
  Top1Result top1() const;

  HeavyHitterReport report() const;

  // Elementwise max. Requires the same salt: draws from different salts are
  // incomparable realizations.
  void merge(const MaxStableSketch& other);
  void reset();

  std::uint64_t salt() const { return salt_; }
  std::uint32_t depth() const { return L_; }
  std::uint64_t update_count() const { return updates_; }
  const HashConfig& config() const { return cfg_; }
  const PermutationParams& params() const { return params_; }
  const std::vector<double>& cells() const { return cells_; }

  std::size_t cell_count() const { return cells_.size(); }
  std::size_t byte_footprint() const { return cells_.size() * 8; }

 private:
  HashConfig cfg_;
  PermutationParams params_;
  std::uint32_t L_;
  std::uint64_t salt_;
  std::vector<double> cells_;  // [(i * m + j) * L + ell], 0 = empty
  std::vector<double> scratch_;  // per-update draw buffer
  std::uint64_t updates_ = 0;
};

}  // namespace hhp
