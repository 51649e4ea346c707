#include "hhp/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "hhp/oracle.hpp"
#include "hhp/rng.hpp"
#include "hhp/sketch_boyermoore.hpp"
#include "hhp/sketch_maxcount.hpp"
#include "hhp/sketch_shp.hpp"

namespace hhp {

double shp_recovery_bound(unsigned k, unsigned r, unsigned q, unsigned m) {
  if (r < 1 || r > k) throw std::invalid_argument("need 1 <= r <= k");
  if (r > m) throw std::invalid_argument("bound degenerates for r > m");
  if (q < 1 || m < 1) throw std::invalid_argument("need q, m >= 1");
  // Accumulate the pairwise factors first and the residual-mass factor
  // last: r = k and r = k - 1 are then equal bit for bit, as they are
  // mathematically.
  double b = 1.0;
  for (unsigned i = 1; i < r; ++i) b *= std::pow(1.0 - double(i) / m, q);
  b *= std::pow(1.0 - double(r) / m, double(k - r) * q);
  return b;
}

double shp_linearized_bound(unsigned k, unsigned r, unsigned q, unsigned m) {
  if (r < 1 || r > k) throw std::invalid_argument("need 1 <= r <= k");
  return 1.0 - double(q) * r * (2.0 * k - r - 1.0) / (2.0 * m);
}

double shp_linearized_bound_uncertified(unsigned k, unsigned r, unsigned q,
                                        unsigned m) {
  if (r < 1 || r > k) throw std::invalid_argument("need 1 <= r <= k");
  return 1.0 - double(q) * r * (k - 1.0) / (2.0 * m);
}

double maxcount_recovery_bound(unsigned k, unsigned r, unsigned q, unsigned m,
                               unsigned m_prime) {
  if (m_prime < 1) throw std::invalid_argument("need m_prime >= 1");
  return shp_recovery_bound(k, r, q, m * m_prime);
}

double bm_recovery_bound(unsigned k, unsigned r, unsigned m) {
  return shp_recovery_bound(k, r, 1, m);
}

double bm_identification_rate(unsigned k, unsigned m) {
  if (k < 1 || m < 1) throw std::invalid_argument("need k, m >= 1");
  return (double(m) / k) * (1.0 - std::pow(1.0 - 1.0 / m, double(k)));
}

std::vector<std::uint64_t> make_profile(McProfile profile, unsigned k,
                                        McMetric metric) {
  std::vector<std::uint64_t> mags(k);
  switch (profile) {
    case McProfile::kPowersOfTwo:
      if (k > 62)
        throw std::invalid_argument(
            "powers-of-two profile overflows 64-bit counters beyond k=62");
      for (unsigned i = 0; i < k; ++i) mags[i] = 1ULL << (k - i);
      break;
    case McProfile::kLinear:
      if (metric == McMetric::kExactRecovery)
        throw std::invalid_argument(
            "linear profile violates the separation premise "
            "L(r) > L(r+1)+...+L(k) required for recovery validation");
      for (unsigned i = 0; i < k; ++i) mags[i] = 2ULL * (k - i) - 1;
      break;
  }
  return mags;
}

namespace {

// k distinct uniform keys.
std::vector<Key> draw_keys(SplitMix64& rng, unsigned k) {
  std::unordered_set<Key> seen;
  std::vector<Key> keys;
  keys.reserve(k);
  while (keys.size() < k) {
    Key key = rng.next_u32();
    if (seen.insert(key).second) keys.push_back(key);
  }
  return keys;
}

}  // namespace

McValidation monte_carlo_validate(McAlgo algo, unsigned k, unsigned r,
                                  McProfile profile, McMetric metric,
                                  unsigned trials, std::uint64_t seed,
                                  const HashConfig& cfg) {
  if (trials < 1000) throw std::invalid_argument("need >= 1000 trials");
  if (metric == McMetric::kIdentificationRate && algo != McAlgo::kBoyerMoore)
    throw std::invalid_argument(
        "identification-rate validation applies to boyer-moore only");
  std::vector<std::uint64_t> mags = make_profile(profile, k, metric);
  PermutationParams params = make_params(cfg.gamma);

  double sum = 0.0;
  double sumsq = 0.0;
  for (unsigned t = 0; t < trials; ++t) {
    SplitMix64 rng(mix64(seed ^ (0x5eedULL + t)));
    std::vector<Key> keys = draw_keys(rng, k);

    if (metric == McMetric::kIdentificationRate) {
      BoyerMooreSketch bm(cfg, params);
      for (unsigned i = 0; i < k; ++i) bm.update(keys[i], mags[i]);
      HeavyHitterReport rep = bm.topk(k);
      std::unordered_set<Key> truth(keys.begin(), keys.end());
      std::unordered_set<Key> seen;
      unsigned hits = 0;
      for (const auto& e : rep.entries)
        if (truth.count(e.key) && seen.insert(e.key).second) ++hits;
      double frac = double(hits) / k;
      sum += frac;
      sumsq += frac * frac;
      continue;
    }

    // Exact recovery of the top r.
    std::unordered_set<Key> want(keys.begin(), keys.begin() + r);
    HeavyHitterReport rep;
    switch (algo) {
      case McAlgo::kShp: {
        ShpSketch s(cfg, params);
        for (unsigned i = 0; i < k; ++i) s.update(keys[i], mags[i]);
        rep = s.topk(r);
        break;
      }
      case McAlgo::kMaxCount: {
        MaxCountSketch s(cfg, params);
        for (unsigned i = 0; i < k; ++i) s.update(keys[i], mags[i]);
        rep = s.topk(r);
        break;
      }
      case McAlgo::kBoyerMoore: {
        BoyerMooreSketch s(cfg, params);
        for (unsigned i = 0; i < k; ++i) s.update(keys[i], mags[i]);
        rep = s.topk(r);
        break;
      }
    }
    std::unordered_set<Key> got;
    for (const auto& e : rep.entries) got.insert(e.key);
    bool exact = got.size() == want.size();
    if (exact)
      for (Key w : got)
        if (!want.count(w)) { exact = false; break; }
    sum += exact ? 1.0 : 0.0;
  }

  McValidation v;
  v.trials = trials;
  v.empirical = sum / trials;
  if (metric == McMetric::kIdentificationRate) {
    // Per-trial values are fractions, so use the sample SD of the mean.
    double var = std::max(sumsq / trials - v.empirical * v.empirical, 1e-12);
    v.se = std::sqrt(var / trials);
  } else {
    v.se = std::sqrt(std::max(v.empirical * (1.0 - v.empirical), 1e-12) /
                     trials);
  }
  constexpr double z99 = 2.5758293035489004;
  v.ci_low = v.empirical - z99 * v.se;
  v.ci_high = v.empirical + z99 * v.se;
  switch (metric) {
    case McMetric::kExactRecovery:
      switch (algo) {
        case McAlgo::kShp:
          v.bound = shp_recovery_bound(k, r, cfg.q, cfg.m);
          break;
        case McAlgo::kMaxCount:
          v.bound = maxcount_recovery_bound(k, r, cfg.q, cfg.m, cfg.m_prime);
          break;
        case McAlgo::kBoyerMoore:
          v.bound = bm_recovery_bound(k, r, cfg.m);
          break;
      }
      v.pass = v.bound <= v.ci_high;  // lower bound must not exceed CI top
      break;
    case McMetric::kIdentificationRate:
      v.bound = bm_identification_rate(k, cfg.m);
      v.pass = v.bound >= v.ci_low && v.bound <= v.ci_high;
      break;
  }
  return v;
}

}  // namespace hhp
