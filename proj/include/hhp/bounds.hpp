#pragma once

#include <cstdint>
#include <vector>

#include "hhp/keyspace.hpp"

namespace hhp {

// Analytic accuracy guarantees for exactly k-sparse signals with strictly
// ordered magnitudes L(1) > ... > L(k) > 0, plus a Monte-Carlo validator
// that runs the real sketches against them.

struct SparseSignal {
  std::vector<Key> keys;                 // k distinct keys
  std::vector<std::uint64_t> magnitudes;  // strictly decreasing, positive
};

// Probability lower bound that simple hashing pursuit exactly recovers the
// top r of a k-sparse signal with q rows of m bins, valid when
// L(r) > L(r+1) + ... + L(k):
//   (1 - r/m)^((k-r)q) * prod_{i=1..r-1} (1 - i/m)^q
double shp_recovery_bound(unsigned k, unsigned r, unsigned q, unsigned m);

// First-order relaxation of the product bound, from summing the pairwise
// collision terms: 1 - q*r*(2k - r - 1) / (2m). Always <= the product bound
// on [0,1]; may go negative (vacuous but valid).
double shp_linearized_bound(unsigned k, unsigned r, unsigned q, unsigned m);

// A commonly quoted simplification, 1 - q*r*(k-1) / (2m). NOT certified: it
// exceeds the product bound already at (k=2, r=1, q=4, m=256), losing a
// factor of 2 on the cross term. Exposed for comparison tables only.
double shp_linearized_bound_uncertified(unsigned k, unsigned r, unsigned q,
                                        unsigned m);

// Thinning into m' substreams multiplies the effective bin count: the SHP
// bound with m -> m * m'.
double maxcount_recovery_bound(unsigned k, unsigned r, unsigned q, unsigned m,
                               unsigned m_prime);

// The majority-vote sketch hashes once per key: the SHP bound with q = 1 and
// m = substream count.
double bm_recovery_bound(unsigned k, unsigned r, unsigned m);

// Exact expected fraction of the top k identified by the majority-vote
// sketch with m substreams, when every hitter outweighs the sum of all
// smaller ones: (m/k) * (1 - (1 - 1/m)^k).
double bm_identification_rate(unsigned k, unsigned m);

enum class McAlgo { kShp, kMaxCount, kBoyerMoore };

enum class McProfile {
  // L(i) = 2^(k - i + 1): every hitter outweighs the sum of all smaller
  // ones. Valid for every bound here, but needs k <= 62 in 64-bit counters.
  kPowersOfTwo,
  // L(i) = 2 * (k - i) + 1: strictly decreasing but NOT
  // separation-dominant. Accepted only for identification-rate validation,
  // where the identified count on an exactly k-sparse stream equals the
  // number of occupied substreams regardless of the magnitudes (every
  // substream candidate is some true hitter and substreams never share
  // keys). Rejected for exact-recovery validation.
  kLinear,
};

enum class McMetric { kExactRecovery, kIdentificationRate };

struct McValidation {
  double empirical = 0.0;
  double se = 0.0;        // binomial standard error
  double ci_low = 0.0;    // 99% normal-approximation interval
  double ci_high = 0.0;
  double bound = 0.0;     // analytic value compared against
  bool pass = false;      // lower bound below CI top / exact value inside CI
  unsigned trials = 0;
};

// Draws k distinct random keys per trial, builds the magnitudes from the
// profile, feeds the real sketch, and scores exact recovery of the top r
// (kExactRecovery) or the mean identified fraction of the top k
// (kIdentificationRate, boyer-moore only).
McValidation monte_carlo_validate(McAlgo algo, unsigned k, unsigned r,
                                  McProfile profile, McMetric metric,
                                  unsigned trials, std::uint64_t seed,
                                  const HashConfig& cfg);

// Magnitude profile construction used by the validator; throws if the
// profile cannot represent k or violates the premise the metric needs.
std::vector<std::uint64_t> make_profile(McProfile profile, unsigned k,
                                        McMetric metric);

}  // namespace hhp
