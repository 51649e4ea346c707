#include "hhp/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace hhp {
namespace {

// Frozen reference values, computed independently with exact rational
// arithmetic and cross-checked in long-double. Tolerance is pure float
// noise.
TEST(RecoveryBound, FrozenReferenceValues) {
  EXPECT_NEAR(shp_recovery_bound(2, 1, 4, 256), 0.9844663145486265, 1e-12);
  EXPECT_NEAR(shp_recovery_bound(8, 1, 4, 256), 0.8962022365938149, 1e-12);
  EXPECT_NEAR(shp_recovery_bound(8, 8, 4, 256), 0.642855133513769, 1e-12);
  EXPECT_NEAR(maxcount_recovery_bound(8, 8, 4, 256, 50), 0.9912864752513407,
              1e-12);
  EXPECT_NEAR(bm_recovery_bound(2, 1, 256), 0.99609375, 1e-12);
  EXPECT_NEAR(bm_recovery_bound(8, 1, 256), 0.9729746065377434, 1e-12);
}

TEST(RecoveryBound, OneSparseIsCertain) {
  EXPECT_DOUBLE_EQ(shp_recovery_bound(1, 1, 4, 256), 1.0);
  EXPECT_DOUBLE_EQ(shp_recovery_bound(1, 1, 1, 7), 1.0);
  EXPECT_DOUBLE_EQ(maxcount_recovery_bound(1, 1, 4, 256, 50), 1.0);
  EXPECT_DOUBLE_EQ(bm_recovery_bound(1, 1, 64), 1.0);
}

TEST(RecoveryBound, MonotoneInParameters) {
  // More competitors hurt, more bins help, deeper recovery is harder.
  for (unsigned k = 2; k <= 32; ++k)
    EXPECT_LE(shp_recovery_bound(k + 1, 1, 4, 256),
              shp_recovery_bound(k, 1, 4, 256));
  for (unsigned r = 1; r < 8; ++r)
    EXPECT_LE(shp_recovery_bound(8, r + 1, 4, 256),
              shp_recovery_bound(8, r, 4, 256));
  EXPECT_GT(shp_recovery_bound(8, 4, 4, 512), shp_recovery_bound(8, 4, 4, 256));
  // Thinning multiplies the effective bin count.
  EXPECT_DOUBLE_EQ(maxcount_recovery_bound(8, 4, 4, 256, 50),
                   shp_recovery_bound(8, 4, 4, 256 * 50));
  EXPECT_DOUBLE_EQ(bm_recovery_bound(8, 4, 256),
                   shp_recovery_bound(8, 4, 1, 256));
}

TEST(RecoveryBound, RejectsBadArguments) {
  EXPECT_THROW(shp_recovery_bound(4, 0, 4, 256), std::invalid_argument);
  EXPECT_THROW(shp_recovery_bound(4, 5, 4, 256), std::invalid_argument);
  EXPECT_THROW(shp_recovery_bound(4, 2, 0, 256), std::invalid_argument);
  EXPECT_THROW(shp_recovery_bound(300, 257, 4, 256), std::invalid_argument);
  EXPECT_THROW(maxcount_recovery_bound(4, 2, 4, 256, 0),
               std::invalid_argument);
  EXPECT_THROW(bm_identification_rate(0, 256), std::invalid_argument);
}

TEST(LinearizedBound, NeverExceedsTheProductBound) {
  EXPECT_NEAR(shp_linearized_bound(2, 1, 4, 256), 0.984375, 1e-15);
  for (unsigned m : {64u, 256u}) {
    for (unsigned q : {1u, 4u}) {
      for (unsigned k = 1; k <= 64; ++k) {
        for (unsigned r = 1; r <= k && r <= m; ++r) {
          EXPECT_LE(shp_linearized_bound(k, r, q, m),
                    shp_recovery_bound(k, r, q, m) + 1e-12)
              << "k=" << k << " r=" << r << " q=" << q << " m=" << m;
        }
      }
    }
  }
}

TEST(LinearizedBound, UncertifiedVariantOvershoots) {
  // The halved cross term crosses the product bound immediately; that is
  // why it is quarantined behind its own name.
  double product = shp_recovery_bound(2, 1, 4, 256);
  double loose = shp_linearized_bound_uncertified(2, 1, 4, 256);
  EXPECT_NEAR(loose, 0.9921875, 1e-15);
  EXPECT_GT(loose, product);
  // The certified form stays below on the same point.
  EXPECT_LT(shp_linearized_bound(2, 1, 4, 256), product);
}

TEST(IdentificationRate, FrozenReferenceValues) {
  EXPECT_DOUBLE_EQ(bm_identification_rate(1, 256), 1.0);
  EXPECT_NEAR(bm_identification_rate(8, 256), 0.9864344166094305, 1e-12);
  EXPECT_NEAR(bm_identification_rate(16, 256), 0.9712304656989375, 1e-12);
  EXPECT_NEAR(bm_identification_rate(64, 256), 0.8863215625782286, 1e-12);
  EXPECT_NEAR(bm_identification_rate(256, 256), 0.6328402451084638, 1e-12);
  // Decreasing in k: more hitters, more substream collisions.
  for (unsigned k = 1; k < 128; ++k)
    EXPECT_GT(bm_identification_rate(k, 256),
              bm_identification_rate(k + 1, 256));
}

TEST(Profiles, PowersOfTwoDominatesEverySuffixSum) {
  std::vector<std::uint64_t> mags =
      make_profile(McProfile::kPowersOfTwo, 3, McMetric::kExactRecovery);
  EXPECT_EQ(mags, (std::vector<std::uint64_t>{8, 4, 2}));
  mags = make_profile(McProfile::kPowersOfTwo, 20, McMetric::kExactRecovery);
  std::uint64_t suffix = 0;
  for (unsigned i = 20; i-- > 0;) {
    EXPECT_GT(mags[i], suffix);
    suffix += mags[i];
  }
  EXPECT_THROW(make_profile(McProfile::kPowersOfTwo, 63,
                            McMetric::kExactRecovery),
               std::invalid_argument);
}

TEST(Profiles, LinearIsDecreasingButRecoveryIneligible) {
  std::vector<std::uint64_t> mags =
      make_profile(McProfile::kLinear, 4, McMetric::kIdentificationRate);
  EXPECT_EQ(mags, (std::vector<std::uint64_t>{7, 5, 3, 1}));
  EXPECT_THROW(make_profile(McProfile::kLinear, 4, McMetric::kExactRecovery),
               std::invalid_argument);
}

TEST(MonteCarlo, RejectsInvalidSetups) {
  HashConfig cfg;
  EXPECT_THROW(monte_carlo_validate(McAlgo::kShp, 2, 1,
                                    McProfile::kPowersOfTwo,
                                    McMetric::kExactRecovery, 999, 1, cfg),
               std::invalid_argument);
  EXPECT_THROW(monte_carlo_validate(McAlgo::kShp, 2, 1, McProfile::kLinear,
                                    McMetric::kIdentificationRate, 1000, 1,
                                    cfg),
               std::invalid_argument);
}

// Recovering the single hitter of a 1-sparse stream never fails, for any of
// the sketches: the empirical frequency must be exactly 1.
TEST(MonteCarlo, OneSparseAlwaysRecovers) {
  HashConfig cfg;
  for (McAlgo algo :
       {McAlgo::kShp, McAlgo::kMaxCount, McAlgo::kBoyerMoore}) {
    HashConfig c = cfg;
    if (algo == McAlgo::kBoyerMoore) c.m_prime = 256;
    McValidation v =
        monte_carlo_validate(algo, 1, 1, McProfile::kPowersOfTwo,
                             McMetric::kExactRecovery, 1000, 7, c);
    EXPECT_DOUBLE_EQ(v.empirical, 1.0);
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.trials, 1000u);
  }
}

// Top-1 of a 2-sparse stream under octet rows: a shared bin still holds the
// dominant key's octet, so recovery is structurally certain and the run
// must sit at 1.0, comfortably above the 0.9844 bound.
TEST(MonteCarlo, ShpTopOneOfTwoSparse) {
  HashConfig cfg;
  McValidation v =
      monte_carlo_validate(McAlgo::kShp, 2, 1, McProfile::kPowersOfTwo,
                           McMetric::kExactRecovery, 2000, 11, cfg);
  EXPECT_DOUBLE_EQ(v.empirical, 1.0);
  EXPECT_NEAR(v.bound, 0.9844663145486265, 1e-12);
  EXPECT_TRUE(v.pass);
  EXPECT_GE(v.ci_high, v.empirical);
  EXPECT_LE(v.ci_low, v.empirical);
}

TEST(MonteCarlo, IdentificationRateTracksTheExactFormula) {
  HashConfig cfg;
  cfg.m_prime = 256;
  McValidation v = monte_carlo_validate(
      McAlgo::kBoyerMoore, 16, 16, McProfile::kLinear,
      McMetric::kIdentificationRate, 2000, 13, cfg);
  EXPECT_NEAR(v.bound, 0.9712304656989375, 1e-12);
  EXPECT_NEAR(v.empirical, v.bound, 0.02);
  EXPECT_TRUE(v.pass);
}

}  // namespace
}  // namespace hhp
