#include "hhp/keyspace.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "hhp/rng.hpp"

namespace hhp {
namespace {

TEST(PowerMod, KnownValues) {
  EXPECT_EQ(power_mod32(kForwardBase, 1), 641u);
  EXPECT_EQ(power_mod32(kForwardBase, 2), 410881u);
  EXPECT_EQ(power_mod32(kForwardBase, 3), 263374721u);
  EXPECT_EQ(power_mod32(kBackwardBase, 1), 6700417u);
}

TEST(MakeParams, ForwardBackwardAreInverses) {
  for (std::uint32_t gamma = 1; gamma <= 12; ++gamma) {
    PermutationParams p = make_params(gamma);
    EXPECT_EQ(p.forward * p.backward, 1u) << "gamma=" << gamma;
    EXPECT_EQ(p.forward & 1u, 1u) << "forward must be odd";
    EXPECT_EQ(p.gamma, gamma);
  }
  EXPECT_EQ(make_params(1).forward, 641u);
  EXPECT_EQ(make_params(1).backward, 6700417u);
  EXPECT_EQ(make_params(3).forward, 263374721u);
  EXPECT_THROW(make_params(0), std::invalid_argument);
}

TEST(Permute, FixedPointsAndKnownImages) {
  PermutationParams p1 = make_params(1);
  EXPECT_EQ(permute(0, p1), 0u);
  EXPECT_EQ(permute(1, p1), 641u);
  EXPECT_EQ(permute(6700417u, p1), 1u);
  EXPECT_EQ(invert(641u, p1), 1u);
  EXPECT_EQ(invert(0, p1), 0u);
  EXPECT_EQ(invert(permute(0xDEADBEEFu, p1), p1), 0xDEADBEEFu);
}

TEST(Permute, GroupAction) {
  PermutationParams p1 = make_params(1);
  PermutationParams p2 = make_params(2);
  PermutationParams p5 = make_params(5);
  SplitMix64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    Key k = rng.next_u32();
    EXPECT_EQ(permute(permute(k, p1), p1), permute(k, p2));
    EXPECT_EQ(permute(permute(k, p2), p1), permute(k, make_params(3)));
    EXPECT_EQ(invert(permute(k, p5), p5), k);
  }
}

TEST(Permute, RoundTripRandomAndStructured) {
  std::vector<Key> keys = {0u,          1u,          2u,
                           255u,        256u,        65535u,
                           65536u,      0x00FF00FFu, 0x7FFFFFFFu,
                           0x80000000u, 0xC0A80001u, 0xFFFF0000u,
                           0xFFFFFFFFu};
  for (int b = 0; b < 32; ++b) keys.push_back(Key(1) << b);
  // contiguous /16 block
  for (Key k = 0x0A140000u; k < 0x0A140000u + 4096u; ++k) keys.push_back(k);
  SplitMix64 rng(1);
  for (int t = 0; t < 1000000; ++t) keys.push_back(rng.next_u32());

  for (std::uint32_t gamma : {1u, 3u, 5u}) {
    PermutationParams p = make_params(gamma);
    for (Key k : keys) {
      if (invert(permute(k, p), p) != k) {
        FAIL() << "round trip broke at key " << k << " gamma " << gamma;
      }
    }
  }
}

// Full 2^32 sweep; excluded from normal runs, enable with
// --gtest_also_run_disabled_tests.
TEST(Permute, DISABLED_ExhaustiveRoundTrip) {
  PermutationParams p = make_params(3);
  Key k = 0;
  do {
    ASSERT_EQ(invert(permute(k, p), p), k);
  } while (++k != 0);
}

TEST(Octet, ExtractsBaseMDigits) {
  EXPECT_EQ(octet(0x0A141E28u, 1), 0x28u);
  EXPECT_EQ(octet(0x0A141E28u, 2), 0x1Eu);
  EXPECT_EQ(octet(0x0A141E28u, 3), 0x14u);
  EXPECT_EQ(octet(0x0A141E28u, 4), 0x0Au);
  for (unsigned i = 1; i <= 4; ++i) EXPECT_EQ(octet(0u, i), 0u);
  EXPECT_THROW(octet(1u, 0), std::out_of_range);
  EXPECT_THROW(octet(1u, 5), std::out_of_range);
}

TEST(Assemble, InvertsOctetDecomposition) {
  EXPECT_EQ(assemble({0x28u, 0x1Eu, 0x14u, 0x0Au}), 0x0A141E28u);
  EXPECT_EQ(assemble({0u, 0u, 0u, 0u}), 0u);
  EXPECT_THROW(assemble({256u, 0u, 0u, 0u}), std::invalid_argument);
  SplitMix64 rng(2);
  for (int t = 0; t < 10000; ++t) {
    Key k = rng.next_u32();
    EXPECT_EQ(assemble({octet(k, 1), octet(k, 2), octet(k, 3), octet(k, 4)}),
              k);
  }
}

TEST(Decode, RecoversKeysFromPermutedOctets) {
  PermutationParams p1 = make_params(1);
  // permute(1) = 641 = 0x281: octets [0x81, 0x02, 0, 0]
  std::array<std::uint32_t, 4> octets_of_641 = {0x81u, 0x02u, 0u, 0u};
  EXPECT_EQ(decode(octets_of_641, p1), 1u);
  EXPECT_EQ(decode({0u, 0u, 0u, 0u}, p1), 0u);

  PermutationParams p3 = make_params(3);
  for (Key k : {Key(0xC0A80001u), Key(1u), Key(0xFFFFFFFFu)}) {
    Key p = permute(k, p3);
    EXPECT_EQ(decode({octet(p, 1), octet(p, 2), octet(p, 3), octet(p, 4)}, p3),
              k);
  }
}

TEST(BucketHash, DeterministicAndInRange) {
  HashConfig cfg;
  std::uint32_t mult = power_mod32(kForwardBase, cfg.thinning_gamma);
  SplitMix64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    Key p = rng.next_u32();
    std::uint32_t s = bucket_hash(p, mult, 50);
    EXPECT_LT(s, 50u);
    EXPECT_EQ(s, bucket_hash(p, mult, 50));
  }
  EXPECT_EQ(bucket_hash(0u, mult, 50), 0u);
  EXPECT_EQ(thin(0u, cfg), 0u);
}

TEST(BucketHash, ThinUniformityOverRandomKeys) {
  HashConfig cfg;
  cfg.m_prime = 256;
  std::vector<std::uint64_t> freq(cfg.m_prime, 0);
  SplitMix64 rng(4);
  const int n = 1000000;
  for (int t = 0; t < n; ++t) ++freq[thin(rng.next_u32(), cfg)];
  double mean = double(n) / cfg.m_prime;
  std::uint64_t mx = 0;
  for (auto f : freq) mx = std::max(mx, f);
  EXPECT_LE(double(mx) / mean, 1.1);
}

// Conditional collision probability of the substream hash given an octet
// collision must stay near 1/m'. A low-bits reduction of the multiplied key
// fails this badly (the low byte of p determines p * mult mod 256); the
// multiply-shift reduction passes for every octet row.
TEST(BucketHash, ThinIndependentOfOctetCollisions) {
  HashConfig cfg;
  for (std::uint32_t m_prime : {50u, 256u}) {
    cfg.m_prime = m_prime;
    SplitMix64 rng(5);
    for (unsigned row = 1; row <= 4; ++row) {
      std::uint64_t octet_coll = 0, both_coll = 0;
      for (int t = 0; t < 200000; ++t) {
        Key a = rng.next_u32();
        Key b = rng.next_u32();
        if (octet(a, row) != octet(b, row)) continue;
        ++octet_coll;
        if (thin(a, cfg) == thin(b, cfg)) ++both_coll;
      }
      ASSERT_GT(octet_coll, 100u);
      double cond = double(both_coll) / double(octet_coll);
      EXPECT_LT(cond, 3.0 / m_prime)
          << "row " << row << " m'=" << m_prime;
    }
  }
}

double octet_chi2(const std::vector<Key>& permuted, unsigned row) {
  std::array<std::uint64_t, 256> freq{};
  for (Key p : permuted) ++freq[octet(p, row)];
  double expected = double(permuted.size()) / 256.0;
  double chi2 = 0.0;
  for (auto f : freq) {
    double d = double(f) - expected;
    chi2 += d * d / expected;
  }
  return chi2;
}

// Permuting a contiguous /16 block must spread every octet nearly uniformly
// for the shipped defaults (gamma 3 and 5). 324.83 is the 99.9th percentile
// of a chi-square with 255 degrees of freedom, the distribution an ideal
// uniform hash would produce.
TEST(Uniformity, SixteenBitBlockChiSquare) {
  const double kThreshold = 324.83;
  for (std::uint32_t gamma : {3u, 5u}) {
    PermutationParams p = make_params(gamma);
    for (Key base : {Key(0x0A000000u), Key(0xC0A80000u), Key(0x7F120000u)}) {
      std::vector<Key> permuted;
      permuted.reserve(65536);
      for (std::uint32_t i = 0; i < 65536u; ++i)
        permuted.push_back(permute(base + i, p));
      for (unsigned row = 1; row <= 4; ++row) {
        EXPECT_LT(octet_chi2(permuted, row), kThreshold)
            << "gamma " << gamma << " base " << base << " octet " << row;
      }
    }
  }
}

}  // namespace
}  // namespace hhp
