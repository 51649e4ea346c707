#include "hhp/sketch_boyermoore.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "hhp/rng.hpp"

namespace hhp {
namespace {

HashConfig bm_cfg(std::uint32_t m = 256, std::uint32_t m_prime = 256) {
  HashConfig cfg;
  cfg.m = m;
  cfg.m_prime = m_prime;
  return cfg;
}

// m = 1 funnels every key into the same vote, exposing the MJRTY mechanics.
HashConfig single_stream_cfg() { return bm_cfg(1, 8); }

TEST(BoyerMooreCtor, RejectsBadShapes) {
  PermutationParams p = make_params(3);
  HashConfig cfg = bm_cfg(0, 8);
  EXPECT_THROW(BoyerMooreSketch(cfg, p), std::invalid_argument);
  cfg = bm_cfg(8, 0);
  EXPECT_THROW(BoyerMooreSketch(cfg, p), std::invalid_argument);
  cfg = bm_cfg();
  cfg.estimator_gamma = cfg.thinning_gamma;
  EXPECT_THROW(BoyerMooreSketch(cfg, p), std::invalid_argument);
  cfg = bm_cfg();
  cfg.thinning_gamma = cfg.gamma;
  EXPECT_THROW(BoyerMooreSketch(cfg, p), std::invalid_argument);
  cfg = bm_cfg();
  cfg.estimator_gamma = cfg.gamma;
  EXPECT_THROW(BoyerMooreSketch(cfg, p), std::invalid_argument);
}

TEST(BoyerMooreVote, MatchRefillsAfterMismatchDrain) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(single_stream_cfg(), p);
  const Key A = 0xAAAA0001, B = 0xBBBB0002;
  bm.update(A, 5);
  EXPECT_TRUE(bm.has_candidate(0));
  EXPECT_EQ(bm.candidate(0), A);
  EXPECT_EQ(bm.balance(0), 5);
  bm.update(B, 3);
  EXPECT_EQ(bm.candidate(0), A);
  EXPECT_EQ(bm.balance(0), 2);
  bm.update(A, 4);
  EXPECT_EQ(bm.candidate(0), A);
  EXPECT_EQ(bm.balance(0), 6);
}

TEST(BoyerMooreVote, HeavierMismatchTakesOver) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(single_stream_cfg(), p);
  const Key A = 0xAAAA0001, B = 0xBBBB0002;
  bm.update(A, 3);
  bm.update(B, 5);
  // Balance went 3 - 5 = -2; the crossing flips the candidate and the
  // leftover magnitude becomes the new balance.
  EXPECT_EQ(bm.candidate(0), B);
  EXPECT_EQ(bm.balance(0), 2);
}

TEST(BoyerMooreVote, ZeroBalanceKeepsCandidateUntilNextMismatch) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(single_stream_cfg(), p);
  const Key A = 0xAAAA0001, B = 0xBBBB0002, C = 0xCCCC0003;
  bm.update(A, 5);
  bm.update(B, 5);
  EXPECT_EQ(bm.candidate(0), A);  // exact drain retains, does not evict
  EXPECT_EQ(bm.balance(0), 0);
  bm.update(C, 4);
  EXPECT_EQ(bm.candidate(0), C);
  EXPECT_EQ(bm.balance(0), 4);
}

TEST(BoyerMooreVote, MajorityKeySurvivesAnyInterleaving) {
  PermutationParams p = make_params(3);
  const Key A = 0x0A000001;
  // A carries 24 of 40 units. Three adversarial orders, same multiset.
  const std::vector<std::vector<std::pair<Key, std::uint64_t>>> orders = {
      {{A, 24}, {0xB0000001, 9}, {0xB0000002, 7}},
      {{0xB0000001, 9}, {0xB0000002, 7}, {A, 24}},
      {{0xB0000001, 4}, {A, 8}, {0xB0000002, 7}, {A, 8}, {0xB0000001, 5},
       {A, 8}},
  };
  for (const auto& order : orders) {
    BoyerMooreSketch bm(single_stream_cfg(), p);
    for (const auto& [k, v] : order) bm.update(k, v);
    EXPECT_EQ(bm.candidate(0), A);
  }
}

TEST(BoyerMooreVolumes, EveryBranchAccumulates) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(bm_cfg(16, 16), p);
  SplitMix64 rng(3);
  std::uint64_t expect_total = 0;
  for (int t = 0; t < 5000; ++t) {
    std::uint64_t v = 1 + rng.bounded(20);
    bm.update(rng.next_u32() & 0xFFFF, v);  // few keys, lots of vote churn
    expect_total += v;
  }
  std::uint64_t vol_sum =
      std::accumulate(bm.volumes().begin(), bm.volumes().end(),
                      std::uint64_t(0));
  EXPECT_EQ(vol_sum, expect_total);
  EXPECT_EQ(bm.total(), expect_total);
}

TEST(BoyerMooreTopk, CandidateLandsAtItsSubstream) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(bm_cfg(), p);
  const Key k = 0xC0A80001;
  bm.update(k, 9);
  std::uint32_t s = bm.substream_of(k);
  EXPECT_TRUE(bm.has_candidate(s));
  EXPECT_EQ(bm.candidate(s), k);
}

TEST(BoyerMooreTopk, OneSparseExact) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(bm_cfg(), p);
  bm.update(0xC0A80001, 1234);
  HeavyHitterReport rep = bm.topk(1);
  ASSERT_EQ(rep.entries.size(), 1u);
  EXPECT_EQ(rep.entries[0].key, 0xC0A80001u);
  EXPECT_DOUBLE_EQ(rep.entries[0].estimate, 1234.0);
  EXPECT_FALSE(rep.approximate);
}

TEST(BoyerMooreTopk, SkipsUnsetSubstreamsAndMayReportFewer) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(bm_cfg(), p);
  std::vector<Key> keys = {0x01020304, 0x0A141E28, 0xC0A80101};
  std::vector<std::uint64_t> vals = {300, 200, 100};
  // Keys must occupy distinct substreams for the ranking check below.
  ASSERT_NE(bm.substream_of(keys[0]), bm.substream_of(keys[1]));
  ASSERT_NE(bm.substream_of(keys[0]), bm.substream_of(keys[2]));
  ASSERT_NE(bm.substream_of(keys[1]), bm.substream_of(keys[2]));
  for (std::size_t i = 0; i < keys.size(); ++i) bm.update(keys[i], vals[i]);
  HeavyHitterReport rep = bm.topk(10);
  ASSERT_EQ(rep.entries.size(), 3u);  // only three substreams are populated
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rep.entries[i].key, keys[i]);
    EXPECT_DOUBLE_EQ(rep.entries[i].estimate, double(vals[i]));
  }
}

TEST(BoyerMooreTopk, EstimateIsSubstreamMaxNotSum) {
  HashConfig cfg = bm_cfg();
  PermutationParams p = make_params(cfg.gamma);
  BoyerMooreSketch bm(cfg, p);
  const Key a = 0xC0A80001;
  std::uint32_t s = bm.substream_of(a);
  std::uint32_t j_a = bucket_hash(permute(a, p),
                                  power_mod32(kForwardBase,
                                              cfg.estimator_gamma),
                                  cfg.m_prime);
  // Find a second key in the same substream but a different estimator bin.
  Key b = 0;
  for (Key cand = 1; cand < 2000000; ++cand) {
    if (cand == a || bm.substream_of(cand) != s) continue;
    std::uint32_t j = bucket_hash(permute(cand, p),
                                  power_mod32(kForwardBase,
                                              cfg.estimator_gamma),
                                  cfg.m_prime);
    if (j != j_a) {
      b = cand;
      break;
    }
  }
  ASSERT_NE(b, 0u);
  bm.update(a, 100);
  bm.update(b, 60);
  HeavyHitterReport rep = bm.topk(1);
  EXPECT_EQ(rep.entries[0].key, a);
  EXPECT_DOUBLE_EQ(rep.entries[0].estimate, 100.0);  // max, not 160
}

TEST(BoyerMooreTopk, EmptySketchIsZeroSignalWithNoEntries) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(bm_cfg(), p);
  HeavyHitterReport rep = bm.topk(4);
  EXPECT_TRUE(rep.zero_signal);
  EXPECT_TRUE(rep.entries.empty());
}

TEST(BoyerMooreTopk, RejectsKBeyondSubstreamCount) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(bm_cfg(16, 16), p);
  EXPECT_THROW(bm.topk(17), std::invalid_argument);
  EXPECT_THROW(bm.topk(0), std::invalid_argument);
  EXPECT_NO_THROW(bm.topk(16));
}

TEST(BoyerMooreMerge, VolumesAddAndVoteHeuristicApplies) {
  PermutationParams p = make_params(3);
  HashConfig cfg = single_stream_cfg();
  const Key X = 0x11110001, Y = 0x22220002;

  // Same candidate: balances add.
  BoyerMooreSketch a(cfg, p), b(cfg, p);
  a.update(X, 7);
  b.update(X, 3);
  a.merge(b);
  EXPECT_EQ(a.candidate(0), X);
  EXPECT_EQ(a.balance(0), 10);
  EXPECT_EQ(a.total(), 10u);
  EXPECT_TRUE(a.topk(1).approximate);

  // Different candidates: larger balance wins, difference survives.
  BoyerMooreSketch c(cfg, p), d(cfg, p);
  c.update(X, 7);
  d.update(Y, 3);
  c.merge(d);
  EXPECT_EQ(c.candidate(0), X);
  EXPECT_EQ(c.balance(0), 4);

  // One side empty: the other side's vote is copied over.
  BoyerMooreSketch e(cfg, p), f(cfg, p);
  f.update(Y, 5);
  e.merge(f);
  EXPECT_EQ(e.candidate(0), Y);
  EXPECT_EQ(e.balance(0), 5);

  std::uint64_t vol_sum = std::accumulate(
      c.volumes().begin(), c.volumes().end(), std::uint64_t(0));
  EXPECT_EQ(vol_sum, 10u);
}

TEST(BoyerMooreMerge, RejectsMismatchedShape) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch a(bm_cfg(16, 16), p);
  BoyerMooreSketch b(bm_cfg(32, 16), p);
  EXPECT_THROW(a.merge(b), std::invalid_argument);
}

TEST(BoyerMooreReset, ClearsStateAndFlags) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch a(single_stream_cfg(), p), b(single_stream_cfg(), p);
  a.update(1, 2);
  b.update(3, 4);
  a.merge(b);
  a.reset();
  EXPECT_EQ(a.total(), 0u);
  EXPECT_FALSE(a.has_candidate(0));
  HeavyHitterReport rep = a.topk(1);
  EXPECT_TRUE(rep.zero_signal);
  EXPECT_FALSE(rep.approximate);
}

TEST(BoyerMooreOverflow, ReportedNotSilent) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(single_stream_cfg(), p);
  // A magnitude beyond the signed balance range must be flagged, not folded
  // into a negative vote.
  bm.update(7, std::uint64_t(1) << 63);
  EXPECT_TRUE(bm.overflow_fault());
}

TEST(BoyerMooreFootprint, FormulaSized) {
  PermutationParams p = make_params(3);
  BoyerMooreSketch bm(bm_cfg(), p);
  EXPECT_EQ(bm.cell_count(), 65536u);  // 256 * 256 volume cells
  EXPECT_EQ(bm.slot_count(), 512u);    // candidate + balance per substream
  EXPECT_EQ(bm.byte_footprint(), 527360u);
}

}  // namespace
}  // namespace hhp
