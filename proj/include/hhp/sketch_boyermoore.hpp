#pragma once

#include <cstdint>
#include <vector>

#include "hhp/keyspace.hpp"
#include "hhp/report.hpp"

namespace hhp {

// Hash-thinned weighted majority vote. The stream is split into m substreams
// by a hash of the permuted key; each substream runs a weighted MJRTY vote
// (balance += v on candidate match, -= v on mismatch with takeover when the
// balance crosses zero), which provably retains any key holding more than
// half of its substream's magnitude. A parallel m x m' volumes array,
// updated on every arrival, estimates per-substream top volumes; candidates
// are reported directly (original keys, no decoding).
class BoyerMooreSketch {
 public:
  BoyerMooreSketch(const HashConfig& cfg, const PermutationParams& params);

  void update(Key key, std::uint64_t v);

  // k <= m: one candidate per substream. Substreams are ranked by
  // P_est[s] = max_j volumes[s][j] with exclusion; unset substreams are
  // skipped, so the report may hold fewer than k entries.
  HeavyHitterReport topk(unsigned k) const;

  // volumes add exactly; candidate/balance merging is a heuristic (equal
  // candidates add balances, else the larger balance wins with balance
  // |a - b|) and flags the merged sketch's reports as approximate.
  void merge(const BoyerMooreSketch& other);
  void reset();

  std::uint64_t total() const { return total_; }
  bool overflow_fault() const { return overflow_; }
  const HashConfig& config() const { return cfg_; }
  const PermutationParams& params() const { return params_; }

  bool has_candidate(std::uint32_t s) const { return has_cand_[s] != 0; }
  Key candidate(std::uint32_t s) const { return cand_[s]; }
  std::int64_t balance(std::uint32_t s) const { return count_[s]; }
  std::uint32_t substream_of(Key key) const;
  const std::vector<std::uint64_t>& volumes() const { return volumes_; }

  std::size_t cell_count() const { return volumes_.size(); }
  std::size_t slot_count() const { return 2 * std::size_t(cfg_.m); }
  std::size_t byte_footprint() const {
    return volumes_.size() * 8 + std::size_t(cfg_.m) * (4 + 8);
  }

 private:
  HashConfig cfg_;
  PermutationParams params_;
  std::uint32_t thin_mult_;  // substream hash multiplier
  std::uint32_t est_mult_;   // estimator-bin hash multiplier
  std::vector<Key> cand_;
  std::vector<char> has_cand_;
  std::vector<std::int64_t> count_;     // vote balances, >= 0 between updates
  std::vector<std::uint64_t> volumes_;  // [s * m_prime + j]
  std::uint64_t total_ = 0;
  bool overflow_ = false;
  bool merged_ = false;
};

}  // namespace hhp
