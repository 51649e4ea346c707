#pragma once

#include <cstdint>
#include <vector>

#include "hhp/keyspace.hpp"
#include "hhp/report.hpp"

namespace hhp {

// Max-count hashing pursuit: the SHP rows gain a thinning dimension. A
// secondary hash splits the stream into m' substreams and each update lands
// in the (row, octet bin, substream) cell, so two keys collide in a row only
// if they share both the octet AND the substream. Collapsing the substream
// axis reproduces the SHP array exactly.
class MaxCountSketch {
 public:
  MaxCountSketch(const HashConfig& cfg, const PermutationParams& params);

  void update(Key key, std::uint64_t v);

  // Per round: max over the substream axis per (row, bin), take the per-row
  // argmax bin, find its maximizing substream, zero that single cell, and
  // decode the bin indices. Runs on a copy of the counters so repeated
  // queries are identical; k has no upper limit beyond emitting zeros.
  HeavyHitterReport topk(unsigned k) const;

  void merge(const MaxCountSketch& other);
  void reset();

  std::uint64_t total() const { return total_; }
  bool overflow_fault() const { return overflow_; }
  const HashConfig& config() const { return cfg_; }
  const PermutationParams& params() const { return params_; }

  // Sum over the substream axis: the q x m SHP array, row-major.
  std::vector<std::uint64_t> marginalize() const;

  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::size_t cell_count() const { return counts_.size(); }
  std::size_t byte_footprint() const { return counts_.size() * 8; }

 private:
  HashConfig cfg_;
  PermutationParams params_;
  std::uint32_t thin_mult_;            // 641^thinning_gamma mod 2^32
  std::vector<std::uint64_t> counts_;  // [(i * m + j) * m_prime + s]
  std::uint64_t total_ = 0;
  bool overflow_ = false;
};

}  // namespace hhp
