#include "hhp/sketch_maxcount.hpp"

#include <stdexcept>

namespace hhp {

MaxCountSketch::MaxCountSketch(const HashConfig& cfg,
                               const PermutationParams& params)
    : cfg_(cfg),
      params_(params),
      thin_mult_(power_mod32(kForwardBase, cfg.thinning_gamma)) {
  if (cfg_.q < 1 || cfg_.q > 4) throw std::invalid_argument("q must be 1..4");
  if (cfg_.m != 256) throw std::invalid_argument("octet hashing needs m=256");
  if (cfg_.m_prime < 1) throw std::invalid_argument("m_prime must be >= 1");
  if (cfg_.thinning_gamma == cfg_.gamma)
    throw std::invalid_argument(
        "thinning power must differ from the permutation power");
  counts_.assign(std::size_t(cfg_.q) * cfg_.m * cfg_.m_prime, 0);
}

void MaxCountSketch::update(Key key, std::uint64_t v) {
  Key p = permute(key, params_);
  std::uint32_t s = bucket_hash(p, thin_mult_, cfg_.m_prime);
  for (unsigned i = 1; i <= cfg_.q; ++i) {
    std::uint64_t& cell =
        counts_[(std::size_t((i - 1)) * cfg_.m + octet(p, i)) * cfg_.m_prime +
                s];
    if (__builtin_add_overflow(cell, v, &cell)) overflow_ = true;
  }
  if (__builtin_add_overflow(total_, v, &total_)) overflow_ = true;
}

HeavyHitterReport MaxCountSketch::topk(unsigned k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  HeavyHitterReport rep;
  rep.algo = "maxcount";
  rep.unit = "bytes";
  rep.overflow_fault = overflow_;
  rep.zero_signal = (total_ == 0);
  std::vector<std::uint64_t> work = counts_;  // exclusion zeroes cells
  const std::uint32_t mp = cfg_.m_prime;
  for (unsigned r = 0; r < k; ++r) {
    std::array<std::uint32_t, 4> sel = {0, 0, 0, 0};
    std::uint64_t sum = 0;
    for (unsigned i = 0; i < cfg_.q; ++i) {
      std::uint32_t best_j = 0, best_s = 0;
      std::uint64_t best_v = 0;
      for (std::uint32_t j = 0; j < cfg_.m; ++j) {
        const std::uint64_t* cell = &work[(std::size_t(i) * cfg_.m + j) * mp];
        for (std::uint32_t s = 0; s < mp; ++s) {
          if (cell[s] > best_v) {  // strict: ties keep lowest (j, s)
            best_v = cell[s];
            best_j = j;
            best_s = s;
          }
        }
      }
      work[(std::size_t(i) * cfg_.m + best_j) * mp + best_s] = 0;
      sel[i] = best_j;
      sum += best_v;
    }
    rep.entries.push_back(
        {decode(sel, params_), double(sum) / double(cfg_.q)});
  }
  return rep;
}

void MaxCountSketch::merge(const MaxCountSketch& other) {
  if (cfg_.q != other.cfg_.q || cfg_.m != other.cfg_.m ||
      cfg_.m_prime != other.cfg_.m_prime ||
      cfg_.thinning_gamma != other.cfg_.thinning_gamma ||
      params_.forward != other.params_.forward)
    throw std::invalid_argument("merge requires identical config and params");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (__builtin_add_overflow(counts_[i], other.counts_[i], &counts_[i]))
      overflow_ = true;
  }
  if (__builtin_add_overflow(total_, other.total_, &total_)) overflow_ = true;
  overflow_ = overflow_ || other.overflow_;
}

void MaxCountSketch::reset() {
  counts_.assign(counts_.size(), 0);
  total_ = 0;
  overflow_ = false;
}

std::vector<std::uint64_t> MaxCountSketch::marginalize() const {
  std::vector<std::uint64_t> out(std::size_t(cfg_.q) * cfg_.m, 0);
  for (std::size_t ij = 0; ij < out.size(); ++ij) {
    for (std::uint32_t s = 0; s < cfg_.m_prime; ++s)
      out[ij] += counts_[ij * cfg_.m_prime + s];
  }
  return out;
}

}  // namespace hhp
