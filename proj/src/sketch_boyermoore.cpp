#include "hhp/sketch_boyermoore.hpp"

#include <stdexcept>

namespace hhp {

BoyerMooreSketch::BoyerMooreSketch(const HashConfig& cfg,
                                   const PermutationParams& params)
    : cfg_(cfg),
      params_(params),
      thin_mult_(power_mod32(kForwardBase, cfg.thinning_gamma)),
      est_mult_(power_mod32(kForwardBase, cfg.estimator_gamma)) {
  if (cfg_.m < 1) throw std::invalid_argument("m must be >= 1");
  if (cfg_.m_prime < 1) throw std::invalid_argument("m_prime must be >= 1");
  if (cfg_.thinning_gamma == cfg_.estimator_gamma ||
      cfg_.thinning_gamma == cfg_.gamma || cfg_.estimator_gamma == cfg_.gamma)
    throw std::invalid_argument(
        "permutation, thinning, and estimator powers must be distinct");
  cand_.assign(cfg_.m, 0);
  has_cand_.assign(cfg_.m, 0);
  count_.assign(cfg_.m, 0);
  volumes_.assign(std::size_t(cfg_.m) * cfg_.m_prime, 0);
}

std::uint32_t BoyerMooreSketch::substream_of(Key key) const {
  return bucket_hash(permute(key, params_), thin_mult_, cfg_.m);
}

void BoyerMooreSketch::update(Key key, std::uint64_t v) {
  Key p = permute(key, params_);
  std::uint32_t s = bucket_hash(p, thin_mult_, cfg_.m);
  std::uint32_t j = bucket_hash(p, est_mult_, cfg_.m_prime);

  std::uint64_t& vol = volumes_[std::size_t(s) * cfg_.m_prime + j];
  if (__builtin_add_overflow(vol, v, &vol)) overflow_ = true;
  if (__builtin_add_overflow(total_, v, &total_)) overflow_ = true;

  std::int64_t sv = std::int64_t(v);
  if (sv < 0) overflow_ = true;  // v exceeds the signed balance range

  if (!has_cand_[s]) {
    has_cand_[s] = 1;
    cand_[s] = key;
    count_[s] = sv;
  } else if (cand_[s] == key) {
    if (__builtin_add_overflow(count_[s], sv, &count_[s])) overflow_ = true;
  } else if (count_[s] > 0) {
    // A balance draining to exactly 0 keeps the candidate; the next
    // mismatching key takes over through the branch below.
    if (__builtin_sub_overflow(count_[s], sv, &count_[s])) overflow_ = true;
    if (count_[s] < 0) {
      cand_[s] = key;
      count_[s] = -count_[s];
    }
  } else {
    cand_[s] = key;
    count_[s] = sv;
  }
}

HeavyHitterReport BoyerMooreSketch::topk(unsigned k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > cfg_.m) throw std::invalid_argument("k must be <= m");
  HeavyHitterReport rep;
  rep.algo = "boyermoore";
  rep.unit = "bytes";
  rep.overflow_fault = overflow_;
  rep.zero_signal = (total_ == 0);
  rep.approximate = merged_;

  std::vector<std::uint64_t> est(cfg_.m, 0);
  for (std::uint32_t s = 0; s < cfg_.m; ++s) {
    const std::uint64_t* row = &volumes_[std::size_t(s) * cfg_.m_prime];
    for (std::uint32_t j = 0; j < cfg_.m_prime; ++j)
      if (row[j] > est[s]) est[s] = row[j];
  }

  std::vector<char> used(cfg_.m, 0);
  for (unsigned r = 0; r < k; ++r) {
    std::uint32_t best = cfg_.m;
    for (std::uint32_t s = 0; s < cfg_.m; ++s) {
      if (used[s] || !has_cand_[s]) continue;
      if (best == cfg_.m || est[s] > est[best]) best = s;  // tie: lowest s
    }
    if (best == cfg_.m) break;  // every populated substream already reported
    used[best] = 1;
    rep.entries.push_back({cand_[best], double(est[best])});
  }
  return rep;
}

void BoyerMooreSketch::merge(const BoyerMooreSketch& other) {
  if (cfg_.m != other.cfg_.m || cfg_.m_prime != other.cfg_.m_prime ||
      cfg_.thinning_gamma != other.cfg_.thinning_gamma ||
      cfg_.estimator_gamma != other.cfg_.estimator_gamma ||
      params_.forward != other.params_.forward)
    throw std::invalid_argument("merge requires identical config and params");
  for (std::size_t i = 0; i < volumes_.size(); ++i) {
    if (__builtin_add_overflow(volumes_[i], other.volumes_[i], &volumes_[i]))
      overflow_ = true;
  }
  if (__builtin_add_overflow(total_, other.total_, &total_)) overflow_ = true;
  for (std::uint32_t s = 0; s < cfg_.m; ++s) {
    if (!other.has_cand_[s]) continue;
    if (!has_cand_[s]) {
      has_cand_[s] = 1;
      cand_[s] = other.cand_[s];
      count_[s] = other.count_[s];
    } else if (cand_[s] == other.cand_[s]) {
      if (__builtin_add_overflow(count_[s], other.count_[s], &count_[s]))
        overflow_ = true;
    } else {
      if (other.count_[s] > count_[s]) cand_[s] = other.cand_[s];
      std::int64_t diff = count_[s] - other.count_[s];
      count_[s] = diff < 0 ? -diff : diff;
    }
  }
  overflow_ = overflow_ || other.overflow_;
  merged_ = true;
}

void BoyerMooreSketch::reset() {
  cand_.assign(cfg_.m, 0);
  has_cand_.assign(cfg_.m, 0);
  count_.assign(cfg_.m, 0);
  volumes_.assign(volumes_.size(), 0);
  total_ = 0;
  overflow_ = false;
  merged_ = false;
}

}  // namespace hhp
