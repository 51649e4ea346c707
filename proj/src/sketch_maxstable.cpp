#include "hhp/sketch_maxstable.hpp"

#include <algorithm>
#include <stdexcept>

namespace hhp {

MaxStableSketch::MaxStableSketch(const HashConfig& cfg,
                                 const PermutationParams& params,
                                 std::uint32_t L, std::uint64_t salt)
    : cfg_(cfg), params_(params), L_(L), salt_(salt) {
  if (cfg_.q < 1 || cfg_.q > 4) throw std::invalid_argument("q must be 1..4");
  if (cfg_.m != 256) throw std::invalid_argument("octet hashing needs m=256");
  if (L_ < 1 || L_ % 2 == 0)
    throw std::invalid_argument("L must be odd (exact median)");
  cells_.assign(std::size_t(cfg_.q) * cfg_.m * L_, 0.0);
}

void MaxStableSketch::update(Key key, std::uint32_t element) {
  Key p = permute(key, params_);
  // The draws depend only on the element, so compute the L of them once and
  // fold the same vector into every row's cell block.
  std::uint64_t inner = mix64(salt_ ^ element);
  scratch_.resize(L_);
  for (std::uint32_t ell = 0; ell < L_; ++ell)
    scratch_[ell] =
        frechet_from_uniform((double(mix64(inner + ell)) + 0.5) * 0x1.0p-64);
  for (unsigned i = 1; i <= cfg_.q; ++i) {
    double* block = &cells_[(std::size_t(i - 1) * cfg_.m + octet(p, i)) * L_];
    for (std::uint32_t ell = 0; ell < L_; ++ell) {
      if (scratch_[ell] > block[ell]) block[ell] = scratch_[ell];
    }
  }
  ++updates_;
}

Top1Result MaxStableSketch::top1() const {
  Top1Result out;
  if (updates_ == 0) {
    out.zero_signal = true;
    return out;
  }
  std::array<std::uint32_t, 4> sel = {0, 0, 0, 0};
  double med_sum = 0.0;
  std::vector<double> lane(L_);
  for (unsigned i = 0; i < cfg_.q; ++i) {
    std::uint32_t best_j = 0;
    double best_med = -1.0;
    for (std::uint32_t j = 0; j < cfg_.m; ++j) {
      const double* block = &cells_[(std::size_t(i) * cfg_.m + j) * L_];
      lane.assign(block, block + L_);
      std::nth_element(lane.begin(), lane.begin() + L_ / 2, lane.end());
      double med = lane[L_ / 2];
      if (med > best_med) {  // strict: ties keep lowest j
        best_med = med;
        best_j = j;
      }
    }
    sel[i] = best_j;
    med_sum += best_med;
  }
  out.key = decode(sel, params_);
  out.estimate = std::log(2.0) * med_sum / double(cfg_.q);
  return out;
}

HeavyHitterReport MaxStableSketch::report() const {
  HeavyHitterReport rep;
  rep.algo = "maxstable";
  rep.unit = "elements";
  Top1Result r = top1();
  rep.zero_signal = r.zero_signal;
  if (!r.zero_signal) rep.entries.push_back({r.key, r.estimate});
  return rep;
}

void MaxStableSketch::merge(const MaxStableSketch& other) {
  if (salt_ != other.salt_)
    throw std::invalid_argument("merge requires the same draw salt");
  if (cfg_.q != other.cfg_.q || cfg_.m != other.cfg_.m || L_ != other.L_ ||
      params_.forward != other.params_.forward)
    throw std::invalid_argument("merge requires identical config and params");
  for (std::size_t i = 0; i < cells_.size(); ++i)
    cells_[i] = std::max(cells_[i], other.cells_[i]);
  updates_ += other.updates_;
}

void MaxStableSketch::reset() {
  cells_.assign(cells_.size(), 0.0);
  updates_ = 0;
}

}  // namespace hhp
