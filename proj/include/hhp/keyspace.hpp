#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Invertible permutation hashing over 32-bit keys.
//
// Multiplication by an odd constant is a bijection of Z/2^32, and because
//   641 * 6700417 = 2^32 + 1 == 1 (mod 2^32),
// the two factors are each other's multiplicative inverses. Raising them to
// a small power gamma yields a family of cheap invertible permutations: one
// 32-bit multiply forward, one multiply back. The permuted key is then split
// into its q = 4 octets, which act as a complete hash family: the octets
// jointly determine the key, so bin indices can be decoded back to the
// original key by reassembling and inverting.

namespace hhp {

using Key = std::uint32_t;

inline constexpr std::uint32_t kForwardBase = 641u;
inline constexpr std::uint32_t kBackwardBase = 6700417u;

struct PermutationParams {
  std::uint32_t forward = kForwardBase;    // base^gamma mod 2^32
  std::uint32_t backward = kBackwardBase;  // inverse^gamma mod 2^32
  std::uint32_t gamma = 1;
};

// Array geometry shared by the sketches. m_prime is the thinning fan-out for
// max-count (default 50) and the estimator-bin count for boyer-moore
// (default 256); boyer-moore uses m as its substream count.
struct HashConfig {
  std::uint32_t q = 4;
  std::uint32_t m = 256;
  std::uint32_t m_prime = 50;
  std::uint32_t gamma = 3;
  std::uint32_t thinning_gamma = 5;
  std::uint32_t estimator_gamma = 7;
};

// base^gamma mod 2^32. gamma is small, so plain repeated multiplication.
std::uint32_t power_mod32(std::uint32_t base, std::uint32_t gamma);

// forward = 641^gamma, backward = 6700417^gamma; the product is 1 mod 2^32
// for every gamma because it is for gamma = 1.
PermutationParams make_params(std::uint32_t gamma);

inline Key permute(Key k, const PermutationParams& p) { return k * p.forward; }
inline Key invert(Key k, const PermutationParams& p) { return k * p.backward; }

// i-th base-256 digit of k, i in 1..q; octet(k, 1) is the least significant.
inline std::uint32_t octet(Key k, unsigned i) {
  if (i < 1 || i > 4) throw std::out_of_range("octet index must be in 1..4");
  return (k >> (8u * (i - 1))) & 0xFFu;
}

// Exact inverse of the octet decomposition. Rejects out-of-range digits.
Key assemble(const std::array<std::uint32_t, 4>& octets);

// Reassemble selected bin indices and undo the permutation.
inline Key decode(const std::array<std::uint32_t, 4>& octets,
                  const PermutationParams& p) {
  return invert(assemble(octets), p);
}

// Bucket hash for thinning and estimator bins: multiply the (already
// permuted) key by an odd constant and reduce the HIGH 32 bits of the 64-bit
// product mod the bucket count. Reducing the low product mod a power of two
// would reuse the permuted key's low octet verbatim (any odd multiplier
// preserves residues mod 2^j), which correlates the substream index with the
// first octet hash; the high half carries mixed bits from the whole word.
inline std::uint32_t bucket_hash(Key permuted, std::uint32_t multiplier,
                                 std::uint32_t buckets) {
  std::uint64_t prod = std::uint64_t(permuted) * multiplier;
  return std::uint32_t(prod >> 32) % buckets;
}

// Substream index of an already-permuted key, in [0, m_prime).
inline std::uint32_t thin(Key permuted, const HashConfig& cfg) {
  return bucket_hash(permuted, power_mod32(kForwardBase, cfg.thinning_gamma),
                     cfg.m_prime);
}

}  // namespace hhp
