#include "hhp/keyspace.hpp"

namespace hhp {

std::uint32_t power_mod32(std::uint32_t base, std::uint32_t gamma) {
  std::uint32_t r = 1;
  for (std::uint32_t i = 0; i < gamma; ++i) r *= base;  // wraps mod 2^32
  return r;
}

PermutationParams make_params(std::uint32_t gamma) {
  if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
  PermutationParams p;
  p.gamma = gamma;
  p.forward = power_mod32(kForwardBase, gamma);
  p.backward = power_mod32(kBackwardBase, gamma);
  return p;
}

Key assemble(const std::array<std::uint32_t, 4>& octets) {
  Key k = 0;
  for (int i = 3; i >= 0; --i) {
    if (octets[i] > 0xFFu)
      throw std::invalid_argument("octet value exceeds 255");
    k = (k << 8) | octets[i];
  }
  return k;
}

}  // namespace hhp
