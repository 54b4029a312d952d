#pragma once

#include <array>
#include <cstdint>

namespace elastica {

// Philox4x32-10 counter-based generator. Each (counter, key) pair maps to
// four independent 32-bit words, so sample i of a stream keyed by the seed
// can be generated without sequential state. This is what makes the noise
// synthesis reproducible regardless of pixel evaluation order.
inline std::array<std::uint32_t, 4> philox4x32(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  std::uint32_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += W0;
      k1 += W1;
    }
    const std::uint64_t m0 = static_cast<std::uint64_t>(M0) * ctr[0];
    const std::uint64_t m1 = static_cast<std::uint64_t>(M1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(m0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(m0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(m1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(m1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
  }
  return ctr;
}

// Uniform double in (0, 1] built from 53 bits of one 64-bit word. The open
// lower end keeps log(u) finite.
inline double u64_to_unit_double(std::uint64_t u) {
  return (static_cast<double>(u >> 11) + 1.0) * 0x1p-53;
}

// Two uniforms in (0, 1] from one Philox block keyed by (seed, index, tag).
inline std::array<double, 2> uniform_pair(std::uint64_t seed,
                                          std::uint64_t index,
                                          std::uint32_t tag) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(index >> 32), 0u, tag};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto block = philox4x32(ctr, key);
  const std::uint64_t a =
      (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
  const std::uint64_t b =
      (static_cast<std::uint64_t>(block[2]) << 32) | block[3];
  return {u64_to_unit_double(a), u64_to_unit_double(b)};
}

}  // namespace elastica
