#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace oscwell {

// Counter-based Philox4x32-10 generator. Every draw is a pure function of
// (seed, stream, step), so parallel workers need no shared state and results
// are independent of scheduling order.
namespace philox {

inline void round_once(std::array<std::uint32_t, 4>& ctr, std::array<std::uint32_t, 2>& key) {
  constexpr std::uint64_t m0 = 0xD2511F53ull;
  constexpr std::uint64_t m1 = 0xCD9E8D57ull;
  const std::uint64_t p0 = m0 * ctr[0];
  const std::uint64_t p1 = m1 * ctr[2];
  const std::array<std::uint32_t, 4> out{
      static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
      static_cast<std::uint32_t>(p1),
      static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
      static_cast<std::uint32_t>(p0)};
  ctr = out;
  key[0] += 0x9E3779B9u;
  key[1] += 0xBB67AE85u;
}

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t step) {
  std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
  std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  for (int r = 0; r < 10; ++r) round_once(ctr, key);
  return ctr;
}

}  // namespace philox

inline std::uint64_t make_u64(std::uint32_t hi, std::uint32_t lo) {
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

/// Uniform double in (0, 1], from the top 53 bits of a 64-bit word.
inline double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform draw in (0, 1] keyed by (seed, stream, step).
inline double rng_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t step) {
  const auto b = philox::block(seed, stream, step);
  return unit_open(make_u64(b[0], b[1]));
}

/// A pair of independent standard normals keyed by (seed, stream, step).
inline std::pair<double, double> rng_normal_pair(std::uint64_t seed, std::uint64_t stream,
                                                 std::uint64_t step) {
  const auto b = philox::block(seed, stream, step);
  const double u1 = unit_open(make_u64(b[0], b[1]));
  const double u2 = (static_cast<double>(make_u64(b[2], b[3]) >> 11)) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace oscwell
