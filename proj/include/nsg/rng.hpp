#pragma once

#include <cmath>
#include <cstdint>

// Counter-based deterministic randomness. Every draw is a pure function of a
// key, so independent grid locations can be seeded as (seed, k, i, j) without
// sharing any generator state, and guided vs baseline runs see identical
// streams.

namespace nsg::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a + kGolden + (b << 1) + (b >> 3));
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return combine(combine(a, b), c);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                             std::uint64_t d) {
  return combine(combine(a, b, c), d);
}

// value in [0, 1)
inline double toUnit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// value in (0, 1], safe under log()
inline double toUnitOpen(std::uint64_t x) {
  return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

inline double uniformAt(std::uint64_t key, std::uint64_t counter) {
  return toUnit(mix64(key + kGolden * (counter + 1)));
}

// standard normal, Box-Muller from two counter draws
inline double normalAt(std::uint64_t key, std::uint64_t counter) {
  const double u1 = toUnitOpen(mix64(key + kGolden * (2 * counter + 1)));
  const double u2 = toUnit(mix64(key + kGolden * (2 * counter + 2)));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// classic sequential splitmix64 stream for places where a cursor is simpler
class Stream {
 public:
  explicit Stream(std::uint64_t key) : state_(key) {}

  std::uint64_t nextU64() {
    state_ += kGolden;
    return mix64(state_);
  }

  double uniform() { return toUnit(nextU64()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = toUnitOpen(nextU64());
    const double u2 = toUnit(nextU64());
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return nextU64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace nsg::rng
