#pragma once

#include <cstdint>
#include <random>

namespace panolayout {

/// Seedable generator with fully specified draw semantics, so that a seed
/// replays bit-identically on any conforming standard library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so every draw below is defined here:
///
///   next()             raw 64-bit engine output
///   uniform_index(n)   rejection sampling: discard x >= 2^64 - (2^64 mod n),
///                      return x % n
///   uniform01()        (next() >> 11) * 2^-53, in [0, 1)
///   uniform(a, b)      a + (b - a) * uniform01()
///   coin()             top bit of next()
///   normal()           Box-Muller cosine branch on two uniform01() draws
///                      (u1 := 1 - u1 so the log argument is in (0, 1])
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t uniform_index(std::uint64_t n);
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool coin() { return (next() >> 63) != 0; }
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace panolayout
