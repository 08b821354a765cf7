#include "panolayout/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace panolayout {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  // 2^64 mod n; the top `tail` values would bias the modulo.
  const std::uint64_t tail = (max % n + 1) % n;
  for (;;) {
    const std::uint64_t x = next();
    if (x <= max - tail) return x % n;
  }
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace panolayout
