#include "panolayout/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace panolayout {

Raster::Raster(std::size_t width, std::size_t height, std::size_t channels, double fill)
    : width_(width), height_(height), channels_(channels),
      values_(width * height * channels, fill) {}

Raster::Raster(std::size_t width, std::size_t height, std::size_t channels,
               std::vector<double> values)
    : width_(width), height_(height), channels_(channels), values_(std::move(values)) {
  if (values_.size() != width * height * channels)
    throw std::invalid_argument("raster: value count does not match W*H*C");
}

double max_abs_diff(const Raster& a, const Raster& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
  return m;
}

}  // namespace panolayout
