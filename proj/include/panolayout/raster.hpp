#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace panolayout {

/// Dense W x H x C grid of doubles, row-major with y outermost, then x, then
/// channel. This is also the PLT1 on-disk order.
class Raster {
 public:
  Raster() = default;
  Raster(std::size_t width, std::size_t height, std::size_t channels, double fill = 0.0);
  Raster(std::size_t width, std::size_t height, std::size_t channels, std::vector<double> values);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t channels() const { return channels_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& at(std::size_t x, std::size_t y, std::size_t c = 0) {
    return values_[(y * width_ + x) * channels_ + c];
  }
  double at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return values_[(y * width_ + x) * channels_ + c];
  }

  std::span<double> pixel(std::size_t x, std::size_t y) {
    return {values_.data() + (y * width_ + x) * channels_, channels_};
  }
  std::span<const double> pixel(std::size_t x, std::size_t y) const {
    return {values_.data() + (y * width_ + x) * channels_, channels_};
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const Raster& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  bool operator==(const Raster&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> values_;
};

/// W x H x d layout map L.
using LayoutMap = Raster;
/// W x H single-channel scalar field (distance, opacity, composite weight).
using FieldGrid = Raster;

/// Largest absolute elementwise difference; throws on shape mismatch.
double max_abs_diff(const Raster& a, const Raster& b);

}  // namespace panolayout
