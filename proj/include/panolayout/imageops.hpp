#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "panolayout/geometry.hpp"
#include "panolayout/layout.hpp"
#include "panolayout/raster.hpp"

namespace panolayout {

/// Three-channel 2:1 panorama with values in [0, 1].
class EquirectImage {
 public:
  explicit EquirectImage(Raster pixels);

  std::size_t width() const { return pixels_.width(); }
  std::size_t height() const { return pixels_.height(); }
  const Raster& pixels() const { return pixels_; }

  bool operator==(const EquirectImage&) const = default;

 private:
  Raster pixels_;
};

/// Odd-sized correlation kernel, row-major weights.
class Kernel2D {
 public:
  Kernel2D(std::size_t height, std::size_t width, std::vector<double> weights);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  double at(std::size_t ky, std::size_t kx) const { return weights_[ky * width_ + kx]; }

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> weights_;
};

struct PerspectiveCamera {
  double yaw = 0.0;    ///< azimuth of the view direction, radians
  double pitch = 0.0;  ///< elevation above the horizon, radians
  double roll = 0.0;   ///< rotation about the view direction, radians
  double hfov = kPi / 2.0;
  std::size_t out_width = 256;
  std::size_t out_height = 256;
};

/// Adds `pad` columns on each side: the left pad repeats the rightmost
/// columns and the right pad repeats the leftmost ones. Rows are unchanged.
Raster circular_pad(const Raster& image, std::size_t pad);

/// Same-size cross-correlation of every channel with `kernel`, circular in x
/// and zero-padded in y.
Raster conv2d_circular(const Raster& image, const Kernel2D& kernel);

/// Output column x is input column (x - t) mod W.
Raster circshift(const Raster& image, std::int64_t t);

/// Output column x is input column W - 1 - x.
Raster flip_horizontal(const Raster& image);

struct AugmentRecord {
  std::size_t t = 0;
  bool flip = false;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  bool operator==(const AugmentRecord&) const = default;
};

/// Draws t = uniform_index(W) then flip = coin() from Rng(seed).
AugmentRecord draw_augmentation(std::uint64_t seed, std::size_t width);

/// Shift by t columns, then optionally mirror.
Raster apply_augmentation(const Raster& grid, const AugmentRecord& record);
SceneLayout apply_augmentation(const SceneLayout& layout, const AugmentRecord& record);

struct AugmentResult {
  EquirectImage image;
  SceneLayout layout;
  AugmentRecord record;
};

/// Random circular translation plus optional horizontal flip, applied to the
/// image and co-applied to the layout so that rendering commutes with it.
AugmentResult augment(const EquirectImage& image, const SceneLayout& layout, std::uint64_t seed);

struct BilinearTap {
  std::size_t x = 0;
  std::size_t y = 0;
  double weight = 0.0;
};

/// Taps for sampling an equirect grid at continuous position (u, v), where
/// pixel (i, j) covers [i, i+1) x [j, j+1). Wraps in x, clamps in y.
std::array<BilinearTap, 4> bilinear_taps(std::size_t width, std::size_t height, double u, double v);

/// Samples `image` at a sphere direction.
void sample_equirect(const Raster& image, const UnitVec& dir, std::span<double> out);

struct CameraBasis {
  UnitVec forward;
  UnitVec right;
  UnitVec up;
};

/// View frame of a camera. At zero pitch and roll, `right` points towards
/// increasing azimuth, so views are not mirrored relative to the panorama.
CameraBasis camera_basis(const PerspectiveCamera& cam);

/// Pinhole view of the panorama, bilinearly sampled.
Raster project_perspective(const Raster& image, const PerspectiveCamera& cam);

}  // namespace panolayout
