#include "panolayout/imageops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "panolayout/parallel.hpp"
#include "panolayout/random.hpp"

namespace panolayout {

namespace {

UnitVec scaled_sum(const UnitVec& a, double sa, const UnitVec& b, double sb) {
  return {sa * a.x + sb * b.x, sa * a.y + sb * b.y, sa * a.z + sb * b.z};
}

double wrap_signed(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

}  // namespace

EquirectImage::EquirectImage(Raster pixels) : pixels_(std::move(pixels)) {
  require_equirect(pixels_.width(), pixels_.height());
  if (pixels_.channels() != 3) throw std::invalid_argument("panorama must have 3 channels");
  for (double v : pixels_.values())
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("panorama values must lie in [0, 1]");
}

Kernel2D::Kernel2D(std::size_t height, std::size_t width, std::vector<double> weights)
    : height_(height), width_(width), weights_(std::move(weights)) {
  if (height_ % 2 == 0 || width_ % 2 == 0)
    throw std::invalid_argument("kernel extents must be odd (got " + std::to_string(height_) +
                                "x" + std::to_string(width_) + ")");
  if (weights_.size() != height_ * width_)
    throw std::invalid_argument("kernel weight count does not match its extents");
}

Raster circular_pad(const Raster& image, std::size_t pad) {
  const std::size_t w = image.width();
  if (pad > w) throw std::invalid_argument("circular_pad: pad exceeds image width");
  Raster out(w + 2 * pad, image.height(), image.channels());
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < out.width(); ++x) {
      const std::size_t src = (x + w - pad) % w;
      std::ranges::copy(image.pixel(src, y), out.pixel(x, y).begin());
    }
  }
  return out;
}

Raster conv2d_circular(const Raster& image, const Kernel2D& kernel) {
  const std::size_t w = image.width();
  const std::size_t h = image.height();
  const std::size_t ch = image.channels();
  const std::size_t rx = kernel.width() / 2;
  const std::size_t ry = kernel.height() / 2;
  Raster out(w, h, ch);
  if (w == 0) return out;
  // Column offset that maps tap kx to source column (x + kx - rx) mod w
  // without going negative; equivalent to circular_pad(image, rx).
  const std::size_t base = w - rx % w;
  parallel_for_rows(h, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        auto dst = out.pixel(x, y);
        for (std::size_t ky = 0; ky < kernel.height(); ++ky) {
          if (y + ky < ry || y + ky - ry >= h) continue;
          const std::size_t sy = y + ky - ry;
          for (std::size_t kx = 0; kx < kernel.width(); ++kx) {
            const double k = kernel.at(ky, kx);
            const auto src = image.pixel((x + kx + base) % w, sy);
            for (std::size_t c = 0; c < ch; ++c) dst[c] += k * src[c];
          }
        }
      }
    }
  });
  return out;
}

Raster circshift(const Raster& image, std::int64_t t) {
  const auto w = static_cast<std::int64_t>(image.width());
  Raster out(image.width(), image.height(), image.channels());
  if (w == 0) return out;
  const std::int64_t shift = ((t % w) + w) % w;
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      const auto src = static_cast<std::size_t>((x - shift + w) % w);
      std::ranges::copy(image.pixel(src, y), out.pixel(static_cast<std::size_t>(x), y).begin());
    }
  }
  return out;
}

Raster flip_horizontal(const Raster& image) {
  const std::size_t w = image.width();
  Raster out(w, image.height(), image.channels());
  for (std::size_t y = 0; y < image.height(); ++y)
    for (std::size_t x = 0; x < w; ++x)
      std::ranges::copy(image.pixel(w - 1 - x, y), out.pixel(x, y).begin());
  return out;
}

nlohmann::json AugmentRecord::to_json() const { return {{"t", t}, {"flip", flip}, {"seed", seed}}; }

AugmentRecord draw_augmentation(std::uint64_t seed, std::size_t width) {
  Rng rng(seed);
  AugmentRecord record;
  record.seed = seed;
  record.t = static_cast<std::size_t>(rng.uniform_index(width));
  record.flip = rng.coin();
  return record;
}

Raster apply_augmentation(const Raster& grid, const AugmentRecord& record) {
  Raster shifted = circshift(grid, static_cast<std::int64_t>(record.t));
  return record.flip ? flip_horizontal(shifted) : shifted;
}

SceneLayout apply_augmentation(const SceneLayout& layout, const AugmentRecord& record) {
  const double shift = kTwoPi * static_cast<double>(record.t) / static_cast<double>(layout.width());
  return transform_azimuth(layout, shift, record.flip);
}

AugmentResult augment(const EquirectImage& image, const SceneLayout& layout, std::uint64_t seed) {
  if (image.width() != layout.width() || image.height() != layout.height())
    throw std::invalid_argument("augment: layout dimensions do not match the image");
  const AugmentRecord record = draw_augmentation(seed, image.width());
  return {EquirectImage(apply_augmentation(image.pixels(), record)),
          apply_augmentation(layout, record), record};
}

std::array<BilinearTap, 4> bilinear_taps(std::size_t width, std::size_t height, double u, double v) {
  const double fx = u - 0.5;
  const double fy = std::clamp(v - 0.5, 0.0, static_cast<double>(height - 1));
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double tx = fx - x0f;
  const double ty = fy - y0f;
  const auto w = static_cast<std::int64_t>(width);
  const auto xi = static_cast<std::int64_t>(x0f);
  const std::size_t x0 = static_cast<std::size_t>(((xi % w) + w) % w);
  const std::size_t x1 = (x0 + 1) % width;
  const auto y0 = static_cast<std::size_t>(y0f);
  const std::size_t y1 = std::min(y0 + 1, height - 1);
  return {{{x0, y0, (1.0 - tx) * (1.0 - ty)},
           {x1, y0, tx * (1.0 - ty)},
           {x0, y1, (1.0 - tx) * ty},
           {x1, y1, tx * ty}}};
}

void sample_equirect(const Raster& image, const UnitVec& dir, std::span<double> out) {
  const double theta = std::atan2(dir.y, dir.x);
  const double phi = std::atan2(std::hypot(dir.x, dir.y), dir.z);
  double u = theta / kTwoPi * static_cast<double>(image.width());
  if (u < 0.0) u += static_cast<double>(image.width());
  const double v = phi / kPi * static_cast<double>(image.height());
  std::ranges::fill(out, 0.0);
  for (const BilinearTap& tap : bilinear_taps(image.width(), image.height(), u, v)) {
    const auto src = image.pixel(tap.x, tap.y);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += tap.weight * src[c];
  }
}

CameraBasis camera_basis(const PerspectiveCamera& cam) {
  const double yaw = wrap_signed(cam.yaw);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(cam.pitch), sp = std::sin(cam.pitch);
  const double cr = std::cos(cam.roll), sr = std::sin(cam.roll);
  const UnitVec level_forward{cy, sy, 0.0};
  const UnitVec right{-sy, cy, 0.0};
  const UnitVec world_up{0.0, 0.0, 1.0};
  CameraBasis b;
  b.forward = scaled_sum(level_forward, cp, world_up, sp);
  const UnitVec up = scaled_sum(level_forward, -sp, world_up, cp);
  b.right = scaled_sum(right, cr, up, sr);
  b.up = scaled_sum(right, -sr, up, cr);
  return b;
}

Raster project_perspective(const Raster& image, const PerspectiveCamera& cam) {
  if (!(cam.hfov > 0.0 && cam.hfov < kPi))
    throw std::invalid_argument("perspective camera fov must lie in (0, pi)");
  if (cam.out_width == 0 || cam.out_height == 0)
    throw std::invalid_argument("perspective output size must be positive");
  require_equirect(image.width(), image.height());

  const CameraBasis basis = camera_basis(cam);
  const double half_w = static_cast<double>(cam.out_width) / 2.0;
  const double half_h = static_cast<double>(cam.out_height) / 2.0;
  const double focal = half_w / std::tan(cam.hfov / 2.0);
  Raster out(cam.out_width, cam.out_height, image.channels());
  parallel_for_rows(cam.out_height, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t j = y0; j < y1; ++j) {
      const double py = (half_h - (static_cast<double>(j) + 0.5)) / focal;
      for (std::size_t i = 0; i < cam.out_width; ++i) {
        const double px = (static_cast<double>(i) + 0.5 - half_w) / focal;
        const UnitVec ray{basis.forward.x + px * basis.right.x + py * basis.up.x,
                          basis.forward.y + px * basis.right.y + py * basis.up.y,
                          basis.forward.z + px * basis.right.z + py * basis.up.z};
        sample_equirect(image, ray, out.pixel(i, j));
      }
    }
  });
  return out;
}

}  // namespace panolayout
