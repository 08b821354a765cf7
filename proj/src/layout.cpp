#include "panolayout/layout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "panolayout/parallel.hpp"
#include "panolayout/random.hpp"

namespace panolayout {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite ") + what);
}

EllipseParams normalized_center(EllipseParams ell) {
  const SphereCoord c = normalize({ell.alpha, ell.beta});
  ell.alpha = c.theta;
  ell.beta = c.phi;
  return ell;
}

std::vector<EllipseDistance> distance_evaluators(const SceneLayout& layout) {
  std::vector<EllipseDistance> out;
  out.reserve(layout.n());
  for (const auto& obj : layout.objects()) out.emplace_back(obj.ellipse);
  return out;
}

std::size_t to_zero_based(const SceneLayout& layout, std::size_t index) {
  if (index < 1 || index > layout.n())
    throw std::out_of_range("object index " + std::to_string(index) + " outside [1, " +
                            std::to_string(layout.n()) + "]");
  return index - 1;
}

// Fills `weights` with o_i prod_{k>i}(1 - o_k) for one pixel.
void pixel_weights(const SceneLayout& layout, const std::vector<EllipseDistance>& dists,
                   const UnitVec& dir, std::vector<double>& weights) {
  double transmittance = 1.0;
  for (std::size_t i = layout.n(); i-- > 0;) {
    const double o = opacity(layout.objects()[i].size, dists[i](dir));
    weights[i] = o * transmittance;
    transmittance *= 1.0 - o;
  }
}

}  // namespace

SceneLayout::SceneLayout(std::size_t width, std::size_t height, std::size_t d_u,
                         std::size_t d_y, std::vector<ObjectVector> objects)
    : width_(width), height_(height), d_u_(d_u), d_y_(d_y), objects_(std::move(objects)) {
  require_equirect(width_, height_);
  for (auto& obj : objects_) {
    if (obj.features.size() != d_f())
      throw std::invalid_argument("feature vector length " + std::to_string(obj.features.size()) +
                                  " does not match d_f = " + std::to_string(d_f()));
    require_valid_ecc(obj.ellipse.ecc);
    require_finite(obj.ellipse.alpha, "alpha");
    require_finite(obj.ellipse.beta, "beta");
    require_finite(obj.ellipse.gamma, "gamma");
    require_finite(obj.size, "size");
    for (double f : obj.features) require_finite(f, "feature");
    obj.ellipse = normalized_center(obj.ellipse);
  }
}

double opacity(double size, double distance) {
  const double z = size - distance;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

LayoutMap composite(const SceneLayout& layout) {
  const std::size_t w = layout.width();
  const std::size_t h = layout.height();
  const std::size_t d = layout.d_f();
  LayoutMap out(w, h, d);
  if (layout.n() == 0 || d == 0) return out;

  const PixelDirections dirs(w, h);
  const auto dists = distance_evaluators(layout);
  parallel_for_rows(h, [&](std::size_t y0, std::size_t y1) {
    std::vector<double> weights(layout.n());
    for (std::size_t y = y0; y < y1; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        pixel_weights(layout, dists, dirs.at(x, y), weights);
        auto px = out.pixel(x, y);
        for (std::size_t i = 0; i < layout.n(); ++i) {
          const double wi = weights[i];
          const double* f = layout.objects()[i].features.data();
          for (std::size_t c = 0; c < d; ++c) px[c] += wi * f[c];
        }
      }
    }
  }, std::max<std::size_t>(1, 4096 / w));
  return out;
}

FieldGrid composite_weight(const SceneLayout& layout) {
  const std::size_t w = layout.width();
  const std::size_t h = layout.height();
  FieldGrid out(w, h, 1);
  if (layout.n() == 0) return out;

  const PixelDirections dirs(w, h);
  const auto dists = distance_evaluators(layout);
  parallel_for_rows(h, [&](std::size_t y0, std::size_t y1) {
    std::vector<double> weights(layout.n());
    for (std::size_t y = y0; y < y1; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        pixel_weights(layout, dists, dirs.at(x, y), weights);
        double total = 0.0;
        for (double wi : weights) total += wi;
        out.at(x, y) = total;
      }
    }
  }, std::max<std::size_t>(1, 4096 / w));
  return out;
}

FieldGrid opacity_field(const SceneLayout& layout, std::size_t index) {
  const ObjectVector& obj = layout.object(index);
  FieldGrid field = distance_field(obj.ellipse, layout.width(), layout.height());
  for (double& v : field.values()) v = opacity(obj.size, v);
  return field;
}

std::pair<LayoutMap, LayoutMap> split(const LayoutMap& map, std::size_t d_u, std::size_t d_y) {
  if (d_u + d_y != map.channels())
    throw std::invalid_argument("split: d_u + d_y = " + std::to_string(d_u + d_y) +
                                " but map has " + std::to_string(map.channels()) + " channels");
  LayoutMap structure(map.width(), map.height(), d_u);
  LayoutMap style(map.width(), map.height(), d_y);
  for (std::size_t y = 0; y < map.height(); ++y) {
    for (std::size_t x = 0; x < map.width(); ++x) {
      const auto src = map.pixel(x, y);
      auto su = structure.pixel(x, y);
      auto sy = style.pixel(x, y);
      for (std::size_t c = 0; c < d_u; ++c) su[c] = src[c];
      for (std::size_t c = 0; c < d_y; ++c) sy[c] = src[d_u + c];
    }
  }
  return {std::move(structure), std::move(style)};
}

LayoutMap concat_channels(const LayoutMap& a, const LayoutMap& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument("concat_channels: spatial size mismatch");
  const std::size_t ca = a.channels();
  const std::size_t cb = b.channels();
  LayoutMap out(a.width(), a.height(), ca + cb);
  for (std::size_t y = 0; y < a.height(); ++y) {
    for (std::size_t x = 0; x < a.width(); ++x) {
      auto dst = out.pixel(x, y);
      const auto pa = a.pixel(x, y);
      const auto pb = b.pixel(x, y);
      for (std::size_t c = 0; c < ca; ++c) dst[c] = pa[c];
      for (std::size_t c = 0; c < cb; ++c) dst[ca + c] = pb[c];
    }
  }
  return out;
}

SceneLayout manipulate(const SceneLayout& layout, const Manipulation& op) {
  std::vector<ObjectVector> objects = layout.objects();
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        ObjectVector& obj = objects[to_zero_based(layout, m.index)];
        if constexpr (std::is_same_v<T, RemoveObject>) {
          obj.size = kRemovedSize;
        } else if constexpr (std::is_same_v<T, TranslateObject>) {
          // Normalization in the constructor reflects beta at the poles.
          obj.ellipse.alpha += m.d_alpha;
          obj.ellipse.beta += m.d_beta;
        } else if constexpr (std::is_same_v<T, ResizeObject>) {
          obj.size += m.d_size;
        } else if constexpr (std::is_same_v<T, RotateObject>) {
          obj.ellipse.gamma += m.d_gamma;
        } else if constexpr (std::is_same_v<T, SetEccentricity>) {
          require_valid_ecc(m.ecc);
          obj.ellipse.ecc = m.ecc;
        } else if constexpr (std::is_same_v<T, SetFeatures>) {
          if (m.features.size() != layout.d_f())
            throw std::invalid_argument("feature vector must have length d_f");
          obj.features = m.features;
        }
      },
      op);
  return SceneLayout(layout.width(), layout.height(), layout.d_u(), layout.d_y(),
                     std::move(objects));
}

SceneLayout transform_azimuth(const SceneLayout& layout, double d_alpha, bool flip) {
  std::vector<ObjectVector> objects = layout.objects();
  for (auto& obj : objects) {
    double alpha = wrap_azimuth(obj.ellipse.alpha + d_alpha);
    if (flip) {
      alpha = kTwoPi - alpha;
      obj.ellipse.gamma = -obj.ellipse.gamma;
    }
    obj.ellipse.alpha = alpha;
  }
  return SceneLayout(layout.width(), layout.height(), layout.d_u(), layout.d_y(),
                     std::move(objects));
}

SceneLayout random_layout(std::uint64_t seed, std::size_t n, std::size_t d_f, std::size_t width,
                          std::size_t height) {
  Rng rng(seed);
  std::vector<ObjectVector> objects(n);
  for (auto& obj : objects) {
    obj.ellipse.alpha = rng.uniform(0.0, kTwoPi);
    obj.ellipse.beta = rng.uniform(kPi / 4.0, 3.0 * kPi / 4.0);
    obj.size = rng.uniform(0.2, 0.6);
    obj.ellipse.gamma = rng.uniform(0.0, kPi);
    obj.ellipse.ecc = rng.uniform(0.0, 0.8);
    obj.features.resize(d_f);
    for (double& f : obj.features) f = rng.normal();
  }
  return SceneLayout(width, height, d_f / 2, d_f - d_f / 2, std::move(objects));
}

}  // namespace panolayout
