#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "panolayout/geometry.hpp"
#include "panolayout/raster.hpp"

namespace panolayout {

/// Size assigned by the remove manipulation. sigmoid(-30 - d) < 1e-13 for
/// every d >= 0, so a removed object is invisible at render precision.
inline constexpr double kRemovedSize = -30.0;

/// One latent object: ellipse geometry, size s and feature vector f.
struct ObjectVector {
  EllipseParams ellipse;
  double size = 0.0;
  std::vector<double> features;

  bool operator==(const ObjectVector&) const = default;
};

/// Immutable ordered set of object vectors plus render dimensions.
///
/// List order is compositing order: objects()[0] is the back, the last
/// entry is the front. Construction validates W = 2H, d_u + d_y = d_f for
/// every feature vector and e in [0, 1), and normalizes each center onto the
/// sphere (alpha wrapped into (0, 2pi], beta folded into [0, pi]).
class SceneLayout {
 public:
  SceneLayout(std::size_t width, std::size_t height, std::size_t d_u, std::size_t d_y,
              std::vector<ObjectVector> objects);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t n() const { return objects_.size(); }
  std::size_t d_f() const { return d_u_ + d_y_; }
  std::size_t d_u() const { return d_u_; }
  std::size_t d_y() const { return d_y_; }
  const std::vector<ObjectVector>& objects() const { return objects_; }
  const ObjectVector& object(std::size_t index) const { return objects_.at(index); }

  bool operator==(const SceneLayout&) const = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::size_t d_u_;
  std::size_t d_y_;
  std::vector<ObjectVector> objects_;
};

/// Numerically stable sigmoid(s - d).
double opacity(double size, double distance);

/// Alpha-composited layout map L = sum_i f_i o_i prod_{k>i} (1 - o_k).
LayoutMap composite(const SceneLayout& layout);

/// Per-pixel total weight sum_i o_i prod_{k>i} (1 - o_k).
FieldGrid composite_weight(const SceneLayout& layout);

/// Opacity field of one object (0-based index), ignoring occlusion.
FieldGrid opacity_field(const SceneLayout& layout, std::size_t index);

/// Channel slices [0, d_u) and [d_u, d_u + d_y).
std::pair<LayoutMap, LayoutMap> split(const LayoutMap& map, std::size_t d_u, std::size_t d_y);

/// Inverse of split: channels of `a` followed by channels of `b`.
LayoutMap concat_channels(const LayoutMap& a, const LayoutMap& b);

// Manipulations address objects by 1-based index.
struct RemoveObject {
  std::size_t index;
};
struct TranslateObject {
  std::size_t index;
  double d_alpha;
  double d_beta;
};
struct ResizeObject {
  std::size_t index;
  double d_size;
};
struct RotateObject {
  std::size_t index;
  double d_gamma;
};
struct SetEccentricity {
  std::size_t index;
  double ecc;
};
struct SetFeatures {
  std::size_t index;
  std::vector<double> features;
};

using Manipulation = std::variant<RemoveObject, TranslateObject, ResizeObject, RotateObject,
                                  SetEccentricity, SetFeatures>;

/// Returns a new layout with one object edited; the input is untouched.
/// Throws std::out_of_range for a bad index and std::invalid_argument for an
/// eccentricity outside [0, 1) or a feature vector of the wrong length.
SceneLayout manipulate(const SceneLayout& layout, const Manipulation& op);

/// Layout with every alpha shifted by d_alpha and, when `flip` is set,
/// mirrored afterwards (alpha -> 2pi - alpha, gamma -> -gamma).
SceneLayout transform_azimuth(const SceneLayout& layout, double d_alpha, bool flip);

/// Default layout for new scenes: alpha uniform, beta in [pi/4, 3pi/4],
/// s in [0.2, 0.6], e in [0, 0.8), gamma in [0, pi), f standard normal.
/// Draw order per object: alpha, beta, s, gamma, e, then f.
SceneLayout random_layout(std::uint64_t seed, std::size_t n, std::size_t d_f,
                          std::size_t width, std::size_t height);

}  // namespace panolayout
