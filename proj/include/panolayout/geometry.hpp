#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "panolayout/raster.hpp"

namespace panolayout {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tangent components below this magnitude are treated as the coincident or
/// antipodal case, where the bearing is undefined and taken as 0.
inline constexpr double kBearingEps = 1e-14;

/// Azimuth theta in (0, 2pi], polar angle phi in [0, pi] (0 = up).
struct SphereCoord {
  double theta = 0.0;
  double phi = 0.0;
};

struct UnitVec {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double dot(const UnitVec& o) const { return x * o.x + y * o.y + z * o.z; }
};

/// Center (alpha, beta), in-plane rotation gamma and eccentricity in [0, 1).
struct EllipseParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double ecc = 0.0;

  bool operator==(const EllipseParams&) const = default;
};

/// Angular radius rho in [0, pi] and bearing omega in (-pi, pi] about a center.
struct PolarCoord {
  double rho = 0.0;
  double omega = 0.0;
};

/// Throws std::invalid_argument unless W = 2H and H > 0.
void require_equirect(std::size_t width, std::size_t height);

/// Throws std::invalid_argument unless 0 <= ecc < 1.
void require_valid_ecc(double ecc);

/// Wraps an azimuth into (0, 2pi].
double wrap_azimuth(double theta);

/// Wraps theta and folds phi back onto [0, pi]; crossing a pole moves the
/// point to the opposite meridian (theta += pi).
SphereCoord normalize(SphereCoord c);

/// Pixel-center mapping: theta = 2pi (px + 0.5) / W, phi = pi (py + 0.5) / H.
SphereCoord pixel_to_sphere(std::size_t px, std::size_t py, std::size_t width,
                            std::size_t height);

UnitVec sphere_to_unitvec(SphereCoord c);
SphereCoord unitvec_to_sphere(const UnitVec& v);

/// Orthonormal frame at a center direction: `east` = normalized d/dtheta,
/// `south` = d/dphi. Both stay well defined at the poles (limit directions).
struct CenterFrame {
  CenterFrame(double alpha, double beta);

  UnitVec center;
  UnitVec east;
  UnitVec south;
};

/// Rotates the sphere so `alpha, beta` becomes the reference axis and reads
/// off polar coordinates of `p` around it.
PolarCoord rotate_to_center(SphereCoord p, double alpha, double beta);

/// d = rho * sqrt((1 - e^2) / (1 - e^2 cos^2(omega + gamma))).
double ellipse_distance(SphereCoord p, const EllipseParams& ell);

/// Precomputed per-ellipse state for evaluating the distance at many points.
class EllipseDistance {
 public:
  explicit EllipseDistance(const EllipseParams& ell);

  double operator()(const UnitVec& p) const;
  const CenterFrame& frame() const { return frame_; }

 private:
  CenterFrame frame_;
  double cos_gamma_;
  double sin_gamma_;
  double ecc_sq_;
  double one_minus_ecc_sq_;
};

/// Unit vectors of every pixel center of a W x H equirect grid, row-major.
class PixelDirections {
 public:
  PixelDirections(std::size_t width, std::size_t height);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  const UnitVec& at(std::size_t x, std::size_t y) const { return dirs_[y * width_ + x]; }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<UnitVec> dirs_;
};

/// Grid of ellipse_distance over all pixel centers.
FieldGrid distance_field(const EllipseParams& ell, std::size_t width, std::size_t height);

}  // namespace panolayout
