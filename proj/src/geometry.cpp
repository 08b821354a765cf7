#include "panolayout/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "panolayout/parallel.hpp"

namespace panolayout {

void require_equirect(std::size_t width, std::size_t height) {
  if (height == 0 || width != 2 * height)
    throw std::invalid_argument("equirect grid must satisfy W = 2H (got " +
                                std::to_string(width) + "x" + std::to_string(height) + ")");
}

void require_valid_ecc(double ecc) {
  if (!(ecc >= 0.0 && ecc < 1.0))
    throw std::invalid_argument("eccentricity must lie in [0, 1), got " + std::to_string(ecc));
}

double wrap_azimuth(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t <= 0.0) t += kTwoPi;
  return t;
}

SphereCoord normalize(SphereCoord c) {
  double phi = std::fmod(c.phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  double theta = c.theta;
  if (phi > kPi) {
    phi = kTwoPi - phi;
    theta += kPi;
  }
  return {wrap_azimuth(theta), phi};
}

SphereCoord pixel_to_sphere(std::size_t px, std::size_t py, std::size_t width,
                            std::size_t height) {
  require_equirect(width, height);
  if (px >= width || py >= height) throw std::out_of_range("pixel outside grid");
  return {kTwoPi * (static_cast<double>(px) + 0.5) / static_cast<double>(width),
          kPi * (static_cast<double>(py) + 0.5) / static_cast<double>(height)};
}

UnitVec sphere_to_unitvec(SphereCoord c) {
  const double sp = std::sin(c.phi);
  return {sp * std::cos(c.theta), sp * std::sin(c.theta), std::cos(c.phi)};
}

SphereCoord unitvec_to_sphere(const UnitVec& v) {
  const double phi = std::atan2(std::hypot(v.x, v.y), v.z);
  return {wrap_azimuth(std::atan2(v.y, v.x)), phi};
}

CenterFrame::CenterFrame(double alpha, double beta) {
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  center = {sb * ca, sb * sa, cb};
  east = {-sa, ca, 0.0};
  south = {cb * ca, cb * sa, -sb};
}

PolarCoord rotate_to_center(SphereCoord p, double alpha, double beta) {
  const CenterFrame frame(alpha, beta);
  const UnitVec u = sphere_to_unitvec(p);
  // Components of u in the (east, south, center) basis; the tangent part
  // t = u - (u.c) c has exactly the east/south components.
  const double x = u.dot(frame.east);
  const double y = u.dot(frame.south);
  const double a = u.dot(frame.center);
  const double r = std::sqrt(x * x + y * y);
  PolarCoord out;
  out.rho = std::atan2(r, a);
  if (r > kBearingEps) {
    out.omega = std::atan2(y, x);
    if (out.omega <= -kPi) out.omega = kPi;
  }
  return out;
}

double ellipse_distance(SphereCoord p, const EllipseParams& ell) {
  return EllipseDistance(ell)(sphere_to_unitvec(p));
}

EllipseDistance::EllipseDistance(const EllipseParams& ell)
    : frame_(ell.alpha, ell.beta),
      cos_gamma_(std::cos(ell.gamma)),
      sin_gamma_(std::sin(ell.gamma)),
      ecc_sq_(ell.ecc * ell.ecc),
      one_minus_ecc_sq_(1.0 - ell.ecc * ell.ecc) {}

double EllipseDistance::operator()(const UnitVec& p) const {
  const double x = p.dot(frame_.east);
  const double y = p.dot(frame_.south);
  const double a = p.dot(frame_.center);
  const double r = std::sqrt(x * x + y * y);
  const double rho = std::atan2(r, a);
  if (ecc_sq_ == 0.0) return rho;
  // cos(omega + gamma) with cos(omega) = x / r, sin(omega) = y / r.
  const double c = r > kBearingEps ? (x * cos_gamma_ - y * sin_gamma_) / r : cos_gamma_;
  // Clamped so rounding can never push d past rho.
  const double c_sq = std::min(c * c, 1.0);
  return rho * std::sqrt(one_minus_ecc_sq_ / (1.0 - ecc_sq_ * c_sq));
}

PixelDirections::PixelDirections(std::size_t width, std::size_t height)
    : width_(width), height_(height), dirs_(width * height) {
  require_equirect(width, height);
  std::vector<double> cos_t(width), sin_t(width);
  for (std::size_t x = 0; x < width; ++x) {
    const double theta = kTwoPi * (static_cast<double>(x) + 0.5) / static_cast<double>(width);
    cos_t[x] = std::cos(theta);
    sin_t[x] = std::sin(theta);
  }
  for (std::size_t y = 0; y < height; ++y) {
    const double phi = kPi * (static_cast<double>(y) + 0.5) / static_cast<double>(height);
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    for (std::size_t x = 0; x < width; ++x) dirs_[y * width + x] = {sp * cos_t[x], sp * sin_t[x], cp};
  }
}

FieldGrid distance_field(const EllipseParams& ell, std::size_t width, std::size_t height) {
  const PixelDirections dirs(width, height);
  const EllipseDistance dist(ell);
  FieldGrid out(width, height, 1);
  parallel_for_rows(height, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y)
      for (std::size_t x = 0; x < width; ++x) out.at(x, y) = dist(dirs.at(x, y));
  }, std::max<std::size_t>(1, 4096 / width));
  return out;
}

}  // namespace panolayout
