#pragma once

#include <cstddef>
#include <vector>

#include "panolayout/geometry.hpp"
#include "panolayout/layout.hpp"

namespace panolayout {

/// Pixels closer than this to an ellipse center or its antipode have an
/// undefined bearing; their distance partials are defined as zero.
inline constexpr double kSingularRho = 1e-6;

bool in_singular_set(double rho);

/// Distance value and its partials with respect to the ellipse parameters.
struct DistanceJet {
  double value = 0.0;
  double d_alpha = 0.0;
  double d_beta = 0.0;
  double d_gamma = 0.0;
  double d_ecc = 0.0;
  bool singular = false;
};

/// Precomputed per-ellipse state for differentiating the distance at many
/// points. Uses the same frame and formula as EllipseDistance.
class EllipseDistanceJet {
 public:
  explicit EllipseDistanceJet(const EllipseParams& ell);
  DistanceJet operator()(const UnitVec& p) const;

 private:
  EllipseDistance distance_;
  double sin_beta_;
  double cos_beta_;
  double cos_gamma_;
  double sin_gamma_;
  double ecc_;
};

DistanceJet d_distance(SphereCoord p, const EllipseParams& ell);

struct OpacityPartials {
  double d_size = 0.0;
  double d_distance = 0.0;
};

/// do/ds = o(1 - o), do/dd = -o(1 - o).
OpacityPartials d_opacity(double size, double distance);

/// Accumulated gradient of <cotangent, L> with respect to one object.
struct ParamGradient {
  double alpha = 0.0;
  double beta = 0.0;
  double size = 0.0;
  double gamma = 0.0;
  double ecc = 0.0;
  std::vector<double> features;
  /// Pixels whose distance partials were zeroed by the singular convention.
  std::size_t singular_pixels = 0;
};

/// Reverse-mode product of the compositing Jacobian with `cotangent`, one
/// entry per object in layout order. Rows are reduced in fixed order, so the
/// result does not depend on the thread count.
std::vector<ParamGradient> composite_jacobian_vp(const SceneLayout& layout,
                                                 const LayoutMap& cotangent);

enum class ParamKind { alpha, beta, size, gamma, ecc, feature };

/// Addresses one scalar parameter: 0-based object, kind, feature channel.
struct ParamId {
  std::size_t object = 0;
  ParamKind kind = ParamKind::alpha;
  std::size_t channel = 0;
};

const char* param_name(ParamKind kind);
double read_param(const SceneLayout& layout, const ParamId& id);
SceneLayout perturb(const SceneLayout& layout, const ParamId& id, double delta);
double gradient_entry(const std::vector<ParamGradient>& grads, const ParamId& id);

/// <cotangent, composite(layout)>; the scalar the VJP differentiates.
double composite_inner_product(const SceneLayout& layout, const LayoutMap& cotangent);

}  // namespace panolayout
