#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

namespace panolayout {

struct GradcheckOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 7;
  std::size_t width = 16;
  std::size_t height = 8;
  /// Central-difference step on the composite inner product.
  double step = 1e-5;
  double rel_tol = 1e-4;
  /// Gradients smaller than `small_grad` may pass on absolute error instead.
  double small_grad = 1e-3;
  double abs_tol = 1e-7;
  double required_pass_fraction = 0.99;
};

struct ParamCheckStats {
  std::size_t checks = 0;
  std::size_t failures = 0;
  /// Largest relative error among checks with |gradient| >= small_grad.
  double max_rel_error = 0.0;
  /// Largest absolute error among checks with |gradient| < small_grad.
  double max_abs_error_small = 0.0;
};

struct GradcheckReport {
  GradcheckOptions options;
  std::map<std::string, ParamCheckStats> per_param;
  std::size_t checks = 0;
  std::size_t failures = 0;
  /// Draws rejected because an ellipse had a grid pixel in its singular set.
  std::size_t singular_exclusions = 0;
  double pass_fraction = 0.0;
  bool passed = false;

  nlohmann::json to_json() const;
};

/// Each sample draws a random layout (1-4 objects, d_f 1-4) and cotangent,
/// picks one scalar parameter uniformly, and compares the reverse-mode
/// gradient against central differences of <cotangent, composite>.
GradcheckReport run_gradcheck(const GradcheckOptions& options);

/// Pass rule shared with the unit tests.
bool gradient_matches(double analytic, double numeric, double rel_tol, double small_grad,
                      double abs_tol);

}  // namespace panolayout
