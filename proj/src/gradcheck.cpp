#include "panolayout/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "panolayout/grad.hpp"
#include "panolayout/layout.hpp"
#include "panolayout/random.hpp"

namespace panolayout {

namespace {

constexpr ParamKind kKinds[] = {ParamKind::alpha, ParamKind::beta, ParamKind::size,
                                ParamKind::gamma, ParamKind::ecc, ParamKind::feature};

SceneLayout draw_layout(Rng& rng, std::size_t width, std::size_t height) {
  const std::size_t n = 1 + rng.uniform_index(4);
  const std::size_t d_f = 1 + rng.uniform_index(4);
  std::vector<ObjectVector> objects(n);
  for (auto& obj : objects) {
    obj.ellipse.alpha = rng.uniform(0.0, kTwoPi);
    obj.ellipse.beta = rng.uniform(0.0, kPi);
    obj.size = rng.uniform(0.2, 1.2);
    obj.ellipse.gamma = rng.uniform(0.0, kPi);
    // Keep e at least one step away from 0 so central differences stay valid.
    obj.ellipse.ecc = rng.uniform(0.02, 0.9);
    obj.features.resize(d_f);
    for (double& f : obj.features) f = rng.normal();
  }
  return SceneLayout(width, height, d_f / 2, d_f - d_f / 2, std::move(objects));
}

bool touches_singular_set(const SceneLayout& layout) {
  const PixelDirections dirs(layout.width(), layout.height());
  for (const auto& obj : layout.objects()) {
    const CenterFrame frame(obj.ellipse.alpha, obj.ellipse.beta);
    for (std::size_t y = 0; y < layout.height(); ++y) {
      for (std::size_t x = 0; x < layout.width(); ++x) {
        const UnitVec& p = dirs.at(x, y);
        const double tx = p.dot(frame.east);
        const double ty = p.dot(frame.south);
        const double rho = std::atan2(std::sqrt(tx * tx + ty * ty), p.dot(frame.center));
        if (in_singular_set(rho)) return true;
      }
    }
  }
  return false;
}

}  // namespace

bool gradient_matches(double analytic, double numeric, double rel_tol, double small_grad,
                      double abs_tol) {
  const double err = std::abs(analytic - numeric);
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  if (scale < small_grad && err <= abs_tol) return true;
  return err <= rel_tol * scale;
}

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
  GradcheckReport report;
  report.options = options;
  for (ParamKind k : kKinds) report.per_param[param_name(k)] = {};

  Rng rng(options.seed);
  while (report.checks < options.samples) {
    const SceneLayout layout = draw_layout(rng, options.width, options.height);
    LayoutMap cotangent(layout.width(), layout.height(), layout.d_f());
    for (double& v : cotangent.values()) v = rng.normal();
    if (touches_singular_set(layout)) {
      ++report.singular_exclusions;
      continue;
    }

    const std::size_t per_object = 5 + layout.d_f();
    const std::size_t pick = rng.uniform_index(layout.n() * per_object);
    ParamId id;
    id.object = pick / per_object;
    const std::size_t slot = pick % per_object;
    id.kind = slot < 5 ? kKinds[slot] : ParamKind::feature;
    id.channel = slot < 5 ? 0 : slot - 5;

    const auto grads = composite_jacobian_vp(layout, cotangent);
    const double analytic = gradient_entry(grads, id);
    const double plus = composite_inner_product(perturb(layout, id, options.step), cotangent);
    const double minus = composite_inner_product(perturb(layout, id, -options.step), cotangent);
    const double numeric = (plus - minus) / (2.0 * options.step);

    ParamCheckStats& stats = report.per_param[param_name(id.kind)];
    ++stats.checks;
    ++report.checks;
    const double err = std::abs(analytic - numeric);
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    if (scale >= options.small_grad)
      stats.max_rel_error = std::max(stats.max_rel_error, err / scale);
    else
      stats.max_abs_error_small = std::max(stats.max_abs_error_small, err);
    if (!gradient_matches(analytic, numeric, options.rel_tol, options.small_grad,
                          options.abs_tol)) {
      ++stats.failures;
      ++report.failures;
    }
  }

  report.pass_fraction =
      report.checks == 0
          ? 1.0
          : static_cast<double>(report.checks - report.failures) / static_cast<double>(report.checks);
  report.passed = report.pass_fraction >= options.required_pass_fraction;
  return report;
}

nlohmann::json GradcheckReport::to_json() const {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [name, s] : per_param) {
    params[name] = {{"checks", s.checks},
                    {"failures", s.failures},
                    {"max_rel_error", s.max_rel_error},
                    {"max_abs_error_small", s.max_abs_error_small}};
  }
  return {{"seed", options.seed},
          {"samples", options.samples},
          {"width", options.width},
          {"height", options.height},
          {"step", options.step},
          {"rel_tol", options.rel_tol},
          {"small_grad", options.small_grad},
          {"abs_tol", options.abs_tol},
          {"required_pass_fraction", options.required_pass_fraction},
          {"checks", checks},
          {"failures", failures},
          {"singular_exclusions", singular_exclusions},
          {"pass_fraction", pass_fraction},
          {"passed", passed},
          {"per_param", std::move(params)}};
}

}  // namespace panolayout
