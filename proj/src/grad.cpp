#include "panolayout/grad.hpp"

#include <cmath>
#include <stdexcept>

#include "panolayout/parallel.hpp"

namespace panolayout {

bool in_singular_set(double rho) { return rho < kSingularRho || rho > kPi - kSingularRho; }

EllipseDistanceJet::EllipseDistanceJet(const EllipseParams& ell)
    : distance_(ell),
      sin_beta_(std::sin(ell.beta)),
      cos_beta_(std::cos(ell.beta)),
      cos_gamma_(std::cos(ell.gamma)),
      sin_gamma_(std::sin(ell.gamma)),
      ecc_(ell.ecc) {}

DistanceJet EllipseDistanceJet::operator()(const UnitVec& p) const {
  const CenterFrame& f = distance_.frame();
  const double x = p.dot(f.east);
  const double y = p.dot(f.south);
  const double a = p.dot(f.center);
  const double r2 = x * x + y * y;
  const double r = std::sqrt(r2);
  const double rho = std::atan2(r, a);

  DistanceJet jet;
  jet.value = distance_(p);
  if (in_singular_set(rho)) {
    jet.singular = true;
    return jet;
  }

  const double cos_w = x / r;
  const double sin_w = y / r;
  // c = cos(omega + gamma), s = sin(omega + gamma)
  const double c = cos_w * cos_gamma_ - sin_w * sin_gamma_;
  const double s = sin_w * cos_gamma_ + cos_w * sin_gamma_;
  const double e2 = ecc_ * ecc_;
  const double denom = 1.0 - e2 * c * c;
  const double factor = std::sqrt((1.0 - e2) / denom);
  const double factor_w = -factor * e2 * c * s / denom;
  const double factor_e = -factor * ecc_ * s * s / ((1.0 - e2) * denom);

  // Center motion: de/dalpha = -(sin b * c + cos b * s_vec), ds/dalpha = cos b * e,
  // dc/dalpha = sin b * e; de/dbeta = 0, ds/dbeta = -c, dc/dbeta = s_vec.
  const double rho_alpha = -sin_beta_ * cos_w;
  const double rho_beta = -sin_w;
  const double omega_alpha = cos_beta_ + sin_beta_ * a * y / r2;
  const double omega_beta = -a * x / r2;

  jet.d_alpha = rho_alpha * factor + rho * factor_w * omega_alpha;
  jet.d_beta = rho_beta * factor + rho * factor_w * omega_beta;
  jet.d_gamma = rho * factor_w;
  jet.d_ecc = rho * factor_e;
  return jet;
}

DistanceJet d_distance(SphereCoord p, const EllipseParams& ell) {
  return EllipseDistanceJet(ell)(sphere_to_unitvec(p));
}

OpacityPartials d_opacity(double size, double distance) {
  const double o = opacity(size, distance);
  const double slope = o * (1.0 - o);
  return {slope, -slope};
}

std::vector<ParamGradient> composite_jacobian_vp(const SceneLayout& layout,
                                                 const LayoutMap& cotangent) {
  const std::size_t w = layout.width();
  const std::size_t h = layout.height();
  const std::size_t d = layout.d_f();
  const std::size_t n = layout.n();
  if (cotangent.width() != w || cotangent.height() != h || cotangent.channels() != d)
    throw std::invalid_argument("composite_jacobian_vp: cotangent shape does not match layout");

  std::vector<ParamGradient> total(n);
  for (auto& g : total) g.features.assign(d, 0.0);
  if (n == 0) return total;

  std::vector<EllipseDistanceJet> jets;
  jets.reserve(n);
  for (const auto& obj : layout.objects()) jets.emplace_back(obj.ellipse);
  const PixelDirections dirs(w, h);

  std::vector<std::vector<ParamGradient>> rows(h, total);
  parallel_for_rows(
      h,
      [&](std::size_t y0, std::size_t y1) {
        std::vector<DistanceJet> dist(n);
        std::vector<double> o(n), trans(n), g_dot_f(n);
        for (std::size_t y = y0; y < y1; ++y) {
          auto& acc = rows[y];
          for (std::size_t x = 0; x < w; ++x) {
            const auto g = cotangent.pixel(x, y);
            const UnitVec& dir = dirs.at(x, y);
            for (std::size_t i = 0; i < n; ++i) {
              dist[i] = jets[i](dir);
              o[i] = opacity(layout.objects()[i].size, dist[i].value);
              const auto& f = layout.objects()[i].features;
              double dot = 0.0;
              for (std::size_t c = 0; c < d; ++c) dot += g[c] * f[c];
              g_dot_f[i] = dot;
            }
            // trans[i] = prod_{k>i} (1 - o_k)
            double t = 1.0;
            for (std::size_t i = n; i-- > 0;) {
              trans[i] = t;
              t *= 1.0 - o[i];
            }
            // behind = <g, partial composite of objects 0..i-1>; then
            // dL/do_i = <g, f_i - behind_i> * trans_i.
            double behind = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
              const double dl_do = (g_dot_f[i] - behind) * trans[i];
              behind = behind * (1.0 - o[i]) + o[i] * g_dot_f[i];
              const double slope = o[i] * (1.0 - o[i]);
              const double dl_dd = -dl_do * slope;
              ParamGradient& pg = acc[i];
              pg.size += dl_do * slope;
              if (dist[i].singular) {
                ++pg.singular_pixels;
              } else {
                pg.alpha += dl_dd * dist[i].d_alpha;
                pg.beta += dl_dd * dist[i].d_beta;
                pg.gamma += dl_dd * dist[i].d_gamma;
                pg.ecc += dl_dd * dist[i].d_ecc;
              }
              const double weight = o[i] * trans[i];
              for (std::size_t c = 0; c < d; ++c) pg.features[c] += g[c] * weight;
            }
          }
        }
      },
      std::max<std::size_t>(1, 4096 / w));

  for (const auto& row : rows) {
    for (std::size_t i = 0; i < n; ++i) {
      ParamGradient& dst = total[i];
      const ParamGradient& src = row[i];
      dst.alpha += src.alpha;
      dst.beta += src.beta;
      dst.size += src.size;
      dst.gamma += src.gamma;
      dst.ecc += src.ecc;
      dst.singular_pixels += src.singular_pixels;
      for (std::size_t c = 0; c < d; ++c) dst.features[c] += src.features[c];
    }
  }
  return total;
}

const char* param_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::alpha: return "alpha";
    case ParamKind::beta: return "beta";
    case ParamKind::size: return "s";
    case ParamKind::gamma: return "gamma";
    case ParamKind::ecc: return "e";
    case ParamKind::feature: return "f";
  }
  return "?";
}

double read_param(const SceneLayout& layout, const ParamId& id) {
  const ObjectVector& obj = layout.object(id.object);
  switch (id.kind) {
    case ParamKind::alpha: return obj.ellipse.alpha;
    case ParamKind::beta: return obj.ellipse.beta;
    case ParamKind::size: return obj.size;
    case ParamKind::gamma: return obj.ellipse.gamma;
    case ParamKind::ecc: return obj.ellipse.ecc;
    case ParamKind::feature: return obj.features.at(id.channel);
  }
  return 0.0;
}

SceneLayout perturb(const SceneLayout& layout, const ParamId& id, double delta) {
  std::vector<ObjectVector> objects = layout.objects();
  ObjectVector& obj = objects.at(id.object);
  switch (id.kind) {
    case ParamKind::alpha: obj.ellipse.alpha += delta; break;
    case ParamKind::beta: obj.ellipse.beta += delta; break;
    case ParamKind::size: obj.size += delta; break;
    case ParamKind::gamma: obj.ellipse.gamma += delta; break;
    case ParamKind::ecc: obj.ellipse.ecc += delta; break;
    case ParamKind::feature: obj.features.at(id.channel) += delta; break;
  }
  return SceneLayout(layout.width(), layout.height(), layout.d_u(), layout.d_y(),
                     std::move(objects));
}

double gradient_entry(const std::vector<ParamGradient>& grads, const ParamId& id) {
  const ParamGradient& g = grads.at(id.object);
  switch (id.kind) {
    case ParamKind::alpha: return g.alpha;
    case ParamKind::beta: return g.beta;
    case ParamKind::size: return g.size;
    case ParamKind::gamma: return g.gamma;
    case ParamKind::ecc: return g.ecc;
    case ParamKind::feature: return g.features.at(id.channel);
  }
  return 0.0;
}

double composite_inner_product(const SceneLayout& layout, const LayoutMap& cotangent) {
  const LayoutMap map = composite(layout);
  if (!map.same_shape(cotangent))
    throw std::invalid_argument("composite_inner_product: cotangent shape mismatch");
  double sum = 0.0;
  const auto a = map.values();
  const auto b = cotangent.values();
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace panolayout
