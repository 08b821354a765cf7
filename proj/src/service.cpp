#include "panolayout/service.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "panolayout/layout_io.hpp"
#include "panolayout/png_io.hpp"
#include "panolayout/random.hpp"

namespace panolayout::service {

namespace {

const std::string kPng = "image/png";
const std::string kPlt1 = "application/x-plt1";

std::string param(const ViewRequest& req, const std::string& key, const std::string& fallback) {
  auto it = req.params.find(key);
  return it == req.params.end() ? fallback : it->second;
}

double param_real(const ViewRequest& req, const std::string& key, double fallback) {
  auto it = req.params.find(key);
  if (it == req.params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used == it->second.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ServiceError(400, "bad value for '" + key + "'");
}

std::size_t param_count(const ViewRequest& req, const std::string& key, std::size_t fallback) {
  const double v = param_real(req, key, static_cast<double>(fallback));
  if (v < 1.0 || v > 4096.0 || v != std::floor(v))
    throw ServiceError(400, "'" + key + "' must be an integer in [1, 4096]");
  return static_cast<std::size_t>(v);
}

std::size_t object_index(const std::string& mode, const SceneLayout& layout) {
  const std::string digits = mode.substr(mode.find(':') + 1);
  std::size_t index = 0;
  try {
    std::size_t used = 0;
    index = std::stoul(digits, &used);
    if (used != digits.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ServiceError(400, "bad object index in mode '" + mode + "'");
  }
  if (index < 1 || index > layout.n())
    throw ServiceError(400, "object index " + std::to_string(index) + " out of range");
  return index - 1;
}

RenderResult png_result(const Raster& image, std::uint64_t revision) {
  return {kPng, encode_png(image), revision};
}

RenderResult plt1_result(const Raster& grid, std::uint64_t revision) {
  return {kPlt1, encode_plt1(grid), revision};
}

Raster gray_to_rgb(const FieldGrid& field, double scale) {
  Raster out(field.width(), field.height(), 3);
  for (std::size_t y = 0; y < field.height(); ++y)
    for (std::size_t x = 0; x < field.width(); ++x) {
      const double v = field.at(x, y) * scale;
      for (std::size_t c = 0; c < 3; ++c) out.at(x, y, c) = v;
    }
  return out;
}

Raster overlay(const EquirectImage& background, const SceneLayout& layout) {
  const FieldGrid weight = composite_weight(layout);
  Raster out = background.pixels();
  for (std::size_t y = 0; y < out.height(); ++y)
    for (std::size_t x = 0; x < out.width(); ++x)
      for (std::size_t c = 0; c < 3; ++c)
        out.at(x, y, c) = (1.0 - kOverlayAlpha) * out.at(x, y, c) + kOverlayAlpha * weight.at(x, y);
  return out;
}

Raster display_source(const EquirectImage& background, const SceneLayout& layout,
                      const std::string& source) {
  if (source == "background") return background.pixels();
  if (source == "overlay") return overlay(background, layout);
  if (source == "composite-rgb") return display_rgb(composite(layout));
  if (source == "weight") return gray_to_rgb(composite_weight(layout), 1.0);
  throw ServiceError(400, "unknown perspective source '" + source + "'");
}

}  // namespace

Raster display_rgb(const LayoutMap& map) {
  const std::size_t d = map.channels();
  std::vector<double> proj(3 * d);
  Rng rng(kDisplayProjectionSeed);
  const double scale = d == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(d));
  for (double& p : proj) p = rng.normal() * scale;
  Raster out(map.width(), map.height(), 3);
  for (std::size_t y = 0; y < map.height(); ++y)
    for (std::size_t x = 0; x < map.width(); ++x) {
      const auto px = map.pixel(x, y);
      for (std::size_t c = 0; c < 3; ++c) {
        double v = 0.0;
        for (std::size_t k = 0; k < d; ++k) v += proj[c * d + k] * px[k];
        out.at(x, y, c) = 0.5 + 0.5 * std::tanh(v);
      }
    }
  return out;
}

RenderResult render_view(const EquirectImage& background, const LayoutSnapshot& snapshot,
                         const ViewRequest& request) {
  const SceneLayout& layout = *snapshot.layout;
  const std::uint64_t rev = snapshot.revision;
  const std::string& mode = request.mode;
  const std::string format = param(request, "format", "");
  if (!format.empty() && format != "png" && format != "plt1")
    throw ServiceError(400, "unknown format '" + format + "'");
  auto wants_plt1 = [&](bool by_default) { return format.empty() ? by_default : format == "plt1"; };

  if (mode == "background") {
    return wants_plt1(false) ? plt1_result(background.pixels(), rev)
                             : png_result(background.pixels(), rev);
  }
  if (mode == "composite-rgb") {
    const Raster rgb = display_rgb(composite(layout));
    return wants_plt1(false) ? plt1_result(rgb, rev) : png_result(rgb, rev);
  }
  if (mode == "composite") {
    if (!wants_plt1(true)) throw ServiceError(400, "mode 'composite' is only available as plt1");
    return plt1_result(composite(layout), rev);
  }
  if (mode == "weight") {
    const FieldGrid weight = composite_weight(layout);
    return wants_plt1(false) ? plt1_result(weight, rev) : png_result(gray_to_rgb(weight, 1.0), rev);
  }
  if (mode == "overlay") {
    const Raster img = overlay(background, layout);
    return wants_plt1(false) ? plt1_result(img, rev) : png_result(img, rev);
  }
  if (mode.rfind("opacity:", 0) == 0) {
    const FieldGrid field = opacity_field(layout, object_index(mode, layout));
    return wants_plt1(true) ? plt1_result(field, rev) : png_result(gray_to_rgb(field, 1.0), rev);
  }
  if (mode.rfind("distance:", 0) == 0) {
    const FieldGrid field =
        distance_field(layout.object(object_index(mode, layout)).ellipse, layout.width(),
                       layout.height());
    return wants_plt1(true) ? plt1_result(field, rev)
                            : png_result(gray_to_rgb(field, 1.0 / kPi), rev);
  }
  if (mode == "perspective") {
    constexpr double deg = kPi / 180.0;
    PerspectiveCamera cam;
    cam.yaw = param_real(request, "yaw", 0.0) * deg;
    cam.pitch = param_real(request, "pitch", 0.0) * deg;
    cam.roll = param_real(request, "roll", 0.0) * deg;
    cam.hfov = param_real(request, "fov", 90.0) * deg;
    cam.out_width = param_count(request, "width", 256);
    cam.out_height = param_count(request, "height", 256);
    if (!(cam.hfov > 0.0 && cam.hfov < kPi)) throw ServiceError(400, "fov must lie in (0, 180)");
    const Raster src = display_source(background, layout, param(request, "source", "overlay"));
    const Raster view = project_perspective(src, cam);
    return wants_plt1(false) ? plt1_result(view, rev) : png_result(view, rev);
  }
  throw ServiceError(400, "unknown render mode '" + mode + "'");
}

SceneSession::SceneSession(std::string id, EquirectImage background, SceneLayout layout)
    : id_(std::move(id)),
      background_(std::make_shared<const EquirectImage>(std::move(background))),
      layout_(std::make_shared<const SceneLayout>(std::move(layout))) {
  if (background_->width() != layout_->width() || background_->height() != layout_->height())
    throw ServiceError(400, "layout dimensions do not match the background image");
}

LayoutSnapshot SceneSession::snapshot() const {
  std::lock_guard lock(mutex_);
  return {layout_, revision_};
}

std::size_t SceneSession::undo_depth() const {
  std::lock_guard lock(mutex_);
  return undo_.size();
}

std::uint64_t SceneSession::mutate(const Manipulation& op) {
  std::lock_guard lock(mutex_);
  std::shared_ptr<const SceneLayout> next;
  try {
    next = std::make_shared<const SceneLayout>(manipulate(*layout_, op));
  } catch (const std::out_of_range& e) {
    throw ServiceError(400, e.what());
  } catch (const std::invalid_argument& e) {
    throw ServiceError(400, e.what());
  }
  undo_.push_back(layout_);
  if (undo_.size() > kUndoDepth) undo_.pop_front();
  layout_ = std::move(next);
  return ++revision_;
}

std::uint64_t SceneSession::undo() {
  std::lock_guard lock(mutex_);
  if (undo_.empty()) throw ServiceError(409, "nothing to undo");
  layout_ = undo_.back();
  undo_.pop_back();
  return ++revision_;
}

RenderResult SceneSession::render(const ViewRequest& request) const {
  return render_view(*background_, snapshot(), request);
}

SessionStore::SessionStore() : id_source_(std::random_device{}()) {}

std::shared_ptr<SceneSession> SessionStore::create(EquirectImage background, SceneLayout layout) {
  std::lock_guard lock(mutex_);
  std::string id;
  do {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id_source_()));
    id = buf;
  } while (sessions_.contains(id));
  auto session = std::make_shared<SceneSession>(id, std::move(background), std::move(layout));
  sessions_.emplace(id, session);
  return session;
}

std::shared_ptr<SceneSession> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown session '" + id + "'");
  return it->second;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace panolayout::service
