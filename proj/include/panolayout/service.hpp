#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "panolayout/imageops.hpp"
#include "panolayout/layout.hpp"

namespace panolayout::service {

inline constexpr std::size_t kUndoDepth = 64;
/// Seed of the d_f -> RGB display projection.
inline constexpr std::uint64_t kDisplayProjectionSeed = 0x9e3779b97f4a7c15ULL;
inline constexpr double kOverlayAlpha = 0.5;

/// Error carrying the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct LayoutSnapshot {
  std::shared_ptr<const SceneLayout> layout;
  std::uint64_t revision = 0;
};

/// Parsed render request. `mode` is one of composite-rgb, composite, weight,
/// opacity:i, distance:i, perspective, background, overlay. Query-style
/// parameters (format, yaw, pitch, roll, fov in degrees, width, height,
/// source) live in `params`.
struct ViewRequest {
  std::string mode;
  std::map<std::string, std::string> params;
};

struct RenderResult {
  std::string content_type;
  std::vector<std::uint8_t> body;
  std::uint64_t revision = 0;
};

/// Renders a view of a layout snapshot over a background. Pure: equal inputs
/// produce byte-identical bodies.
RenderResult render_view(const EquirectImage& background, const LayoutSnapshot& snapshot,
                         const ViewRequest& request);

/// d_f -> RGB projection used by composite-rgb: entries N(0,1)/sqrt(d_f)
/// from Rng(kDisplayProjectionSeed), mapped through 0.5 + 0.5 tanh.
Raster display_rgb(const LayoutMap& map);

class SceneSession {
 public:
  SceneSession(std::string id, EquirectImage background, SceneLayout layout);

  const std::string& id() const { return id_; }
  const EquirectImage& background() const { return *background_; }
  LayoutSnapshot snapshot() const;
  std::size_t undo_depth() const;

  /// Applies a manipulation under the session lock; returns the new revision.
  std::uint64_t mutate(const Manipulation& op);
  /// Restores the previous layout as a new revision.
  std::uint64_t undo();

  RenderResult render(const ViewRequest& request) const;

 private:
  std::string id_;
  std::shared_ptr<const EquirectImage> background_;
  mutable std::mutex mutex_;
  std::shared_ptr<const SceneLayout> layout_;
  std::uint64_t revision_ = 0;
  std::deque<std::shared_ptr<const SceneLayout>> undo_;
};

/// In-memory registry of isolated sessions.
class SessionStore {
 public:
  SessionStore();

  std::shared_ptr<SceneSession> create(EquirectImage background, SceneLayout layout);
  /// Throws ServiceError(404) for unknown ids.
  std::shared_ptr<SceneSession> find(const std::string& id) const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::mt19937_64 id_source_;
  std::unordered_map<std::string, std::shared_ptr<SceneSession>> sessions_;
};

}  // namespace panolayout::service
