#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "panolayout/service.hpp"

namespace panolayout::service {

/// Default object count and feature width for `random` session requests.
inline constexpr std::size_t kDefaultRandomObjects = 20;
inline constexpr std::size_t kDefaultRandomFeatures = 8;

/// HTTP front end over a SessionStore.
///
///   POST /sessions               multipart: image (PNG) plus either layout
///                                (layout JSON) or random ({"random":{"seed",
///                                "n","d_f"}}) -> {"id","revision"}
///   GET  /sessions/{id}/layout   -> {"revision", "layout"}
///   POST /sessions/{id}/ops      manipulation JSON -> {"revision"}
///   POST /sessions/{id}/undo     -> {"revision"}
///   GET  /sessions/{id}/render   ?mode=...&... -> PNG or PLT1
///   GET  /healthz                -> ok
///
/// Every session response carries an X-Revision header. Errors are JSON
/// {"error": reason} with a 4xx status.
class HttpService {
 public:
  /// Files under `static_root` (if non-empty) are served at "/".
  explicit HttpService(std::filesystem::path static_root = {});
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds and serves until stop(); returns false if binding failed.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it (or -1).
  int bind_any_port(const std::string& host);
  /// Serves on a socket bound by bind_any_port.
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

  SessionStore& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace panolayout::service
