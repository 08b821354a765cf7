#include "panolayout/http_service.hpp"

#include <httplib.h>

#include <json.hpp>

#include "panolayout/layout_io.hpp"
#include "panolayout/png_io.hpp"

namespace panolayout::service {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& reason) {
  send_json(res, status, {{"error", reason}});
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.what());
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, e.what());
    } catch (const std::out_of_range& e) {
      send_error(res, 400, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, std::string("malformed JSON: ") + e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

json parse_json_body(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, std::string("malformed JSON: ") + e.what());
  }
}

std::size_t json_count(const json& obj, const char* key, std::size_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
    throw ServiceError(400, std::string("random.") + key + " must be a non-negative integer");
  return it->get<std::size_t>();
}

SceneLayout random_request_layout(const std::string& text, const EquirectImage& image) {
  json doc = parse_json_body(text);
  if (doc.is_object() && doc.contains("random")) doc = doc["random"];
  if (!doc.is_object() || !doc.contains("seed"))
    throw ServiceError(400, "random layout request needs a seed");
  for (const auto& [key, _] : doc.items())
    if (key != "seed" && key != "n" && key != "d_f")
      throw ServiceError(400, "random: unknown key \"" + key + "\"");
  const auto seed = static_cast<std::uint64_t>(json_count(doc, "seed", 0));
  const std::size_t n = json_count(doc, "n", kDefaultRandomObjects);
  const std::size_t d_f = json_count(doc, "d_f", kDefaultRandomFeatures);
  return random_layout(seed, n, d_f, image.width(), image.height());
}

}  // namespace

struct HttpService::Impl {
  httplib::Server server;
  SessionStore store;
};

HttpService::HttpService(std::filesystem::path static_root) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  SessionStore& store = impl_->store;

  srv.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  srv.Post("/sessions", guarded([&store](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_file("image")) throw ServiceError(400, "missing multipart field 'image'");
    const std::string& png = req.get_file_value("image").content;
    const EquirectImage image = decode_equirect_png(
        {reinterpret_cast<const std::uint8_t*>(png.data()), png.size()});

    std::optional<SceneLayout> layout;
    if (req.has_file("layout")) {
      layout = parse_layout(req.get_file_value("layout").content);
    } else if (req.has_file("random")) {
      layout = random_request_layout(req.get_file_value("random").content, image);
    } else {
      throw ServiceError(400, "provide a 'layout' or 'random' multipart field");
    }
    auto session = store.create(image, std::move(*layout));
    const LayoutSnapshot snap = session->snapshot();
    res.set_header("X-Revision", std::to_string(snap.revision));
    send_json(res, 201, {{"id", session->id()}, {"revision", snap.revision}});
  }));

  srv.Get(R"(/sessions/([0-9a-f]+)/layout)",
          guarded([&store](const httplib::Request& req, httplib::Response& res) {
            const LayoutSnapshot snap = store.find(req.matches[1])->snapshot();
            res.set_header("X-Revision", std::to_string(snap.revision));
            send_json(res, 200, {{"revision", snap.revision}, {"layout", layout_to_json(*snap.layout)}});
          }));

  srv.Post(R"(/sessions/([0-9a-f]+)/ops)",
           guarded([&store](const httplib::Request& req, httplib::Response& res) {
             auto session = store.find(req.matches[1]);
             const Manipulation op = manipulation_from_json(parse_json_body(req.body));
             const std::uint64_t rev = session->mutate(op);
             res.set_header("X-Revision", std::to_string(rev));
             send_json(res, 200, {{"revision", rev}});
           }));

  srv.Post(R"(/sessions/([0-9a-f]+)/undo)",
           guarded([&store](const httplib::Request& req, httplib::Response& res) {
             const std::uint64_t rev = store.find(req.matches[1])->undo();
             res.set_header("X-Revision", std::to_string(rev));
             send_json(res, 200, {{"revision", rev}});
           }));

  srv.Get(R"(/sessions/([0-9a-f]+)/render)",
          guarded([&store](const httplib::Request& req, httplib::Response& res) {
            auto session = store.find(req.matches[1]);
            ViewRequest view;
            for (const auto& [key, value] : req.params) {
              if (key == "mode")
                view.mode = value;
              else
                view.params[key] = value;
            }
            if (view.mode.empty()) throw ServiceError(400, "missing 'mode' parameter");
            RenderResult out = session->render(view);
            res.set_header("X-Revision", std::to_string(out.revision));
            res.set_content(std::string(out.body.begin(), out.body.end()), out.content_type);
          }));

  if (!static_root.empty()) {
    if (!srv.set_mount_point("/", static_root.string()))
      throw std::invalid_argument("static root '" + static_root.string() + "' is not a directory");
  }
}

HttpService::~HttpService() { stop(); }

bool HttpService::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int HttpService::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpService::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpService::stop() {
  if (impl_) impl_->server.stop();
}

SessionStore& HttpService::store() { return impl_->store; }

}  // namespace panolayout::service
