#include "panolayout/layout_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <stdexcept>

namespace panolayout {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const char* where) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw std::invalid_argument(std::string(where) + ": unknown key \"" + key + "\"");
  }
}

const json& require_key(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw std::invalid_argument(std::string(where) + ": missing key \"" + key + "\"");
  return *it;
}

double get_real(const json& obj, const char* key, const char* where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_number())
    throw std::invalid_argument(std::string(where) + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& obj, const char* key, const char* where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw std::invalid_argument(std::string(where) + ": \"" + key +
                                "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> get_reals(const json& obj, const char* key, const char* where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_array())
    throw std::invalid_argument(std::string(where) + ": \"" + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number())
      throw std::invalid_argument(std::string(where) + ": \"" + key + "\" must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[off + i]) << (8 * i);
  return v;
}

std::size_t parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("bad object index \"" + std::string(s) + "\"");
  return v;
}

double parse_real(std::string_view s) {
  // std::from_chars for double is not available in every supported libstdc++.
  const std::string str(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != str.size() || str.empty())
    throw std::invalid_argument("bad number \"" + str + "\"");
  return v;
}

std::vector<std::string_view> split_colon(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(':', start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

json layout_to_json(const SceneLayout& layout) {
  json objects = json::array();
  for (const auto& obj : layout.objects()) {
    objects.push_back({{"alpha", obj.ellipse.alpha},
                       {"beta", obj.ellipse.beta},
                       {"s", obj.size},
                       {"gamma", obj.ellipse.gamma},
                       {"e", obj.ellipse.ecc},
                       {"f", obj.features}});
  }
  return {{"version", 1},           {"n", layout.n()},          {"d_f", layout.d_f()},
          {"d_u", layout.d_u()},    {"d_y", layout.d_y()},      {"width", layout.width()},
          {"height", layout.height()}, {"objects", std::move(objects)}};
}

SceneLayout layout_from_json(const json& doc) {
  constexpr const char* where = "layout";
  if (!doc.is_object()) throw std::invalid_argument("layout: document must be a JSON object");
  reject_unknown_keys(doc, {"version", "n", "d_f", "d_u", "d_y", "width", "height", "objects"},
                      where);
  if (get_count(doc, "version", where) != 1)
    throw std::invalid_argument("layout: unsupported version");
  const std::size_t n = get_count(doc, "n", where);
  const std::size_t d_f = get_count(doc, "d_f", where);
  const std::size_t d_u = get_count(doc, "d_u", where);
  const std::size_t d_y = get_count(doc, "d_y", where);
  const std::size_t width = get_count(doc, "width", where);
  const std::size_t height = get_count(doc, "height", where);
  if (d_u + d_y != d_f) throw std::invalid_argument("layout: d_u + d_y must equal d_f");

  const json& list = require_key(doc, "objects", where);
  if (!list.is_array()) throw std::invalid_argument("layout: \"objects\" must be an array");
  if (list.size() != n) throw std::invalid_argument("layout: n does not match object count");

  std::vector<ObjectVector> objects;
  objects.reserve(n);
  for (const json& o : list) {
    constexpr const char* owhere = "layout object";
    if (!o.is_object()) throw std::invalid_argument("layout: objects must be JSON objects");
    reject_unknown_keys(o, {"alpha", "beta", "s", "gamma", "e", "f"}, owhere);
    ObjectVector obj;
    obj.ellipse.alpha = get_real(o, "alpha", owhere);
    obj.ellipse.beta = get_real(o, "beta", owhere);
    obj.size = get_real(o, "s", owhere);
    obj.ellipse.gamma = get_real(o, "gamma", owhere);
    obj.ellipse.ecc = get_real(o, "e", owhere);
    obj.features = get_reals(o, "f", owhere);
    objects.push_back(std::move(obj));
  }
  return SceneLayout(width, height, d_u, d_y, std::move(objects));
}

std::string dump_layout(const SceneLayout& layout) { return layout_to_json(layout).dump(2) + "\n"; }

SceneLayout parse_layout(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("layout: malformed JSON: ") + e.what());
  }
  return layout_from_json(doc);
}

SceneLayout load_layout(const std::filesystem::path& path) {
  return parse_layout(read_text_file(path));
}

void save_layout(const std::filesystem::path& path, const SceneLayout& layout) {
  write_text_file(path, dump_layout(layout));
}

std::vector<std::uint8_t> encode_plt1(const Raster& grid) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + 4 * grid.size());
  for (char c : {'P', 'L', 'T', '1'}) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, static_cast<std::uint32_t>(grid.width()));
  put_u32(out, static_cast<std::uint32_t>(grid.height()));
  put_u32(out, static_cast<std::uint32_t>(grid.channels()));
  for (double v : grid.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

Raster decode_plt1(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "PLT1", 4) != 0)
    throw std::invalid_argument("PLT1: bad magic");
  const std::size_t w = get_u32(bytes, 4);
  const std::size_t h = get_u32(bytes, 8);
  const std::size_t c = get_u32(bytes, 12);
  const std::size_t count = w * h * c;
  if (bytes.size() != 16 + 4 * count) throw std::invalid_argument("PLT1: truncated payload");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i)
    values[i] = std::bit_cast<float>(get_u32(bytes, 16 + 4 * i));
  return Raster(w, h, c, std::move(values));
}

void write_plt1(const std::filesystem::path& path, const Raster& grid) {
  write_binary_file(path, encode_plt1(grid));
}

Raster read_plt1(const std::filesystem::path& path) { return decode_plt1(read_binary_file(path)); }

Manipulation parse_manipulation(std::string_view text) {
  const auto parts = split_colon(text);
  const std::string_view op = parts.front();
  auto expect = [&](std::size_t count) {
    if (parts.size() != count)
      throw std::invalid_argument("manipulation \"" + std::string(text) + "\": expected " +
                                  std::to_string(count - 1) + " argument(s)");
  };
  if (op == "remove") {
    expect(2);
    return RemoveObject{parse_index(parts[1])};
  }
  if (op == "translate") {
    expect(4);
    return TranslateObject{parse_index(parts[1]), parse_real(parts[2]), parse_real(parts[3])};
  }
  if (op == "resize") {
    expect(3);
    return ResizeObject{parse_index(parts[1]), parse_real(parts[2])};
  }
  if (op == "rotate") {
    expect(3);
    return RotateObject{parse_index(parts[1]), parse_real(parts[2])};
  }
  if (op == "ecc") {
    expect(3);
    return SetEccentricity{parse_index(parts[1]), parse_real(parts[2])};
  }
  throw std::invalid_argument("unknown manipulation \"" + std::string(op) + "\"");
}

Manipulation manipulation_from_json(const json& doc) {
  constexpr const char* where = "op";
  if (!doc.is_object()) throw std::invalid_argument("op: body must be a JSON object");
  const json& op_v = require_key(doc, "op", where);
  if (!op_v.is_string()) throw std::invalid_argument("op: \"op\" must be a string");
  const std::string op = op_v.get<std::string>();
  if (op == "remove") {
    reject_unknown_keys(doc, {"op", "i"}, where);
    return RemoveObject{get_count(doc, "i", where)};
  }
  if (op == "translate") {
    reject_unknown_keys(doc, {"op", "i", "da", "db"}, where);
    return TranslateObject{get_count(doc, "i", where), get_real(doc, "da", where),
                           get_real(doc, "db", where)};
  }
  if (op == "resize") {
    reject_unknown_keys(doc, {"op", "i", "ds"}, where);
    return ResizeObject{get_count(doc, "i", where), get_real(doc, "ds", where)};
  }
  if (op == "rotate") {
    reject_unknown_keys(doc, {"op", "i", "dg"}, where);
    return RotateObject{get_count(doc, "i", where), get_real(doc, "dg", where)};
  }
  if (op == "ecc") {
    reject_unknown_keys(doc, {"op", "i", "e"}, where);
    return SetEccentricity{get_count(doc, "i", where), get_real(doc, "e", where)};
  }
  if (op == "features") {
    reject_unknown_keys(doc, {"op", "i", "f"}, where);
    return SetFeatures{get_count(doc, "i", where), get_reals(doc, "f", where)};
  }
  throw std::invalid_argument("op: unknown manipulation \"" + op + "\"");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  const std::string s = read_text_file(path);
  return {s.begin(), s.end()};
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_binary_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace panolayout
