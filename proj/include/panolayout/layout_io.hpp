#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "panolayout/layout.hpp"
#include "panolayout/raster.hpp"

namespace panolayout {

// Layout JSON document (version 1):
//   {"version":1, "n":int, "d_f":int, "d_u":int, "d_y":int, "width":int,
//    "height":int, "objects":[{"alpha","beta","s","gamma","e","f":[...]}]}
// Unknown keys are rejected at both levels.
nlohmann::json layout_to_json(const SceneLayout& layout);
SceneLayout layout_from_json(const nlohmann::json& doc);
std::string dump_layout(const SceneLayout& layout);
SceneLayout parse_layout(std::string_view text);
SceneLayout load_layout(const std::filesystem::path& path);
void save_layout(const std::filesystem::path& path, const SceneLayout& layout);

// PLT1 grid: "PLT1", u32le W, H, C, then W*H*C float32le in raster order.
std::vector<std::uint8_t> encode_plt1(const Raster& grid);
Raster decode_plt1(std::span<const std::uint8_t> bytes);
void write_plt1(const std::filesystem::path& path, const Raster& grid);
Raster read_plt1(const std::filesystem::path& path);

/// Parses "remove:i", "translate:i:da:db", "resize:i:ds", "rotate:i:dg" or
/// "ecc:i:e" (1-based i, radians).
Manipulation parse_manipulation(std::string_view text);

/// Parses {"op":"remove","i":3}, {"op":"translate","i":1,"da":..,"db":..},
/// {"op":"resize","i":..,"ds":..}, {"op":"rotate","i":..,"dg":..},
/// {"op":"ecc","i":..,"e":..} or {"op":"features","i":..,"f":[..]}.
Manipulation manipulation_from_json(const nlohmann::json& doc);

std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace panolayout
