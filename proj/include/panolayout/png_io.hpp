#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "panolayout/imageops.hpp"
#include "panolayout/raster.hpp"

namespace panolayout {

/// Decodes an 8- or 16-bit PNG into a 3-channel raster scaled to [0, 1] by
/// the maximum code value. Gray is replicated, alpha dropped, palettes
/// expanded.
Raster decode_png(std::span<const std::uint8_t> bytes);

/// Decodes and enforces the 2:1 panorama shape (no resampling is attempted).
EquirectImage decode_equirect_png(std::span<const std::uint8_t> bytes);
EquirectImage load_equirect_png(const std::filesystem::path& path);

/// Encodes a 1- or 3-channel raster as 8-bit RGB, clamping to [0, 1] and
/// rounding to the nearest code.
std::vector<std::uint8_t> encode_png(const Raster& image);
void save_png(const std::filesystem::path& path, const Raster& image);

}  // namespace panolayout
