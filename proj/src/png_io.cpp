#include "panolayout/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "panolayout/layout_io.hpp"

namespace panolayout {

namespace {

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + count > cur->bytes.size()) png_error(png, "truncated PNG");
  std::memcpy(out, cur->bytes.data() + cur->offset, count);
  cur->offset += count;
}

void write_callback(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void flush_callback(png_structp) {}

[[noreturn]] void error_callback(png_structp png, png_const_charp msg) {
  auto* message = static_cast<std::string*>(png_get_error_ptr(png));
  *message = msg;
  png_longjmp(png, 1);
}

void warning_callback(png_structp, png_const_charp) {}

}  // namespace

Raster decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw std::invalid_argument("not a PNG file");

  std::string message;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, error_callback, warning_callback);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }

  ReadCursor cursor{bytes, 0};
  std::vector<png_byte> data;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int depth = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::invalid_argument("PNG decode failed: " + message);
  }
  png_set_read_fn(png, &cursor, read_callback);
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  // tRNS transparency is ignored, so no alpha channel is synthesized.
  png_read_update_info(png, info);

  depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  data.resize(rowbytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = data.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  const std::size_t channels = png_get_channels(png, info);
  png_destroy_read_struct(&png, &info, nullptr);

  if (channels != 3) throw std::invalid_argument("unsupported PNG channel layout");
  Raster out(width, height, 3);
  auto values = out.values();
  if (depth == 16) {
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t i = 0; i < std::size_t{width} * 3; ++i) {
        const png_byte* p = rows[y] + 2 * i;
        values[y * width * 3 + i] = static_cast<double>((p[0] << 8) | p[1]) / 65535.0;
      }
  } else {
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t i = 0; i < std::size_t{width} * 3; ++i)
        values[y * width * 3 + i] = static_cast<double>(rows[y][i]) / 255.0;
  }
  return out;
}

EquirectImage decode_equirect_png(std::span<const std::uint8_t> bytes) {
  Raster pixels = decode_png(bytes);
  if (pixels.width() != 2 * pixels.height())
    throw std::invalid_argument("panorama must be 2:1 (W = 2H); refusing to resample " +
                                std::to_string(pixels.width()) + "x" +
                                std::to_string(pixels.height()));
  return EquirectImage(std::move(pixels));
}

EquirectImage load_equirect_png(const std::filesystem::path& path) {
  return decode_equirect_png(read_binary_file(path));
}

std::vector<std::uint8_t> encode_png(const Raster& image) {
  if (image.channels() != 1 && image.channels() != 3)
    throw std::invalid_argument("encode_png: raster must have 1 or 3 channels");
  if (image.width() == 0 || image.height() == 0)
    throw std::invalid_argument("encode_png: empty raster");

  const std::size_t w = image.width();
  const std::size_t h = image.height();
  std::vector<png_byte> data(w * h * 3);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto px = image.pixel(x, y);
      for (std::size_t c = 0; c < 3; ++c) {
        const double v = px[image.channels() == 3 ? c : 0];
        const double clamped = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
        data[(y * w + x) * 3 + c] = static_cast<png_byte>(std::lround(clamped * 255.0));
      }
    }
  }

  std::string message;
  std::vector<std::uint8_t> out;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, error_callback, warning_callback);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  std::vector<png_bytep> rows(h);
  for (std::size_t y = 0; y < h; ++y) rows[y] = data.data() + y * w * 3;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("PNG encode failed: " + message);
  }
  png_set_write_fn(png, &out, write_callback, flush_callback);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void save_png(const std::filesystem::path& path, const Raster& image) {
  write_binary_file(path, encode_png(image));
}

}  // namespace panolayout
