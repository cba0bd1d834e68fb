#include "sirden/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "sirden/errors.hpp"

namespace sirden {

namespace {

struct PngReadCtx {
  std::FILE* file = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (file) std::fclose(file);
  }
};

struct PngWriteCtx {
  std::FILE* file = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (file) std::fclose(file);
  }
};

// libpng reports errors by longjmp, so every call sequence lives in a frame
// with no C++ objects; callers translate the bool into an exception.

bool read_header(png_structp png, png_infop info, std::FILE* file) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, file);
  png_read_info(png, info);
  return true;
}

bool read_body(png_structp png, png_bytep* rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  return true;
}

bool write_all(png_structp png, png_infop info, std::FILE* file, png_bytep* rows, int width,
               int height, int color_type) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, file);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

Image load_png(const std::string& path) {
  PngReadCtx ctx;
  ctx.file = std::fopen(path.c_str(), "rb");
  if (!ctx.file) throw IoError("cannot open '" + path + "' for reading");

  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError("png_create_read_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("png_create_info_struct failed");

  if (!read_header(ctx.png, ctx.info, ctx.file)) {
    throw FormatError("'" + path + "' is not a decodable PNG");
  }

  const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);

  if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB) {
    throw FormatError("'" + path + "': only gray and RGB PNGs without alpha are supported");
  }
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) {
    throw FormatError("'" + path + "': transparency chunk not supported");
  }
  if (bit_depth != 8 && bit_depth != 16) {
    throw FormatError("'" + path + "': only 8-bit and 16-bit PNGs are supported");
  }

  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const size_t row_bytes = static_cast<size_t>(width) * channels * (bit_depth / 8);
  std::vector<png_byte> raw(static_cast<size_t>(height) * row_bytes);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = raw.data() + r * row_bytes;

  if (!read_body(ctx.png, rows.data())) {
    throw FormatError("'" + path + "': PNG decode failed");
  }

  Image img(static_cast<int>(height), static_cast<int>(width), channels);
  const double scale = bit_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
  size_t o = 0;
  for (size_t i = 0; i < raw.size();) {
    if (bit_depth == 16) {
      // PNG stores 16-bit samples big-endian.
      const unsigned v = (static_cast<unsigned>(raw[i]) << 8) | raw[i + 1];
      img.data[o++] = v * scale;
      i += 2;
    } else {
      img.data[o++] = raw[i] * scale;
      i += 1;
    }
  }
  return img;
}

void save_png(const Image& img, const std::string& path) {
  if (img.channels != 1 && img.channels != 3) {
    throw FormatError("save_png: channels must be 1 or 3");
  }
  std::vector<png_byte> raw(img.size());
  for (size_t i = 0; i < img.data.size(); ++i) {
    double v = img.data[i];
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    raw[i] = static_cast<png_byte>(std::lround(v * 255.0));
  }
  const size_t row_bytes = static_cast<size_t>(img.width) * img.channels;
  std::vector<png_bytep> rows(img.height);
  for (int r = 0; r < img.height; ++r) rows[r] = raw.data() + static_cast<size_t>(r) * row_bytes;

  PngWriteCtx ctx;
  ctx.file = std::fopen(path.c_str(), "wb");
  if (!ctx.file) throw IoError("cannot open '" + path + "' for writing");
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError("png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("png_create_info_struct failed");

  if (!write_all(ctx.png, ctx.info, ctx.file, rows.data(), img.width, img.height,
                 img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY)) {
    throw IoError("PNG write to '" + path + "' failed");
  }

  if (std::fclose(ctx.file) != 0) {
    ctx.file = nullptr;
    throw IoError("error closing '" + path + "'");
  }
  ctx.file = nullptr;
}

}  // namespace sirden
