#include "support.hpp"

#include <png.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sirden/rng.hpp"

namespace testsupport {

namespace {
double sig(double t) { return 1.0 / (1.0 + std::exp(-t)); }
constexpr double kPi = 3.14159265358979323846;
}  // namespace

sirden::Image scene(int n) {
  sirden::Image img(n, n, 1);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double x = static_cast<double>(c) / (n - 1);
      const double y = static_cast<double>(r) / (n - 1);
      double v = 0.55 + 0.25 * (y - 0.5);
      v += 0.25 * std::exp(-((x - 0.35) * (x - 0.35) + (y - 0.62) * (y - 0.62)) /
                           (2.0 * 0.18 * 0.18));
      const double d = std::sqrt((x - 0.72) * (x - 0.72) + (y - 0.30) * (y - 0.30));
      v += -0.22 * sig((0.16 - d) / 0.02);
      v += 0.12 * sig((x - 0.15) / 0.02) * sig((0.45 - x) / 0.02) * sig((y - 0.10) / 0.02) *
           sig((0.30 - y) / 0.02);
      v += 0.03 * std::sin(2 * kPi * 6 * x) * std::sin(2 * kPi * 5 * y) +
           0.02 * std::sin(2 * kPi * (9 * x + 7 * y));
      img.at(r, c, 0) = std::min(0.92, std::max(0.12, v));
    }
  }
  return img;
}

sirden::Image textured(int n) {
  sirden::Image img(n, n, 1);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double x = static_cast<double>(c) / (n - 1);
      const double y = static_cast<double>(r) / (n - 1);
      double v = 0.5 + 0.16 * std::sin(2 * kPi * 4 * x) * std::cos(2 * kPi * 3 * y) +
                 0.12 * (x - 0.5) + 0.08 * (y - 0.5) + 0.06 * std::sin(2 * kPi * (7 * x + 5 * y));
      img.at(r, c, 0) = std::min(1.0, std::max(0.0, v));
    }
  }
  return img;
}

sirden::Image scene_rgb(int n) {
  const sirden::Image g = scene(n);
  sirden::Image img(n, n, 3);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double v = g.at(r, c, 0);
      img.at(r, c, 0) = v;
      img.at(r, c, 1) = std::min(0.95, std::max(0.05, 0.9 * v + 0.08));
      img.at(r, c, 2) = std::min(0.95, std::max(0.05, 1.1 * v - 0.05));
    }
  }
  return img;
}

sirden::Image constant(int height, int width, double value, int channels) {
  sirden::Image img(height, width, channels);
  for (double& v : img.data) v = value;
  return img;
}

sirden::Image white_noise(int height, int width, uint64_t seed) {
  sirden::RandomEngine rng(seed);
  sirden::Image img(height, width, 1);
  for (double& v : img.data) v = rng.uniform01();
  return img;
}

namespace {
bool write_raw(png_structp png, png_infop info, std::FILE* f, png_bytep* rows, int w, int h,
               int bit_depth, int color_type) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, f);
  png_set_IHDR(png, info, w, h, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  return true;
}
}  // namespace

void save_png16(const std::vector<uint16_t>& samples, int height, int width,
                const std::string& path) {
  if (samples.size() != static_cast<size_t>(height) * width) {
    throw std::runtime_error("save_png16: sample count mismatch");
  }
  std::vector<png_byte> raw(samples.size() * 2);
  for (size_t i = 0; i < samples.size(); ++i) {
    raw[2 * i] = static_cast<png_byte>(samples[i] >> 8);  // big-endian
    raw[2 * i + 1] = static_cast<png_byte>(samples[i] & 0xff);
  }
  std::vector<png_bytep> rows(height);
  for (int r = 0; r < height; ++r) rows[r] = raw.data() + static_cast<size_t>(r) * width * 2;

  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_png16: cannot open " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  const bool ok =
      write_raw(png, info, f, rows.data(), width, height, 16, PNG_COLOR_TYPE_GRAY);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
  if (!ok) throw std::runtime_error("save_png16: write failed for " + path);
}

void save_png_rgba_1x1(const std::string& path) {
  png_byte pixel[4] = {10, 20, 30, 255};
  png_bytep rows[1] = {pixel};
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_png_rgba_1x1: cannot open " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  const bool ok = write_raw(png, info, f, rows, 1, 1, 8, PNG_COLOR_TYPE_RGB_ALPHA);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
  if (!ok) throw std::runtime_error("save_png_rgba_1x1: write failed for " + path);
}

std::string make_scratch_dir(const std::string& tag) {
  std::string tmpl = "/tmp/sirden-" + tag + "-XXXXXX";
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
  return std::string(buf.data());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (first) {
      table.header = cells;
      first = false;
      continue;
    }
    std::vector<std::optional<double>> row;
    for (const std::string& c : cells) {
      if (c.empty()) {
        row.push_back(std::nullopt);
      } else if (c == "inf") {
        row.push_back(std::numeric_limits<double>::infinity());
      } else {
        row.push_back(std::stod(c));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace testsupport
