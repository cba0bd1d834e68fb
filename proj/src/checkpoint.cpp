#include "sirden/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sirden/errors.hpp"

namespace sirden {

namespace detail {

namespace {
constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}
}  // namespace

std::string base64_encode(const unsigned char* data, size_t len) {
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (size_t i = 0; i < len; i += 3) {
    uint32_t block = static_cast<uint32_t>(data[i]) << 16;
    if (i + 1 < len) block |= static_cast<uint32_t>(data[i + 1]) << 8;
    if (i + 2 < len) block |= static_cast<uint32_t>(data[i + 2]);
    out += kAlphabet[(block >> 18) & 63];
    out += kAlphabet[(block >> 12) & 63];
    out += i + 1 < len ? kAlphabet[(block >> 6) & 63] : '=';
    out += i + 2 < len ? kAlphabet[block & 63] : '=';
  }
  return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  uint32_t block = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const int v = decode_char(c);
    if (v < 0) throw FormatError("invalid base64 character in checkpoint");
    block = (block << 6) | static_cast<uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<unsigned char>((block >> bits) & 0xff));
    }
  }
  return out;
}

}  // namespace detail

namespace {

// Little-endian float64 on the wire regardless of host order.
std::string encode_doubles(const double* values, size_t count) {
  std::vector<unsigned char> bytes(count * 8);
  for (size_t i = 0; i < count; ++i) {
    uint64_t u;
    std::memcpy(&u, &values[i], 8);
    for (int b = 0; b < 8; ++b) {
      bytes[i * 8 + b] = static_cast<unsigned char>((u >> (8 * b)) & 0xff);
    }
  }
  return detail::base64_encode(bytes.data(), bytes.size());
}

std::vector<double> decode_doubles(const std::string& text, size_t expect) {
  const std::vector<unsigned char> bytes = detail::base64_decode(text);
  if (bytes.size() != expect * 8) {
    throw FormatError("checkpoint parameter array has wrong length");
  }
  std::vector<double> values(expect);
  for (size_t i = 0; i < expect; ++i) {
    uint64_t u = 0;
    for (int b = 0; b < 8; ++b) {
      u |= static_cast<uint64_t>(bytes[i * 8 + b]) << (8 * b);
    }
    std::memcpy(&values[i], &u, 8);
  }
  return values;
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& ckpt) {
  using nlohmann::json;
  const SirenConfig& cfg = ckpt.net.config;
  json doc;
  doc["format"] = "siren-checkpoint";
  doc["version"] = 1;
  doc["config"] = {{"hidden_layers", cfg.hidden_layers}, {"width", cfg.width},
                   {"in_dim", cfg.in_dim},               {"out_dim", cfg.out_dim},
                   {"omega0", cfg.omega0},               {"omega_hidden", cfg.omega_hidden}};
  doc["trained_height"] = ckpt.trained_height;
  doc["trained_width"] = ckpt.trained_width;

  json layers = json::array();
  for (const Layer& layer : ckpt.net.layers) {
    // Row-major weight dump; Eigen stores column-major, so copy explicitly.
    std::vector<double> w(static_cast<size_t>(layer.weight.size()));
    size_t k = 0;
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) w[k++] = layer.weight(r, c);
    }
    layers.push_back({{"rows", layer.weight.rows()},
                      {"cols", layer.weight.cols()},
                      {"weight", encode_doubles(w.data(), w.size())},
                      {"bias", encode_doubles(layer.bias.data(),
                                              static_cast<size_t>(layer.bias.size()))}});
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != "siren-checkpoint") {
      throw FormatError("not a siren-checkpoint document");
    }
    Checkpoint ckpt;
    const json& cfg = doc.at("config");
    ckpt.net.config.hidden_layers = cfg.at("hidden_layers");
    ckpt.net.config.width = cfg.at("width");
    ckpt.net.config.in_dim = cfg.at("in_dim");
    ckpt.net.config.out_dim = cfg.at("out_dim");
    ckpt.net.config.omega0 = cfg.at("omega0");
    ckpt.net.config.omega_hidden = cfg.at("omega_hidden");
    ckpt.trained_height = doc.at("trained_height");
    ckpt.trained_width = doc.at("trained_width");

    for (const json& jl : doc.at("layers")) {
      Layer layer;
      const Eigen::Index rows = jl.at("rows");
      const Eigen::Index cols = jl.at("cols");
      const std::vector<double> w =
          decode_doubles(jl.at("weight"), static_cast<size_t>(rows * cols));
      layer.weight.resize(rows, cols);
      size_t k = 0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) layer.weight(r, c) = w[k++];
      }
      const std::vector<double> b = decode_doubles(jl.at("bias"), static_cast<size_t>(rows));
      layer.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
      ckpt.net.layers.push_back(std::move(layer));
    }
    if (ckpt.net.layers.size() !=
        static_cast<size_t>(ckpt.net.config.hidden_layers) + 1) {
      throw FormatError("checkpoint layer count does not match config");
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint missing field: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << checkpoint_to_json(ckpt);
  if (!out) throw IoError("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

}  // namespace sirden
