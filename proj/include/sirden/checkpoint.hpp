#pragma once

#include <string>
#include <vector>

#include "sirden/siren.hpp"

namespace sirden {

// Network checkpoints are a single JSON document: config fields plus one
// base64 blob of little-endian float64 per parameter array, row-major.
struct Checkpoint {
  SirenNetwork net;
  int trained_height = 0;
  int trained_width = 0;
};

std::string checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

namespace detail {
std::string base64_encode(const unsigned char* data, size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);
}  // namespace detail

}  // namespace sirden
