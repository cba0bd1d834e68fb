#pragma once

#include <string>

#include "sirden/image.hpp"

namespace sirden {

// Decodes an 8- or 16-bit gray/RGB PNG into [0,1] intensities (divide by
// the bit-depth maximum). Alpha channels and palette images are rejected
// with FormatError; unreadable files raise IoError.
Image load_png(const std::string& path);

// Writes an 8-bit PNG (gray or RGB per img.channels). Intensities are
// clamped to [0,1] and quantized as round(v*255).
void save_png(const Image& img, const std::string& path);

}  // namespace sirden
