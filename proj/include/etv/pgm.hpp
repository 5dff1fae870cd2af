#pragma once

#include <string>

#include "etv/image.hpp"

namespace etv {

/// Reads a square P2 or P5 portable graymap (maxval up to 65535) and scales
/// intensities to [0, 1]. Throws std::runtime_error on malformed input.
Image load_image(const std::string& path);

/// Writes the real part, clamped to [0, 1], as binary P5 with 8-bit
/// (maxval 255) or 16-bit (maxval 65535) samples.
void save_image(const Image& img, const std::string& path, int bits = 8);

}  // namespace etv
