#pragma once

#include <string>

#include "bpinv/types.hpp"

namespace bpinv::bench {

struct GrayImage {
  Vector pixels;  // row-major, values in [0, 255]
  Index side = 0;
};

// Binary PGM (P5), maxval 255, square with a power-of-two side.
// Throws UnsupportedFormat, NonSquare, NonPowerOfTwo or IoError.
GrayImage load_image_pgm(const std::string& path);

// Writes a P5 file, clamping and rounding to [0, 255].
void save_image_pgm(const std::string& path, const Vector& pixels, Index width, Index height);

}  // namespace bpinv::bench
