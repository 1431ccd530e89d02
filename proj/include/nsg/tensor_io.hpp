#pragma once

#include <string>

#include "nsg/types.hpp"

// Binary tensor container and 8-bit image export.
//
// Container layout, all integers little-endian:
//   bytes 0..3   magic "NSGT"
//   u32          ndim (2 or 3)
//   u32 * ndim   dims (rows, cols[, channels])
//   u32          payload kind: 0 = f64 values, 1 = u32 token indices
//   payload      row-major, channel-last
//
// Images are raw PGM (P5) for one channel and PPM (P6) for three, maxval 255,
// values clamped to [0, 1] and rounded to 8 bits on write.

namespace nsg::io {

void saveTensor(const Tensor3& t, const std::string& path);
Tensor3 loadTensor(const std::string& path);

void saveTokens(const TokenMap& t, const std::string& path);
TokenMap loadTokens(const std::string& path);

void writeImage(const Tensor3& t, const std::string& path);
Tensor3 readImage(const std::string& path);

}  // namespace nsg::io
