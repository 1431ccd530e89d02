#pragma once

#include <string>

#include "nsg/types.hpp"

// Separable resamplers. Every resampler here is a pair of per-axis weight
// matrices applied as R_h * X * R_w^T, so the operators compose with the
// DCT algebra and batch across channels as plain matrix products.

namespace nsg::resample {

enum class Kind { nearest, linear };

Kind parseKind(const std::string& name);
std::string toString(Kind k);

// dst x src weight matrix, rows sum to 1
//   nearest: source index floor(i * src / dst)
//   linear:  pixel-center alignment, sample at (i + 0.5) * src / dst - 0.5,
//            clamped at the borders
Mat interpMatrix(Index src, Index dst, Kind kind);

// dst x src exact box-average weights for dst <= src
Mat areaMatrix(Index src, Index dst);

// upscaling only; equal size is the identity
Mat interpolate(const Eigen::Ref<const Mat>& x, Index th, Index tw, Kind kind);
Tensor3 interpolate(const Tensor3& x, Index th, Index tw, Kind kind);

// downscaling only; equal size is the identity
Mat downsampleArea(const Eigen::Ref<const Mat>& x, Index th, Index tw);
Tensor3 downsampleArea(const Tensor3& x, Index th, Index tw);

}  // namespace nsg::resample
