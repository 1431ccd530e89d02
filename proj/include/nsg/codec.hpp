#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nsg/resample.hpp"
#include "nsg/types.hpp"

// Multiscale residual quantizer over a shared codebook. Encoding walks the
// scale ladder coarse to fine, at each scale area-averaging the remaining
// residual, snapping every location to its nearest codeword and accumulating
// the upsampled result:
//
//   fhat_0 = 0
//   r_k    = areaDownsample(f - fhat_{k-1}, (h_k, w_k))
//   fhat_k = fhat_{k-1} + upsample(dequantize(quantize(r_k)))
//
// Codeword 0 is pinned to the zero vector so "change nothing" is always an
// admissible choice at every scale.

namespace nsg::codec {

class Codebook {
 public:
  // vectors is words x dim, one codeword per row; row 0 must be all zero
  explicit Codebook(Mat vectors);

  // unit Gaussian entries, codeword 0 zeroed
  static Codebook gaussian(Index words, Index dim, std::uint64_t seed);

  Index words() const { return vectors_.rows(); }
  Index dim() const { return vectors_.cols(); }
  const Mat& vectors() const { return vectors_; }

 private:
  Mat vectors_;
};

struct ScaleLadder {
  std::vector<std::pair<Index, Index>> sizes;

  // "1x1,2x2,4x4,8x8"
  static ScaleLadder parse(const std::string& text);
  std::string str() const;

  int steps() const { return static_cast<int>(sizes.size()); }
  // non-empty, non-decreasing per axis, final entry == (h, w)
  void validateFor(Index h, Index w) const;
};

// nearest codeword per location, ties to the lowest index
TokenMap quantizeNearest(const Tensor3& field, const Codebook& cb);
Tensor3 dequantize(const TokenMap& tokens, const Codebook& cb);

std::vector<TokenMap> encodeMultiscale(const Tensor3& f, const ScaleLadder& ladder,
                                       const Codebook& cb,
                                       resample::Kind up_kind = resample::Kind::linear);

struct Encoding {
  std::vector<TokenMap> tokens;
  std::vector<Scalar> mse;  // mean squared residual after each scale
  Tensor3 reconstruction;   // fhat_K
};

Encoding encodeMultiscaleTraced(const Tensor3& f, const ScaleLadder& ladder,
                                const Codebook& cb,
                                resample::Kind up_kind = resample::Kind::linear);

Tensor3 reconstruct(const std::vector<TokenMap>& tokens, const ScaleLadder& ladder,
                    const Codebook& cb, resample::Kind up_kind = resample::Kind::linear);

}  // namespace nsg::codec
