#pragma once

#include <utility>

#include "nsg/types.hpp"

// Orthonormal 2D DCT-II and band surgery. dct2/idct2 are exact inverses and
// preserve energy (Parseval), which is what makes low-band replacement an
// energy-accounting operation rather than a heuristic.

namespace nsg::spectral {

// Row k holds orthonormal DCT-II basis vector k:
//   D(k, n) = s(k) * cos(pi * (2n + 1) * k / (2N)),
//   s(0) = sqrt(1/N), s(k>0) = sqrt(2/N)
Mat dctMatrix(Index n);

// shared per-size cache; safe to call from worker threads
const Mat& dctMatrixCached(Index n);

Spectrum dct2(const Eigen::Ref<const Mat>& x);
Mat idct2(const Eigen::Ref<const Spectrum>& s);

// Copies `source` over the low band of `target`. With amplitude_preserving
// the source is scaled by alpha = sqrt((Ht*Wt) / (Hs*Ws)) so constants keep
// their level across sizes; raw copy (alpha = 1) is the ablation.
Spectrum embedLowBand(const Spectrum& target, const Spectrum& source,
                      bool amplitude_preserving = true);

// (low, high) energy split at the given cuts; low + high == total energy
std::pair<Scalar, Scalar> bandEnergy(const Spectrum& s, Index h_cut, Index w_cut);

}  // namespace nsg::spectral
