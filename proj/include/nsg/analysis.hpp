#pragma once

#include <string>
#include <vector>

#include "nsg/types.hpp"

// Radially averaged Fourier statistics and a small latency probe. Profiles
// use the centered 2D DFT magnitude averaged over annuli of unit width, so
// bin b collects frequencies with radius in [b, b+1).

namespace nsg::analysis {

inline constexpr Scalar kLogFloor = 1e-12;

struct RadialProfile {
  std::vector<Scalar> log_amplitude;  // log(max(mean |F| per annulus, floor))
  std::vector<Scalar> energy;         // sum |F|^2 per annulus, orthonormal scaling
};

RadialProfile radialSpectrum(const Eigen::Ref<const Mat>& x);

// per-bin mean over channels of log-amplitude(a) - log-amplitude(b)
std::vector<Scalar> deltaLogMagnitude(const Tensor3& a, const Tensor3& b);

// highest radial bin the previous scale can populate on the current grid
Scalar nyquistBin(Index prev_h, Index prev_w, Index cur_h, Index cur_w);

struct BenchSize {
  Index h = 0, w = 0, v = 0;
};

std::vector<BenchSize> parseBenchSizes(const std::string& text);  // "8x8x256,16x16x512"

// For each size (h, w, v): times one dense v x v matrix-apply predictor step
// at the doubled scale against buildPrior(dse) + applySsg for (h, w) ->
// (2h, 2w). ratio is dse_ssg mean over predictor mean.
struct BenchRow {
  BenchSize size;
  std::string op;  // "predictor" or "dse_ssg"
  double mean_s = 0;
  double std_s = 0;
  double ratio = 0;
};

std::vector<BenchRow> latencyBench(const std::vector<BenchSize>& sizes, int reps);

}  // namespace nsg::analysis
