#include "nsg/dct.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace nsg::spectral {

Mat dctMatrix(Index n) {
  if (n < 1) throw std::invalid_argument("dctMatrix: size must be positive");
  Mat d(n, n);
  const double pi = 3.14159265358979323846264338327950288;
  const double dc = std::sqrt(1.0 / static_cast<double>(n));
  const double ac = std::sqrt(2.0 / static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    const double scale = k == 0 ? dc : ac;
    for (Index j = 0; j < n; ++j)
      d(k, j) = scale * std::cos(pi * static_cast<double>(2 * j + 1) *
                                 static_cast<double>(k) / static_cast<double>(2 * n));
  }
  return d;
}

const Mat& dctMatrixCached(Index n) {
  static std::mutex mutex;
  static std::map<Index, Mat> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, dctMatrix(n)).first;
  return it->second;
}

Spectrum dct2(const Eigen::Ref<const Mat>& x) {
  if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("dct2: empty input");
  requireFinite(x, "dct2");
  const Mat& dh = dctMatrixCached(x.rows());
  const Mat& dw = dctMatrixCached(x.cols());
  return dh * x * dw.transpose();
}

Mat idct2(const Eigen::Ref<const Spectrum>& s) {
  if (s.rows() < 1 || s.cols() < 1) throw std::invalid_argument("idct2: empty input");
  requireFinite(s, "idct2");
  const Mat& dh = dctMatrixCached(s.rows());
  const Mat& dw = dctMatrixCached(s.cols());
  return dh.transpose() * s * dw;
}

Spectrum embedLowBand(const Spectrum& target, const Spectrum& source,
                      bool amplitude_preserving) {
  if (source.rows() > target.rows() || source.cols() > target.cols())
    throw std::invalid_argument("embedLowBand: source band exceeds target");
  if (source.rows() < 1 || source.cols() < 1)
    throw std::invalid_argument("embedLowBand: empty source");
  requireFinite(target, "embedLowBand");
  requireFinite(source, "embedLowBand");
  const double alpha =
      amplitude_preserving
          ? std::sqrt(static_cast<double>(target.rows() * target.cols()) /
                      static_cast<double>(source.rows() * source.cols()))
          : 1.0;
  Spectrum out = target;
  out.topLeftCorner(source.rows(), source.cols()) = alpha * source;
  return out;
}

std::pair<Scalar, Scalar> bandEnergy(const Spectrum& s, Index h_cut, Index w_cut) {
  if (h_cut < 0 || h_cut > s.rows() || w_cut < 0 || w_cut > s.cols())
    throw std::invalid_argument("bandEnergy: cut out of range");
  requireFinite(s, "bandEnergy");
  const Scalar low = s.topLeftCorner(h_cut, w_cut).squaredNorm();
  return {low, s.squaredNorm() - low};
}

}  // namespace nsg::spectral
