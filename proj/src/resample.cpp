#include "nsg/resample.hpp"

#include <algorithm>
#include <cmath>

namespace nsg::resample {
namespace {

void checkUp(Index sh, Index sw, Index th, Index tw, const char* who) {
  if (th < sh || tw < sw)
    throw std::invalid_argument(std::string(who) + ": target must not be smaller than source");
  if (sh < 1 || sw < 1) throw std::invalid_argument(std::string(who) + ": empty source");
}

void checkDown(Index sh, Index sw, Index th, Index tw, const char* who) {
  if (th > sh || tw > sw)
    throw std::invalid_argument(std::string(who) + ": target must not be larger than source");
  if (th < 1 || tw < 1) throw std::invalid_argument(std::string(who) + ": empty target");
}

template <typename Core>
Tensor3 perChannel(const Tensor3& x, Index th, Index tw, Core&& core) {
  Tensor3 out(th, tw, x.channels());
  for (Index c = 0; c < x.channels(); ++c) out.setChannel(c, core(x.channelCopy(c)));
  return out;
}

}  // namespace

Kind parseKind(const std::string& name) {
  if (name == "nearest") return Kind::nearest;
  if (name == "linear") return Kind::linear;
  throw std::invalid_argument("parseKind: unknown kind '" + name + "'");
}

std::string toString(Kind k) { return k == Kind::nearest ? "nearest" : "linear"; }

Mat interpMatrix(Index src, Index dst, Kind kind) {
  if (src < 1 || dst < src) throw std::invalid_argument("interpMatrix: need 1 <= src <= dst");
  Mat w = Mat::Zero(dst, src);
  if (kind == Kind::nearest) {
    for (Index i = 0; i < dst; ++i) w(i, i * src / dst) = 1.0;
    return w;
  }
  for (Index i = 0; i < dst; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * static_cast<double>(src) /
                         static_cast<double>(dst) -
                     0.5;
    const double clamped = std::min(static_cast<double>(src - 1), std::max(0.0, x));
    const Index lo = static_cast<Index>(std::floor(clamped));
    const Index hi = std::min(lo + 1, src - 1);
    const double t = clamped - static_cast<double>(lo);
    w(i, lo) += 1.0 - t;
    w(i, hi) += t;
  }
  return w;
}

Mat areaMatrix(Index src, Index dst) {
  if (dst < 1 || dst > src) throw std::invalid_argument("areaMatrix: need 1 <= dst <= src");
  Mat w = Mat::Zero(dst, src);
  const double span = static_cast<double>(src) / static_cast<double>(dst);
  for (Index i = 0; i < dst; ++i) {
    const double lo = static_cast<double>(i) * span;
    const double hi = static_cast<double>(i + 1) * span;
    const Index first = static_cast<Index>(std::floor(lo));
    const Index last = std::min(src - 1, static_cast<Index>(std::ceil(hi)) - 1);
    for (Index s = first; s <= last; ++s) {
      const double overlap = std::min(hi, static_cast<double>(s + 1)) -
                             std::max(lo, static_cast<double>(s));
      if (overlap > 0) w(i, s) = overlap / span;
    }
  }
  return w;
}

Mat interpolate(const Eigen::Ref<const Mat>& x, Index th, Index tw, Kind kind) {
  checkUp(x.rows(), x.cols(), th, tw, "interpolate");
  requireFinite(x, "interpolate");
  const Mat rh = interpMatrix(x.rows(), th, kind);
  const Mat rw = interpMatrix(x.cols(), tw, kind);
  return rh * x * rw.transpose();
}

Tensor3 interpolate(const Tensor3& x, Index th, Index tw, Kind kind) {
  checkUp(x.rows(), x.cols(), th, tw, "interpolate");
  requireFinite(x, "interpolate");
  const Mat rh = interpMatrix(x.rows(), th, kind);
  const Mat rw = interpMatrix(x.cols(), tw, kind);
  return perChannel(x, th, tw, [&](const Mat& ch) -> Mat { return rh * ch * rw.transpose(); });
}

Mat downsampleArea(const Eigen::Ref<const Mat>& x, Index th, Index tw) {
  checkDown(x.rows(), x.cols(), th, tw, "downsampleArea");
  requireFinite(x, "downsampleArea");
  const Mat ah = areaMatrix(x.rows(), th);
  const Mat aw = areaMatrix(x.cols(), tw);
  return ah * x * aw.transpose();
}

Tensor3 downsampleArea(const Tensor3& x, Index th, Index tw) {
  checkDown(x.rows(), x.cols(), th, tw, "downsampleArea");
  requireFinite(x, "downsampleArea");
  const Mat ah = areaMatrix(x.rows(), th);
  const Mat aw = areaMatrix(x.cols(), tw);
  return perChannel(x, th, tw, [&](const Mat& ch) -> Mat { return ah * ch * aw.transpose(); });
}

}  // namespace nsg::resample
