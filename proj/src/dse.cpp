#include "nsg/dse.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "nsg/dct.hpp"

namespace nsg::dse {
namespace {

void checkShapes(Index sh, Index sw, Index th, Index tw) {
  if (sh < 1 || sw < 1) throw std::invalid_argument("buildPrior: empty source");
  if (th < sh || tw < sw)
    throw std::invalid_argument("buildPrior: target must not be smaller than source");
}

double bandScale(Index sh, Index sw, Index th, Index tw, bool amplitude_preserving) {
  if (!amplitude_preserving) return 1.0;
  return std::sqrt(static_cast<double>(th * tw) / static_cast<double>(sh * sw));
}

// Interpolation rows keep at most two taps, so the plain upsample is applied
// as indexed axpys instead of a dense product. Weights replicate
// resample::interpMatrix exactly.
struct Taps {
  std::vector<Index> lo, hi;
  std::vector<Scalar> wlo, whi;
};

Taps makeTaps(Index src, Index dst, resample::Kind kind) {
  Taps t;
  t.lo.resize(dst);
  t.hi.resize(dst);
  t.wlo.resize(dst);
  t.whi.resize(dst);
  for (Index i = 0; i < dst; ++i) {
    if (kind == resample::Kind::nearest) {
      t.lo[i] = i * src / dst;
      t.hi[i] = t.lo[i];
      t.wlo[i] = 1.0;
      t.whi[i] = 0.0;
      continue;
    }
    const double x = (static_cast<double>(i) + 0.5) * static_cast<double>(src) /
                         static_cast<double>(dst) -
                     0.5;
    const double clamped = std::min(static_cast<double>(src - 1), std::max(0.0, x));
    const Index lo = static_cast<Index>(std::floor(clamped));
    t.lo[i] = lo;
    t.hi[i] = std::min(lo + 1, src - 1);
    t.whi[i] = clamped - static_cast<double>(lo);
    t.wlo[i] = 1.0 - t.whi[i];
  }
  return t;
}

// Per-axis factors of the prior map. Low-band replacement collapses to
//   prior = Z + S_h * (alpha * D_h X D_w^T - G_h X G_w^T) * S_w^T,
// with Z = R_h X R_w^T the plain upsample, S = idct(target) restricted to the
// low band, and G = S^T R. Substituting dct2/idct2 shows this equals the
// spelled-out composition exactly; it just never materializes the full
// target-size spectrum, which keeps the per-step cost small next to a
// predictor evaluation.
//
// Two cosine symmetries cut the largest products in half. DCT rows satisfy
// D(k, N-1-n) = (-1)^k D(k, n), so contracting against X only needs the
// folded halves X(n) +- X(N-1-n), split by the parity of k. The synthesis
// side satisfies S(N-1-i, k) = (-1)^k S(i, k), so only the top half of the
// output rows is produced by GEMM and the bottom half is recovered as the
// +- butterfly of the same two partial products.
struct Ops {
  double alpha = 1.0;
  Index rows_he = 0, rows_ho = 0;  // band rows of even/odd parity along h
  Index rows_we = 0, rows_wo = 0;  // and along w
  Mat n_e, n_o;          // folded row-side factors, [alpha*dct; g] stacked per parity
  Mat d_w_e, d_w_o;      // folded column-side band factors
  Mat g_w_e, g_w_o;
  Mat s_w_e, s_w_o;      // top half of s_w, split by band-index parity
  Mat s_h_e, s_h_o;      // top half of s_h, split likewise
  Taps taps_h, taps_w;   // spatial upsample taps (mode's kind; linear for dse)
};

Mat parityCols(const Eigen::Ref<const Mat>& m, Index parity) {
  Mat out(m.rows(), (m.cols() - parity + 1) / 2);
  for (Index k = parity, j = 0; k < m.cols(); k += 2, ++j) out.col(j) = m.col(k);
  return out;
}

Mat parityRows(const Eigen::Ref<const Mat>& m, Index parity) {
  Mat out((m.rows() - parity + 1) / 2, m.cols());
  for (Index k = parity, i = 0; k < m.rows(); k += 2, ++i) out.row(i) = m.row(k);
  return out;
}

std::shared_ptr<const Ops> opsFor(Index sh, Index sw, Index th, Index tw,
                                  const PriorOptions& opt) {
  using Key = std::tuple<Index, Index, Index, Index, int, bool>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const Ops>> cache;
  const Key key{sh, sw, th, tw, static_cast<int>(opt.mode), opt.amplitude_preserving};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  auto ops = std::make_shared<Ops>();
  if (opt.mode == PriorMode::nearest || opt.mode == PriorMode::linear) {
    const auto kind = opt.mode == PriorMode::nearest ? resample::Kind::nearest
                                                     : resample::Kind::linear;
    ops->taps_h = makeTaps(sh, th, kind);
    ops->taps_w = makeTaps(sw, tw, kind);
  } else {
    ops->alpha = bandScale(sh, sw, th, tw, opt.amplitude_preserving);
    const Index fold_h = (sh + 1) / 2;  // kept columns after the +- fold
    const Index fold_w = (sw + 1) / 2;
    ops->rows_he = (sh + 1) / 2;
    ops->rows_ho = sh / 2;
    ops->rows_we = (sw + 1) / 2;
    ops->rows_wo = sw / 2;
    const Mat d_h = spectral::dctMatrixCached(sh);
    const Mat d_w = spectral::dctMatrixCached(sw);
    const Mat s_h = spectral::dctMatrixCached(th).transpose().leftCols(sh);
    const Mat s_w = spectral::dctMatrixCached(tw).transpose().leftCols(sw);
    ops->d_w_e = parityRows(d_w, 0).leftCols(fold_w);
    ops->d_w_o = parityRows(d_w, 1).leftCols(fold_w);
    ops->s_h_e = parityCols(s_h.topRows((th + 1) / 2), 0);
    ops->s_h_o = parityCols(s_h.topRows((th + 1) / 2), 1);
    ops->s_w_e = parityCols(s_w.topRows((tw + 1) / 2), 0);
    ops->s_w_o = parityCols(s_w.topRows((tw + 1) / 2), 1);
    const Mat scaled = ops->alpha * d_h;
    if (opt.mode == PriorMode::dse) {
      ops->taps_h = makeTaps(sh, th, resample::Kind::linear);
      ops->taps_w = makeTaps(sw, tw, resample::Kind::linear);
      const Mat r_h = resample::interpMatrix(sh, th, resample::Kind::linear);
      const Mat r_w = resample::interpMatrix(sw, tw, resample::Kind::linear);
      const Mat g_w = s_w.transpose() * r_w;
      ops->g_w_e = parityRows(g_w, 0).leftCols(fold_w);
      ops->g_w_o = parityRows(g_w, 1).leftCols(fold_w);
      const Mat g_h = s_h.transpose() * r_h;
      ops->n_e.resize(2 * ops->rows_he, fold_h);
      ops->n_e << parityRows(scaled, 0).leftCols(fold_h),
          parityRows(g_h, 0).leftCols(fold_h);
      ops->n_o.resize(2 * ops->rows_ho, fold_h);
      ops->n_o << parityRows(scaled, 1).leftCols(fold_h),
          parityRows(g_h, 1).leftCols(fold_h);
    } else {
      ops->n_e = parityRows(scaled, 0).leftCols(fold_h);
      ops->n_o = parityRows(scaled, 1).leftCols(fold_h);
    }
  }
  cache.emplace(key, ops);
  return ops;
}

// scratch reused across calls on each thread; bounded by the largest shape seen
struct Workspace {
  Mat xp, xm;              // +- folded source rows
  Mat y_e, y_o;            // band rows after the row-side contraction, per parity
  Mat ydp, ydm, ygp, ygm;  // one band row, folded along w
  Mat m_e, m_o;            // band row after the column-side contraction, per parity
  Mat aw, bw;              // partial products of the w-side butterfly
  Mat u;                   // band rows upsampled along w, parity-grouped along h
  Mat a, b;                // partial products of the h-side butterfly
  Vec zrow;                // one upsampled source row
};

Workspace& scratch() {
  thread_local Workspace ws;
  return ws;
}

void resizeIfNeeded(Mat& m, Index rows, Index cols) {
  if (m.rows() != rows || m.cols() != cols) m.resize(rows, cols);
}

void foldRows(const Eigen::Map<const Mat>& src, Mat& plus, Mat& minus) {
  const Index n = src.rows();
  for (Index i = 0; i < n / 2; ++i) {
    plus.row(i) = src.row(i) + src.row(n - 1 - i);
    minus.row(i) = src.row(i) - src.row(n - 1 - i);
  }
  if (n % 2 == 1) {
    plus.row(n / 2) = src.row(n / 2);
    minus.row(n / 2) = src.row(n / 2);
  }
}

// Final pass over output rows. Combines, in one sweep, the spatial upsample
// taps (z), the butterfly halves of the band correction (a +- b), and the
// guidance mix when logits are present:
//   prior  = z + band        guided = (1 + beta) * logits - beta * prior
void emitRows(const Tensor3& prev, const Ops& ops, const Tensor3* logits, Scalar beta,
              bool with_z, bool with_band, Tensor3& out) {
  const Index sw = prev.cols(), c = prev.channels();
  const Index th = out.rows(), tw = out.cols();
  const Index top_h = (th + 1) / 2;
  auto& ws = scratch();
  for (Index i = 0; i < th; ++i) {
    const Scalar* lrow = logits ? logits->data() + i * tw * c : nullptr;
    Scalar* orow = out.data() + i * tw * c;
    const Index half = i < top_h ? i : th - 1 - i;
    const Scalar bsign = i < top_h ? 1.0 : -1.0;
    if (with_z) {
      Eigen::Map<const Vec> xa(prev.data() + ops.taps_h.lo[i] * sw * c, sw * c);
      Eigen::Map<const Vec> xb(prev.data() + ops.taps_h.hi[i] * sw * c, sw * c);
      ws.zrow = ops.taps_h.wlo[i] * xa + ops.taps_h.whi[i] * xb;
    }
    for (Index j = 0; j < tw; ++j) {
      Eigen::Map<Vec> oseg(orow + j * c, c);
      if (with_z) {
        auto z = ops.taps_w.wlo[j] * ws.zrow.segment(ops.taps_w.lo[j] * c, c) +
                 ops.taps_w.whi[j] * ws.zrow.segment(ops.taps_w.hi[j] * c, c);
        if (with_band) {
          auto band = ws.a.row(half).segment(j * c, c).transpose() +
                      bsign * ws.b.row(half).segment(j * c, c).transpose();
          if (lrow)
            oseg = (1.0 + beta) * Eigen::Map<const Vec>(lrow + j * c, c) -
                   beta * (z + band);
          else
            oseg = z + band;
        } else if (lrow) {
          oseg = (1.0 + beta) * Eigen::Map<const Vec>(lrow + j * c, c) - beta * z;
        } else {
          oseg = z;
        }
      } else {
        auto band = ws.a.row(half).segment(j * c, c).transpose() +
                    bsign * ws.b.row(half).segment(j * c, c).transpose();
        if (lrow)
          oseg = (1.0 + beta) * Eigen::Map<const Vec>(lrow + j * c, c) - beta * band;
        else
          oseg = band;
      }
    }
  }
}

// logits == nullptr builds the prior itself; otherwise out is the guided map.
void fusedKernel(const Tensor3& prev, Index th, Index tw, const PriorOptions& opt,
                 const Tensor3* logits, Scalar beta, Tensor3& out) {
  checkShapes(prev.rows(), prev.cols(), th, tw);
  const Index sh = prev.rows(), sw = prev.cols(), c = prev.channels();
  if (out.rows() != th || out.cols() != tw || out.channels() != c) out = Tensor3(th, tw, c);
  const auto ops = opsFor(sh, sw, th, tw, opt);
  auto& ws = scratch();

  if (opt.mode == PriorMode::nearest || opt.mode == PriorMode::linear) {
    emitRows(prev, *ops, logits, beta, true, false, out);
    return;
  }

  // row-side band contraction on the folded source
  const Index fold_h = (sh + 1) / 2;
  resizeIfNeeded(ws.xp, fold_h, sw * c);
  resizeIfNeeded(ws.xm, fold_h, sw * c);
  const auto xf = prev.flat();
  for (Index n = 0; n < sh / 2; ++n) {
    ws.xp.row(n) = xf.row(n) + xf.row(sh - 1 - n);
    ws.xm.row(n) = xf.row(n) - xf.row(sh - 1 - n);
  }
  if (sh % 2 == 1) {
    ws.xp.row(fold_h - 1) = xf.row(fold_h - 1);
    ws.xm.row(fold_h - 1) = xf.row(fold_h - 1);
  }
  resizeIfNeeded(ws.y_e, ops->n_e.rows(), sw * c);
  resizeIfNeeded(ws.y_o, ops->n_o.rows(), sw * c);
  ws.y_e.noalias() = ops->n_e * ws.xp;
  if (ops->n_o.rows() > 0) ws.y_o.noalias() = ops->n_o * ws.xm;

  // column-side contraction and upsample, one band row at a time; rows land
  // in ws.u grouped by parity so the h butterfly can slice them contiguously
  const bool subtract_seen = opt.mode == PriorMode::dse;
  const Index fold_w = (sw + 1) / 2;
  const Index top_w = (tw + 1) / 2;
  resizeIfNeeded(ws.ydp, fold_w, c);
  resizeIfNeeded(ws.ydm, fold_w, c);
  resizeIfNeeded(ws.m_e, ops->rows_we, c);
  resizeIfNeeded(ws.m_o, ops->rows_wo, c);
  resizeIfNeeded(ws.aw, top_w, c);
  resizeIfNeeded(ws.bw, top_w, c);
  resizeIfNeeded(ws.u, sh, tw * c);
  if (subtract_seen) {
    resizeIfNeeded(ws.ygp, fold_w, c);
    resizeIfNeeded(ws.ygm, fold_w, c);
  }
  for (Index k = 0; k < sh; ++k) {
    const Index parity = k % 2;
    const Index r = k / 2;
    const Mat& y = parity == 0 ? ws.y_e : ws.y_o;
    const Index block = parity == 0 ? ops->rows_he : ops->rows_ho;
    foldRows(Eigen::Map<const Mat>(y.data() + r * sw * c, sw, c), ws.ydp, ws.ydm);
    ws.m_e.noalias() = ops->d_w_e * ws.ydp;
    ws.m_o.noalias() = ops->d_w_o * ws.ydm;
    if (subtract_seen) {
      foldRows(Eigen::Map<const Mat>(y.data() + (block + r) * sw * c, sw, c), ws.ygp,
               ws.ygm);
      ws.m_e.noalias() -= ops->g_w_e * ws.ygp;
      ws.m_o.noalias() -= ops->g_w_o * ws.ygm;
    }
    ws.aw.noalias() = ops->s_w_e * ws.m_e;
    if (ops->rows_wo > 0)
      ws.bw.noalias() = ops->s_w_o * ws.m_o;
    else
      ws.bw.setZero();
    const Index slot = parity == 0 ? r : ops->rows_he + r;
    Scalar* urow = ws.u.data() + slot * tw * c;
    for (Index j = 0; j < top_w; ++j)
      Eigen::Map<Vec>(urow + j * c, c) =
          ws.aw.row(j).transpose() + ws.bw.row(j).transpose();
    for (Index j = 0; j < tw / 2; ++j)
      Eigen::Map<Vec>(urow + (tw - 1 - j) * c, c) =
          ws.aw.row(j).transpose() - ws.bw.row(j).transpose();
  }

  // output butterfly: top half rows by GEMM, bottom half recovered as a -+ b
  const Index top_h = (th + 1) / 2;
  resizeIfNeeded(ws.a, top_h, tw * c);
  resizeIfNeeded(ws.b, top_h, tw * c);
  ws.a.noalias() = ops->s_h_e * ws.u.topRows(ops->rows_he);
  if (ops->rows_ho > 0)
    ws.b.noalias() = ops->s_h_o * ws.u.bottomRows(ops->rows_ho);
  else
    ws.b.setZero();

  emitRows(prev, *ops, logits, beta, opt.mode == PriorMode::dse, true, out);
}

}  // namespace

PriorMode parsePriorMode(const std::string& name) {
  if (name == "nearest") return PriorMode::nearest;
  if (name == "linear") return PriorMode::linear;
  if (name == "dse") return PriorMode::dse;
  if (name == "dse_zero") return PriorMode::dse_zero;
  throw std::invalid_argument("parsePriorMode: unknown mode '" + name + "'");
}

std::string toString(PriorMode m) {
  switch (m) {
    case PriorMode::nearest: return "nearest";
    case PriorMode::linear: return "linear";
    case PriorMode::dse: return "dse";
    case PriorMode::dse_zero: return "dse_zero";
  }
  throw std::invalid_argument("toString: bad PriorMode");
}

namespace detail {

Mat buildPriorSpectral(const Eigen::Ref<const Mat>& prev, Index th, Index tw,
                       const PriorOptions& opt) {
  checkShapes(prev.rows(), prev.cols(), th, tw);
  requireFinite(prev, "buildPrior");
  switch (opt.mode) {
    case PriorMode::nearest:
      return resample::interpolate(prev, th, tw, resample::Kind::nearest);
    case PriorMode::linear:
      return resample::interpolate(prev, th, tw, resample::Kind::linear);
    case PriorMode::dse: {
      const Mat interp = resample::interpolate(prev, th, tw, resample::Kind::linear);
      const Spectrum embedded = spectral::embedLowBand(spectral::dct2(interp),
                                                       spectral::dct2(prev),
                                                       opt.amplitude_preserving);
      return spectral::idct2(embedded);
    }
    case PriorMode::dse_zero: {
      const Spectrum empty = Spectrum::Zero(th, tw);
      const Spectrum embedded =
          spectral::embedLowBand(empty, spectral::dct2(prev), opt.amplitude_preserving);
      return spectral::idct2(embedded);
    }
  }
  throw std::invalid_argument("buildPrior: bad PriorMode");
}

Tensor3 rowsApply(const Mat& a, const Tensor3& t) {
  Tensor3 out(a.rows(), t.cols(), t.channels());
  out.flat().noalias() = a * t.flat();
  return out;
}

Tensor3 colsApply(const Mat& b, const Tensor3& t) {
  Tensor3 out(t.rows(), b.rows(), t.channels());
  const Index c = t.channels();
  for (Index i = 0; i < t.rows(); ++i) {
    Eigen::Map<const Mat> ti(t.data() + i * t.cols() * c, t.cols(), c);
    Eigen::Map<Mat> oi(out.data() + i * b.rows() * c, b.rows(), c);
    oi.noalias() = b * ti;
  }
  return out;
}

}  // namespace detail

Mat buildPrior(const Eigen::Ref<const Mat>& prev, Index th, Index tw,
               const PriorOptions& opt) {
  return detail::buildPriorSpectral(prev, th, tw, opt);
}

Tensor3 buildPrior(const Tensor3& prev, Index th, Index tw, const PriorOptions& opt) {
  Tensor3 out;
  buildPriorInto(prev, th, tw, opt, out);
  return out;
}

void buildPriorInto(const Tensor3& prev, Index th, Index tw, const PriorOptions& opt,
                    Tensor3& out) {
  requireFinite(prev, "buildPrior");
  fusedKernel(prev, th, tw, opt, nullptr, 0.0, out);
}

void guidedPriorStep(const Tensor3& logits, const Tensor3& prev, Scalar beta,
                     const PriorOptions& opt, Tensor3& out) {
  if (beta < 0) throw std::domain_error("guidedPriorStep: beta must be non-negative");
  if (logits.channels() != prev.channels())
    throw std::invalid_argument("guidedPriorStep: channel counts differ");
  if (logits.rows() < prev.rows() || logits.cols() < prev.cols())
    throw std::invalid_argument("guidedPriorStep: logits smaller than the previous scale");
  fusedKernel(prev, logits.rows(), logits.cols(), opt, &logits, beta, out);
}

}  // namespace nsg::dse
