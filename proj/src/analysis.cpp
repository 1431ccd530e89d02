#include "nsg/analysis.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "nsg/dse.hpp"
#include "nsg/guidance.hpp"
#include "nsg/rng.hpp"

namespace nsg::analysis {
namespace {

using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>;

const CMat& dftMatrixCached(Index n) {
  static std::mutex mutex;
  static std::map<Index, CMat> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    CMat w(n, n);
    const double step = -2.0 * 3.14159265358979323846264338327950288 /
                        static_cast<double>(n);
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < n; ++j)
        w(k, j) = std::polar(1.0, step * static_cast<double>(k) * static_cast<double>(j));
    it = cache.emplace(n, std::move(w)).first;
  }
  return it->second;
}

Index signedFreq(Index k, Index n) { return 2 * k <= n ? k : k - n; }

}  // namespace

RadialProfile radialSpectrum(const Eigen::Ref<const Mat>& x) {
  if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("radialSpectrum: empty input");
  requireFinite(x, "radialSpectrum");
  const Index h = x.rows(), w = x.cols();
  const CMat f = (dftMatrixCached(h) * x.cast<std::complex<double>>() *
                  dftMatrixCached(w).transpose()) /
                 std::sqrt(static_cast<double>(h * w));
  const double rmax = std::hypot(static_cast<double>(h) / 2.0, static_cast<double>(w) / 2.0);
  const std::size_t bins = static_cast<std::size_t>(std::floor(rmax)) + 1;
  std::vector<Scalar> amp(bins, 0), count(bins, 0);
  RadialProfile out;
  out.energy.assign(bins, 0);
  for (Index ki = 0; ki < h; ++ki)
    for (Index kj = 0; kj < w; ++kj) {
      const double r = std::hypot(static_cast<double>(signedFreq(ki, h)),
                                  static_cast<double>(signedFreq(kj, w)));
      const std::size_t b = std::min(bins - 1, static_cast<std::size_t>(std::floor(r)));
      const double mag = std::abs(f(ki, kj));
      amp[b] += mag;
      out.energy[b] += mag * mag;
      count[b] += 1;
    }
  out.log_amplitude.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double mean = count[b] > 0 ? amp[b] / count[b] : 0.0;
    out.log_amplitude[b] = std::log(std::max(mean, kLogFloor));
  }
  return out;
}

std::vector<Scalar> deltaLogMagnitude(const Tensor3& a, const Tensor3& b) {
  requireSameShape(a, b, "deltaLogMagnitude");
  requireFinite(a, "deltaLogMagnitude");
  requireFinite(b, "deltaLogMagnitude");
  std::vector<Scalar> delta;
  for (Index c = 0; c < a.channels(); ++c) {
    const RadialProfile pa = radialSpectrum(a.channelCopy(c));
    const RadialProfile pb = radialSpectrum(b.channelCopy(c));
    if (delta.empty()) delta.assign(pa.log_amplitude.size(), 0);
    for (std::size_t i = 0; i < delta.size(); ++i)
      delta[i] += pa.log_amplitude[i] - pb.log_amplitude[i];
  }
  for (auto& d : delta) d /= static_cast<Scalar>(a.channels());
  return delta;
}

Scalar nyquistBin(Index prev_h, Index prev_w, Index cur_h, Index cur_w) {
  if (prev_h < 1 || prev_w < 1) throw std::invalid_argument("nyquistBin: empty previous grid");
  if (cur_h < prev_h || cur_w < prev_w)
    throw std::invalid_argument("nyquistBin: current grid smaller than previous");
  return static_cast<Scalar>(std::min(prev_h, prev_w)) / 2.0;
}

std::vector<BenchSize> parseBenchSizes(const std::string& text) {
  std::vector<BenchSize> sizes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    long v[3] = {0, 0, 0};
    const char* p = item.data();
    const char* end = item.data() + item.size();
    bool ok = true;
    for (int d = 0; d < 3 && ok; ++d) {
      auto r = std::from_chars(p, end, v[d]);
      ok = r.ec == std::errc() && v[d] > 0;
      p = r.ptr;
      if (d < 2) {
        ok = ok && p != end && *p == 'x';
        ++p;
      }
    }
    if (!ok || p != end)
      throw std::invalid_argument("parseBenchSizes: bad entry '" + item + "'");
    sizes.push_back({v[0], v[1], v[2]});
    pos = comma + 1;
  }
  return sizes;
}

std::vector<BenchRow> latencyBench(const std::vector<BenchSize>& sizes, int reps) {
  if (reps < 10) throw std::domain_error("latencyBench: need at least 10 reps");
  if (sizes.empty()) throw std::domain_error("latencyBench: no sizes given");
  std::vector<BenchRow> rows;
  volatile double sink = 0;
  for (const BenchSize& size : sizes) {
    const Index th = 2 * size.h, tw = 2 * size.w, v = size.v;
    rng::Stream rs(rng::combine(0x62656e63, static_cast<std::uint64_t>(size.h),
                                static_cast<std::uint64_t>(size.v)));
    Mat weights(v, v);
    for (Index i = 0; i < v; ++i)
      for (Index j = 0; j < v; ++j) weights(i, j) = rs.normal();
    Mat activations(v, th * tw);
    for (Index i = 0; i < v; ++i)
      for (Index j = 0; j < th * tw; ++j) activations(i, j) = rs.normal();
    Mat logits_out(v, th * tw);
    Tensor3 prev(size.h, size.w, v), lk(th, tw, v);
    for (Index n = 0; n < prev.size(); ++n) prev.data()[n] = rs.normal();
    for (Index n = 0; n < lk.size(); ++n) lk.data()[n] = rs.normal();
    const dse::PriorOptions opt{dse::PriorMode::dse, true};
    const Scalar beta = 1.0;

    auto time_op = [&](auto&& op) {
      for (int i = 0; i < 3; ++i) op();  // warmup, also fills operator caches
      std::vector<double> secs(static_cast<std::size_t>(reps));
      for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        op();
        const auto t1 = std::chrono::steady_clock::now();
        secs[static_cast<std::size_t>(r)] = std::chrono::duration<double>(t1 - t0).count();
      }
      double mean = 0;
      for (double s : secs) mean += s;
      mean /= static_cast<double>(reps);
      double var = 0;
      for (double s : secs) var += (s - mean) * (s - mean);
      const double stddev = std::sqrt(var / static_cast<double>(reps));
      return std::pair<double, double>(mean, stddev);
    };

    const auto [pred_mean, pred_std] = time_op([&]() {
      logits_out.noalias() = weights * activations;
      sink = sink + logits_out(0, 0);
    });
    Tensor3 guided(th, tw, v);
    const auto [dse_mean, dse_std] = time_op([&]() {
      dse::guidedPriorStep(lk, prev, beta, opt, guided);
      sink = sink + guided(0, 0, 0);
    });
    const double ratio = dse_mean / pred_mean;
    rows.push_back({size, "predictor", pred_mean, pred_std, 1.0});
    rows.push_back({size, "dse_ssg", dse_mean, dse_std, ratio});
  }
  (void)sink;
  return rows;
}

}  // namespace nsg::analysis
