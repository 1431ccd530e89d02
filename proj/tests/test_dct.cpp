#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsg/dct.hpp"
#include "nsg/rng.hpp"

using namespace nsg;

namespace {

// independent of dctMatrix: the textbook sum, no shared scaling code
Mat naiveDct2(const Mat& x) {
  const Index h = x.rows(), w = x.cols();
  const double pi = std::acos(-1.0);
  Mat out(h, w);
  for (Index ki = 0; ki < h; ++ki)
    for (Index kj = 0; kj < w; ++kj) {
      double acc = 0;
      for (Index i = 0; i < h; ++i)
        for (Index j = 0; j < w; ++j)
          acc += x(i, j) *
                 std::cos(pi * (2.0 * static_cast<double>(i) + 1.0) * static_cast<double>(ki) /
                          (2.0 * static_cast<double>(h))) *
                 std::cos(pi * (2.0 * static_cast<double>(j) + 1.0) * static_cast<double>(kj) /
                          (2.0 * static_cast<double>(w)));
      const double si = ki == 0 ? std::sqrt(1.0 / static_cast<double>(h))
                                : std::sqrt(2.0 / static_cast<double>(h));
      const double sj = kj == 0 ? std::sqrt(1.0 / static_cast<double>(w))
                                : std::sqrt(2.0 / static_cast<double>(w));
      out(ki, kj) = si * sj * acc;
    }
  return out;
}

Mat randomMat(Index h, Index w, std::uint64_t seed) {
  rng::Stream rs(seed);
  Mat x(h, w);
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < w; ++j) x(i, j) = rs.normal();
  return x;
}

}  // namespace

TEST_CASE("dctMatrix rows are orthonormal") {
  for (Index n : {1, 2, 3, 5, 8, 17, 64}) {
    const Mat d = spectral::dctMatrix(n);
    const Mat gram = d * d.transpose();
    CHECK((gram - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK_THROWS_AS(spectral::dctMatrix(0), std::invalid_argument);
}

TEST_CASE("dctMatrixCached returns the same coefficients as dctMatrix") {
  const Mat& cached = spectral::dctMatrixCached(7);
  CHECK(cached == spectral::dctMatrix(7));
  CHECK(&cached == &spectral::dctMatrixCached(7));
}

TEST_CASE("dct2 matches the quadruple-loop definition") {
  for (auto [h, w] : {std::pair<Index, Index>{1, 1}, {1, 6}, {4, 4}, {3, 7}, {8, 5}}) {
    const Mat x = randomMat(h, w, rng::combine(11, h, w));
    const Mat fast = spectral::dct2(x);
    const Mat slow = naiveDct2(x);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("idct2 inverts dct2 on every size 1..64") {
  for (Index h = 1; h <= 64; h += (h < 8 ? 1 : 7)) {
    for (Index w = 1; w <= 64; w += (w < 8 ? 1 : 9)) {
      const Mat x = randomMat(h, w, rng::combine(3, h, w));
      const Mat back = spectral::idct2(spectral::dct2(x));
      CHECK((back - x).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("dct2 preserves energy") {
  for (auto [h, w] : {std::pair<Index, Index>{2, 2}, {5, 3}, {16, 16}, {31, 64}}) {
    const Mat x = randomMat(h, w, rng::combine(7, h, w));
    const Mat s = spectral::dct2(x);
    const double ex = x.squaredNorm(), es = s.squaredNorm();
    CHECK(std::abs(ex - es) / ex < 1e-9);
  }
}

TEST_CASE("dct2 of a constant grid is a pure DC term") {
  const Mat x = Mat::Constant(6, 9, 2.5);
  const Mat s = spectral::dct2(x);
  CHECK(s(0, 0) == doctest::Approx(2.5 * std::sqrt(54.0)).epsilon(1e-12));
  Mat rest = s;
  rest(0, 0) = 0;
  CHECK(rest.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dct2 rejects empty and non-finite input") {
  CHECK_THROWS_AS(spectral::dct2(Mat(0, 4)), std::invalid_argument);
  Mat bad = Mat::Zero(2, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(spectral::dct2(bad), std::domain_error);
  CHECK_THROWS_AS(spectral::idct2(bad), std::domain_error);
}

TEST_CASE("embedLowBand overwrites exactly the source-shaped corner") {
  const Mat target = randomMat(8, 10, 21);
  const Mat source = randomMat(3, 4, 22);

  SUBCASE("amplitude preserving scales by the area ratio") {
    const Mat out = spectral::embedLowBand(target, source, true);
    const double alpha = std::sqrt(80.0 / 12.0);
    CHECK((out.topLeftCorner(3, 4) - alpha * source).cwiseAbs().maxCoeff() < 1e-12);
    // everything outside the corner is untouched, bit for bit
    for (Index i = 0; i < 8; ++i)
      for (Index j = 0; j < 10; ++j)
        if (i >= 3 || j >= 4) CHECK(out(i, j) == target(i, j));
  }

  SUBCASE("raw copy uses alpha = 1") {
    const Mat out = spectral::embedLowBand(target, source, false);
    CHECK(out.topLeftCorner(3, 4) == source);
  }

  SUBCASE("source larger than target is rejected") {
    CHECK_THROWS_AS(spectral::embedLowBand(source, target, true), std::invalid_argument);
  }
}

TEST_CASE("bandEnergy splits total energy at the cut") {
  const Mat s = randomMat(6, 7, 31);
  for (Index hc : {Index(0), Index(2), Index(6)})
    for (Index wc : {Index(0), Index(3), Index(7)}) {
      const auto [low, high] = spectral::bandEnergy(s, hc, wc);
      CHECK(low == doctest::Approx(s.topLeftCorner(hc, wc).squaredNorm()).epsilon(1e-12));
      CHECK(low + high == doctest::Approx(s.squaredNorm()).epsilon(1e-12));
    }
  CHECK_THROWS_AS(spectral::bandEnergy(s, 7, 0), std::invalid_argument);
  CHECK_THROWS_AS(spectral::bandEnergy(s, 0, 8), std::invalid_argument);
}
