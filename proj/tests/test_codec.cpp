#include <doctest.h>

#include <cmath>
#include <limits>

#include "nsg/codec.hpp"
#include "nsg/demo.hpp"
#include "nsg/rng.hpp"

using namespace nsg;

namespace {

Tensor3 randomTensor(Index h, Index w, Index c, std::uint64_t seed) {
  rng::Stream rs(seed);
  Tensor3 t(h, w, c);
  for (Index n = 0; n < t.size(); ++n) t.data()[n] = rs.normal();
  return t;
}

}  // namespace

TEST_CASE("codebooks pin codeword 0 to the zero vector") {
  Mat ok(3, 2);
  ok << 0, 0, 1, 2, -1, 0.5;
  CHECK_NOTHROW(codec::Codebook{ok});
  Mat bad = ok;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(codec::Codebook{bad}, std::invalid_argument);
  const codec::Codebook g = codec::Codebook::gaussian(16, 4, 11);
  CHECK(g.vectors().row(0).isZero(0.0));
  CHECK(g.words() == 16);
  CHECK(g.dim() == 4);
  // seeded construction is reproducible
  CHECK(g.vectors() == codec::Codebook::gaussian(16, 4, 11).vectors());
}

TEST_CASE("quantizeNearest matches a brute-force scan") {
  const codec::Codebook cb = codec::Codebook::gaussian(24, 3, 13);
  const Tensor3 field = randomTensor(6, 5, 3, 14);
  const TokenMap tokens = codec::quantizeNearest(field, cb);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 5; ++j) {
      Index best = 0;
      Scalar best_d = std::numeric_limits<Scalar>::infinity();
      for (Index v = 0; v < cb.words(); ++v) {
        const Scalar d =
            (field.site(i, j).transpose() - cb.vectors().row(v)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = v;
        }
      }
      CHECK(tokens(i, j) == static_cast<std::uint32_t>(best));
    }
}

TEST_CASE("ties resolve to the lowest codeword index") {
  Mat v(3, 1);
  v << 0.0, 1.0, 1.0;  // codewords 1 and 2 are identical
  const codec::Codebook cb{v};
  Tensor3 field(1, 1, 1);
  field(0, 0, 0) = 1.0;
  CHECK(codec::quantizeNearest(field, cb)(0, 0) == 1);
}

TEST_CASE("dequantize inverts quantize on exact codewords") {
  const codec::Codebook cb = codec::Codebook::gaussian(10, 4, 15);
  Tensor3 field(2, 5, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 5; ++j)
      field.site(i, j) = cb.vectors().row(i * 5 + j).transpose();
  const TokenMap tokens = codec::quantizeNearest(field, cb);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 5; ++j) CHECK(tokens(i, j) == static_cast<std::uint32_t>(i * 5 + j));
  const Tensor3 back = codec::dequantize(tokens, cb);
  CHECK(back == field);
}

TEST_CASE("dequantize rejects out-of-range tokens") {
  const codec::Codebook cb = codec::Codebook::gaussian(4, 2, 16);
  TokenMap tokens(1, 1);
  tokens(0, 0) = 4;
  CHECK_THROWS_AS(codec::dequantize(tokens, cb), std::domain_error);
}

TEST_CASE("scale ladders parse, print and validate") {
  const codec::ScaleLadder ladder = codec::ScaleLadder::parse("1x1,2x2,4x4,8x8");
  CHECK(ladder.steps() == 4);
  CHECK(ladder.str() == "1x1,2x2,4x4,8x8");
  CHECK_NOTHROW(ladder.validateFor(8, 8));
  CHECK_THROWS_AS(ladder.validateFor(8, 16), std::invalid_argument);
  CHECK_THROWS_AS(codec::ScaleLadder::parse("1x1,x4"), std::invalid_argument);
  CHECK_THROWS_AS(codec::ScaleLadder::parse("3"), std::invalid_argument);
  CHECK_THROWS_AS(codec::ScaleLadder::parse("2x2,1x1").validateFor(1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(codec::ScaleLadder{}.validateFor(1, 1), std::invalid_argument);
}

TEST_CASE("multiscale encoding refines monotonically") {
  // with nearest upsampling the upsample is the scaled adjoint of the area
  // downsample, so snapping to the nearest codeword (zero admissible) can
  // never raise the full-resolution MSE; bilinear loses that pairing and
  // rises on a few percent of steps
  const codec::ScaleLadder ladder = codec::ScaleLadder::parse("1x1,2x2,4x4,8x8");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const codec::Codebook cb = codec::Codebook::gaussian(32, 4, rng::combine(17, seed));
    const Tensor3 f = demo::makeBlobs(8, 8, 4, seed);
    const codec::Encoding enc =
        codec::encodeMultiscaleTraced(f, ladder, cb, resample::Kind::nearest);
    REQUIRE(enc.mse.size() == 4);
    for (std::size_t k = 1; k < enc.mse.size(); ++k) CHECK(enc.mse[k] <= enc.mse[k - 1]);
    const Scalar direct = (f.asVector() - enc.reconstruction.asVector()).squaredNorm() /
                          static_cast<Scalar>(f.size());
    CHECK(enc.mse.back() == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("reconstruct replays the token stream exactly") {
  const codec::ScaleLadder ladder = codec::ScaleLadder::parse("1x1,3x2,6x4");
  const codec::Codebook cb = codec::Codebook::gaussian(12, 2, 18);
  const Tensor3 f = randomTensor(6, 4, 2, 19);
  const codec::Encoding enc = codec::encodeMultiscaleTraced(f, ladder, cb);
  const Tensor3 replay = codec::reconstruct(enc.tokens, ladder, cb);
  CHECK(replay == enc.reconstruction);
  CHECK(codec::encodeMultiscale(f, ladder, cb) == enc.tokens);
}

TEST_CASE("a zero field encodes to the pinned zero codeword everywhere") {
  const codec::ScaleLadder ladder = codec::ScaleLadder::parse("1x1,2x2");
  const codec::Codebook cb = codec::Codebook::gaussian(8, 3, 20);
  const Tensor3 zero(2, 2, 3);
  const codec::Encoding enc = codec::encodeMultiscaleTraced(zero, ladder, cb);
  for (const TokenMap& t : enc.tokens)
    CHECK(t == TokenMap::Zero(t.rows(), t.cols()));
  CHECK(enc.mse.back() == 0.0);
}

TEST_CASE("encode validates shapes") {
  const codec::ScaleLadder ladder = codec::ScaleLadder::parse("1x1,2x2");
  const codec::Codebook cb = codec::Codebook::gaussian(8, 3, 21);
  CHECK_THROWS_AS(codec::encodeMultiscale(randomTensor(2, 2, 2, 22), ladder, cb),
                  std::invalid_argument);
  CHECK_THROWS_AS(codec::encodeMultiscale(randomTensor(4, 4, 3, 23), ladder, cb),
                  std::invalid_argument);
  std::vector<TokenMap> wrong{TokenMap::Zero(1, 1)};
  CHECK_THROWS_AS(codec::reconstruct(wrong, ladder, cb), std::invalid_argument);
}
