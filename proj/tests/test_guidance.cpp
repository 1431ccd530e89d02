#include <doctest.h>

#include <cmath>
#include <limits>

#include "nsg/guidance.hpp"
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

TEST_CASE("linear decay hits both endpoints exactly") {
  for (int steps : {1, 3, 4, 10}) {
    for (Scalar beta0 : {0.0, 0.4, 1.0, 2.5}) {
      guidance::Schedule s{beta0, steps, guidance::Decay::linear};
      CHECK(guidance::betaAt(s, 1) == beta0);
      CHECK(guidance::betaAt(s, steps) == beta0 / static_cast<Scalar>(steps));
      if (beta0 > 0)
        for (int k = 2; k <= steps; ++k)
          CHECK(guidance::betaAt(s, k) < guidance::betaAt(s, k - 1));
    }
  }
}

TEST_CASE("constant decay never moves") {
  guidance::Schedule s{0.7, 5, guidance::Decay::constant};
  for (int k = 1; k <= 5; ++k) CHECK(guidance::betaAt(s, k) == 0.7);
}

TEST_CASE("betaAt validates the schedule and the step") {
  guidance::Schedule s{1.0, 4, guidance::Decay::linear};
  CHECK_THROWS_AS(guidance::betaAt(s, 0), std::domain_error);
  CHECK_THROWS_AS(guidance::betaAt(s, 5), std::domain_error);
  s.beta0 = -1.0;
  CHECK_THROWS_AS(guidance::betaAt(s, 1), std::domain_error);
  s.beta0 = 1.0;
  s.steps = 0;
  CHECK_THROWS_AS(guidance::betaAt(s, 1), std::domain_error);
}

TEST_CASE("applySsg is an elementwise extrapolation away from the prior") {
  const Tensor3 lk = randomTensor(3, 4, 5, 101);
  const Tensor3 prior = randomTensor(3, 4, 5, 102);
  const Scalar beta = 0.6;
  const Tensor3 out = guidance::applySsg(lk, prior, beta);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j)
      for (Index c = 0; c < 5; ++c)
        CHECK(out(i, j, c) ==
              doctest::Approx(lk(i, j, c) + beta * (lk(i, j, c) - prior(i, j, c)))
                  .epsilon(1e-15));
}

TEST_CASE("beta 0 returns the logits unchanged") {
  const Tensor3 lk = randomTensor(2, 2, 7, 103);
  const Tensor3 prior = randomTensor(2, 2, 7, 104);
  CHECK(guidance::applySsg(lk, prior, 0.0) == lk);
}

TEST_CASE("applySsg validates shape, sign and finiteness") {
  const Tensor3 lk = randomTensor(2, 3, 4, 105);
  const Tensor3 prior = randomTensor(3, 2, 4, 106);
  CHECK_THROWS_AS(guidance::applySsg(lk, prior, 1.0), std::invalid_argument);
  const Tensor3 ok = randomTensor(2, 3, 4, 107);
  CHECK_THROWS_AS(guidance::applySsg(lk, ok, -0.5), std::domain_error);
  Tensor3 bad = ok;
  bad(0, 0, 0) = std::numeric_limits<Scalar>::infinity();
  CHECK_THROWS_AS(guidance::applySsg(lk, bad, 1.0), std::domain_error);
}

TEST_CASE("semanticResidual is the raw difference") {
  const Tensor3 lk = randomTensor(4, 4, 3, 108);
  const Tensor3 prior = randomTensor(4, 4, 3, 109);
  const Tensor3 delta = guidance::semanticResidual(lk, prior);
  CHECK((delta.asVector() - (lk.asVector() - prior.asVector())).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("closed form maximizes the surrogate") {
  rng::Stream rs(110);
  for (int t = 0; t < 25; ++t) {
    const Index dim = 1 + static_cast<Index>(rs.below(48));
    Vec lk(dim), delta(dim);
    for (Index i = 0; i < dim; ++i) lk[i] = 2.0 * rs.normal();
    for (Index i = 0; i < dim; ++i) delta[i] = rs.normal();
    const Scalar beta = rs.uniform(0.1, 2.0);
    const Vec closed = lk + beta * delta;

    // analytic gradient vanishes at the closed form
    CHECK(guidance::surrogateGradient(closed, lk, delta, beta)
              .lpNorm<Eigen::Infinity>() < 1e-12);

    // central differences agree with the analytic gradient at a probe point
    const Vec probe = lk + 0.37 * delta;
    const Vec analytic = guidance::surrogateGradient(probe, lk, delta, beta);
    const Scalar h = 1e-6;
    for (Index i = 0; i < dim; ++i) {
      Vec hi = probe, lo = probe;
      hi[i] += h;
      lo[i] -= h;
      const Scalar fd = (guidance::surrogateObjective(hi, lk, delta, beta) -
                         guidance::surrogateObjective(lo, lk, delta, beta)) /
                        (2 * h);
      CHECK(std::abs(fd - analytic[i]) < 1e-6);
    }

    // any fixed offset from the maximizer scores strictly worse
    Vec off = closed;
    off[static_cast<Index>(rs.below(static_cast<std::uint64_t>(dim)))] += 0.25;
    CHECK(guidance::surrogateObjective(off, lk, delta, beta) <
          guidance::surrogateObjective(closed, lk, delta, beta));

    // the objective gain over the raw logits is beta^2/2 ||delta||^2
    const Scalar gap = guidance::surrogateObjective(closed, lk, delta, beta) -
                       guidance::surrogateObjective(lk, lk, delta, beta);
    const Scalar expected = 0.5 * beta * beta * delta.squaredNorm();
    CHECK(std::abs(gap - expected) <= 1e-9 * std::max(expected, Scalar(1)));
  }
}

TEST_CASE("verifyClosedForm passes its own thresholds") {
  const guidance::VerifyReport rep = guidance::verifyClosedForm(64, 100, 7);
  CHECK(rep.pass());
  CHECK(rep.max_stationarity < 1e-5);
  CHECK(rep.max_fd_stationarity < 1e-5);
  CHECK(rep.max_fd_error < 1e-6);
  CHECK(rep.max_ascent_error < 1e-8);
  CHECK(rep.max_gap_error < 1e-9);
  CHECK_THROWS_AS(guidance::verifyClosedForm(0, 10, 1), std::domain_error);
}

TEST_CASE("surrogate helpers reject mismatched sizes") {
  Vec a = Vec::Zero(3), b = Vec::Zero(4);
  CHECK_THROWS_AS(guidance::surrogateObjective(a, b, a, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(guidance::surrogateGradient(a, a, b, 1.0), std::invalid_argument);
}

TEST_CASE("decay names round-trip") {
  CHECK((guidance::parseDecay("linear") == guidance::Decay::linear));
  CHECK((guidance::parseDecay("constant") == guidance::Decay::constant));
  CHECK(guidance::toString(guidance::Decay::constant) == "constant");
  CHECK_THROWS_AS(guidance::parseDecay("cosine"), std::invalid_argument);
}
