#include "nsg/guidance.hpp"

#include <cmath>

#include "nsg/rng.hpp"

namespace nsg::guidance {

Decay parseDecay(const std::string& name) {
  if (name == "linear") return Decay::linear;
  if (name == "constant") return Decay::constant;
  throw std::invalid_argument("parseDecay: unknown decay '" + name + "'");
}

std::string toString(Decay d) { return d == Decay::linear ? "linear" : "constant"; }

Scalar betaAt(const Schedule& s, int k) {
  if (s.beta0 < 0) throw std::domain_error("betaAt: beta0 must be non-negative");
  if (s.steps < 1) throw std::domain_error("betaAt: schedule needs at least one step");
  if (k < 1 || k > s.steps) throw std::domain_error("betaAt: step out of range");
  if (s.decay == Decay::constant) return s.beta0;
  // (beta0 * K) / K is one ulp off for some beta0, so pin the first endpoint;
  // the last one is (beta0 * 1) / K == beta0 / K already
  if (k == 1) return s.beta0;
  return s.beta0 * static_cast<Scalar>(s.steps - (k - 1)) / static_cast<Scalar>(s.steps);
}

Tensor3 semanticResidual(const Tensor3& lk, const Tensor3& prior) {
  requireSameShape(lk, prior, "semanticResidual");
  requireFinite(lk, "semanticResidual");
  requireFinite(prior, "semanticResidual");
  Tensor3 out(lk.rows(), lk.cols(), lk.channels());
  out.asVector() = lk.asVector() - prior.asVector();
  return out;
}

Tensor3 applySsg(const Tensor3& lk, const Tensor3& prior, Scalar beta) {
  requireSameShape(lk, prior, "applySsg");
  requireFinite(lk, "applySsg");
  requireFinite(prior, "applySsg");
  if (!(beta >= 0)) throw std::domain_error("applySsg: beta must be non-negative");
  Tensor3 out(lk.rows(), lk.cols(), lk.channels());
  out.asVector() = lk.asVector() + beta * (lk.asVector() - prior.asVector());
  return out;
}

Scalar surrogateObjective(const Vec& lp, const Vec& lk, const Vec& delta, Scalar beta) {
  if (lp.size() != lk.size() || lp.size() != delta.size())
    throw std::invalid_argument("surrogateObjective: size mismatch");
  return beta * lp.dot(delta) - 0.5 * (lp - lk).squaredNorm();
}

Vec surrogateGradient(const Vec& lp, const Vec& lk, const Vec& delta, Scalar beta) {
  if (lp.size() != lk.size() || lp.size() != delta.size())
    throw std::invalid_argument("surrogateGradient: size mismatch");
  return beta * delta - (lp - lk);
}

VerifyReport verifyClosedForm(int dim, int trials, std::uint64_t seed) {
  if (dim < 1 || trials < 1)
    throw std::domain_error("verifyClosedForm: dim and trials must be positive");
  VerifyReport rep;
  rep.dim = dim;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    rng::Stream rs(rng::combine(seed, static_cast<std::uint64_t>(t)));
    Vec lk(dim), delta(dim);
    for (Index i = 0; i < dim; ++i) lk[i] = 3.0 * rs.normal();
    for (Index i = 0; i < dim; ++i) delta[i] = 2.0 * rs.normal();
    const Scalar beta = rs.uniform(0.2, 2.4);
    const Vec closed = lk + beta * delta;

    const Vec grad = surrogateGradient(closed, lk, delta, beta);
    rep.max_stationarity = std::max(rep.max_stationarity, grad.lpNorm<Eigen::Infinity>());

    // central differences, h = 1e-6: once at the maximizer, once off-optimum
    const Scalar h = 1e-6;
    auto fdGradient = [&](const Vec& at) {
      Vec g(dim);
      for (Index i = 0; i < dim; ++i) {
        Vec hi = at, lo = at;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (surrogateObjective(hi, lk, delta, beta) -
                surrogateObjective(lo, lk, delta, beta)) /
               (2 * h);
      }
      return g;
    };
    rep.max_fd_stationarity = std::max(rep.max_fd_stationarity, fdGradient(closed).norm());

    const Vec probe = lk + 0.3 * delta;
    const Vec analytic = surrogateGradient(probe, lk, delta, beta);
    rep.max_fd_error = std::max(
        rep.max_fd_error, (fdGradient(probe) - analytic).lpNorm<Eigen::Infinity>());

    // fixed-step ascent contracts toward the closed form at rate 1/2
    Vec x = lk;
    for (int it = 0; it < 100; ++it) x += 0.5 * surrogateGradient(x, lk, delta, beta);
    rep.max_ascent_error =
        std::max(rep.max_ascent_error, (x - closed).lpNorm<Eigen::Infinity>());

    const Scalar gap = surrogateObjective(closed, lk, delta, beta) -
                       surrogateObjective(lk, lk, delta, beta);
    const Scalar expected = 0.5 * beta * beta * delta.squaredNorm();
    if (expected > 0)
      rep.max_gap_error =
          std::max(rep.max_gap_error, std::abs(gap - expected) / expected);
    else
      rep.max_gap_error = std::max(rep.max_gap_error, std::abs(gap));
  }
  return rep;
}

}  // namespace nsg::guidance
