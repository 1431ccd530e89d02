#pragma once

#include <cstdint>
#include <string>

#include "nsg/types.hpp"

// Scaled spatial guidance. The guided logits
//   l' = l_k + beta_k * (l_k - l_prior)
// are the unique maximizer of the strictly concave surrogate
//   L(l') = beta * l'.dot(delta) - 0.5 * ||l' - l_k||^2,   delta = l_k - l_prior,
// whose gradient is beta * delta - (l' - l_k). verifyClosedForm checks that
// numerically (stationarity, finite differences, gradient ascent) so the
// property can be demonstrated from the CLI, not only inside tests.

namespace nsg::guidance {

enum class Decay { linear, constant };

Decay parseDecay(const std::string& name);
std::string toString(Decay d);

struct Schedule {
  Scalar beta0 = 1.0;
  int steps = 1;
  Decay decay = Decay::linear;
};

// k is 1-based; linear decay is beta0 * (K - (k - 1)) / K so the endpoints
// beta_1 == beta0 and beta_K == beta0 / K hold exactly in floating point.
Scalar betaAt(const Schedule& s, int k);

Tensor3 semanticResidual(const Tensor3& lk, const Tensor3& prior);
Tensor3 applySsg(const Tensor3& lk, const Tensor3& prior, Scalar beta);

Scalar surrogateObjective(const Vec& lp, const Vec& lk, const Vec& delta, Scalar beta);
Vec surrogateGradient(const Vec& lp, const Vec& lk, const Vec& delta, Scalar beta);

struct VerifyReport {
  int dim = 0;
  int trials = 0;
  Scalar max_stationarity = 0;     // ||grad at closed form||_inf, analytic
  Scalar max_fd_stationarity = 0;  // ||central-difference grad at closed form||_2
  Scalar max_fd_error = 0;         // worst |analytic - central difference| off-optimum
  Scalar max_ascent_error = 0;     // L_inf gap, ascent fixed point vs closed form
  Scalar max_gap_error = 0;  // relative error of L(l') - L(l_k) vs beta^2/2 ||delta||^2
  bool pass() const {
    return max_stationarity < 1e-5 && max_fd_stationarity < 1e-5 &&
           max_fd_error < 1e-6 && max_ascent_error < 1e-8 && max_gap_error < 1e-9;
  }
};

VerifyReport verifyClosedForm(int dim, int trials, std::uint64_t seed);

}  // namespace nsg::guidance
