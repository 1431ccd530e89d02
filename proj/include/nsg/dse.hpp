#pragma once

#include <string>

#include "nsg/resample.hpp"
#include "nsg/types.hpp"

// Prior construction for the next scale. The dse modes upsample the previous
// scale's grid, move to DCT space, then overwrite the low band with the
// previous scale's own spectrum so the prior is spectrally faithful where the
// previous scale had support:
//
//   interp   = linear upsample(prev)
//   L_interp = dct2(interp)          (dse_zero starts from zeros instead)
//   L[0:hs, 0:ws] = alpha * dct2(prev)
//   prior    = idct2(L)
//
// nearest/linear are the plain spatial upsamplers used as ablations.

namespace nsg::dse {

enum class PriorMode { nearest, linear, dse, dse_zero };

PriorMode parsePriorMode(const std::string& name);
std::string toString(PriorMode m);

struct PriorOptions {
  PriorMode mode = PriorMode::dse;
  // false = raw spectrum copy (alpha 1), the scaling ablation
  bool amplitude_preserving = true;
};

Mat buildPrior(const Eigen::Ref<const Mat>& prev, Index th, Index tw,
               const PriorOptions& opt = {});

// Batched over channels through cached separable operators; agrees with the
// per-channel path to 1e-10.
Tensor3 buildPrior(const Tensor3& prev, Index th, Index tw, const PriorOptions& opt = {});

// Same computation writing into out (reshaped as needed) and reusing
// per-thread scratch, so steady-state calls allocate nothing.
void buildPriorInto(const Tensor3& prev, Index th, Index tw, const PriorOptions& opt,
                    Tensor3& out);

// One guided step, fused: out = logits + beta * (logits - prior(prev)) at the
// shape of logits, without materializing the prior. Matches the two-call
// composition to roundoff. Shapes and beta are checked; values are assumed
// finite (they come from ops that already validate).
void guidedPriorStep(const Tensor3& logits, const Tensor3& prev, Scalar beta,
                     const PriorOptions& opt, Tensor3& out);

namespace detail {

// spelled-out composition used as the reference in equivalence tests
Mat buildPriorSpectral(const Eigen::Ref<const Mat>& prev, Index th, Index tw,
                       const PriorOptions& opt);

// out(i',j,c) = sum_i A(i',i) t(i,j,c)
Tensor3 rowsApply(const Mat& a, const Tensor3& t);
// out(i,j',c) = sum_j B(j',j) t(i,j,c)
Tensor3 colsApply(const Mat& b, const Tensor3& t);

}  // namespace detail
}  // namespace nsg::dse
