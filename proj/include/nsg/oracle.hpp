#pragma once

#include <cstdint>

#include "nsg/types.hpp"

// Corrupted-teacher logit source. Stands in for a trained predictor: it knows
// the teacher tokens, mixes in deliberately redundant content upsampled from
// the previous scale's ideal logits, and adds seeded Gaussian noise. The
// redundant term is exactly the kind of low-novelty content a prior should
// explain away, which is what makes guidance measurable on a desk.

namespace nsg::pipeline {

struct OracleConfig {
  // The teacher score is large relative to the noise so that, like a trained
  // predictor, the oracle's dominant failure mode is the redundant blend
  // rather than random token flips.
  Scalar logit_scale = 12.0;   // score placed on the teacher token
  Scalar noise_sigma = 1.0;    // stddev of the additive Gaussian corruption
  Scalar lowpass_lambda = 0.5; // blend weight toward upsampled prev-scale ideal
  std::uint64_t seed = 0;
};

// logit_scale * onehot(teacher), shape (h, w, vocab)
Tensor3 idealLogits(const TokenMap& teacher, Index vocab, Scalar logit_scale);

// (1 - lambda) * ideal + lambda * upsample(prev_ideal) + noise(seed, k);
// prev_ideal may be null at the base scale, where no blending happens
Tensor3 oracleLogits(const TokenMap& teacher, const Tensor3* prev_ideal, Index vocab,
                     const OracleConfig& cfg, int k);

}  // namespace nsg::pipeline
