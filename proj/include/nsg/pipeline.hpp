#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nsg/codec.hpp"
#include "nsg/dse.hpp"
#include "nsg/guidance.hpp"
#include "nsg/oracle.hpp"
#include "nsg/types.hpp"

// Next-scale generation loop against the corrupted oracle. Per scale the raw
// oracle logits are guided (except at the base scale, which has no prior),
// tokens are drawn, and the feature field accumulates the upsampled decoded
// residual. The prior for step k is always built from the cached *raw* logits
// of step k-1; prior_from_guided flips that for study runs.

namespace nsg::pipeline {

struct RunConfig {
  codec::ScaleLadder ladder;
  guidance::Schedule schedule;  // schedule.steps must equal the ladder length
  dse::PriorMode prior = dse::PriorMode::dse;
  bool amplitude_preserving = true;
  resample::Kind up_kind = resample::Kind::linear;
  Scalar temperature = 1.0;
  bool argmax = false;
  bool with_ssg = true;
  bool prior_from_guided = false;
  int prefix_scales = 1;  // completion only: teacher-forced leading scales
  std::vector<std::uint64_t> seeds = {0};
  int threads = 1;
};

struct ScaleRow {
  std::uint64_t seed = 0;
  int scale = 0;  // 1-based
  Index h = 0, w = 0;
  Scalar accuracy = 0;
  Scalar mse = 0;
  Scalar psnr = 0;
};

struct RunReport {
  std::vector<ScaleRow> rows;  // ordered by (seed, scale)
  Scalar median_final_mse = 0;
  Scalar median_final_accuracy = 0;
  Scalar median_final_psnr = 0;
  double wall_seconds = 0;
};

// test/debug hook; setting it forces the seed loop single-threaded
struct StepTrace {
  std::uint64_t seed;
  int k;
  Scalar beta;
  const Tensor3* raw_logits;
  const Tensor3* guided_logits;
  const Tensor3* prior;  // null when no guidance was applied
  const TokenMap* tokens;
};
using StepObserver = std::function<void(const StepTrace&)>;

RunReport runGeneration(const Tensor3& reference, const RunConfig& rc,
                        const OracleConfig& oc, const codec::Codebook& cb,
                        const StepObserver& observer = {});

// teacher-forces scales 1..prefix_scales, then generates the rest
RunReport runCompletion(const Tensor3& reference, const RunConfig& rc,
                        const OracleConfig& oc, const codec::Codebook& cb,
                        const StepObserver& observer = {});

Scalar median(std::vector<Scalar> values);

}  // namespace nsg::pipeline
