#include "nsg/oracle.hpp"

#include "nsg/resample.hpp"
#include "nsg/rng.hpp"

namespace nsg::pipeline {

Tensor3 idealLogits(const TokenMap& teacher, Index vocab, Scalar logit_scale) {
  if (vocab < 1) throw std::invalid_argument("idealLogits: vocab must be positive");
  if (!(logit_scale > 0)) throw std::domain_error("idealLogits: logit_scale must be positive");
  Tensor3 out(teacher.rows(), teacher.cols(), vocab);
  for (Index i = 0; i < teacher.rows(); ++i)
    for (Index j = 0; j < teacher.cols(); ++j) {
      const std::uint32_t t = teacher(i, j);
      if (t >= static_cast<std::uint32_t>(vocab))
        throw std::domain_error("idealLogits: teacher token out of range");
      out(i, j, static_cast<Index>(t)) = logit_scale;
    }
  return out;
}

Tensor3 oracleLogits(const TokenMap& teacher, const Tensor3* prev_ideal, Index vocab,
                     const OracleConfig& cfg, int k) {
  if (k < 1) throw std::domain_error("oracleLogits: k is 1-based");
  if (!(cfg.noise_sigma >= 0)) throw std::domain_error("oracleLogits: sigma must be >= 0");
  if (!(cfg.lowpass_lambda >= 0 && cfg.lowpass_lambda <= 1))
    throw std::domain_error("oracleLogits: lambda must lie in [0, 1]");
  Tensor3 out = idealLogits(teacher, vocab, cfg.logit_scale);
  if (prev_ideal != nullptr) {
    if (prev_ideal->channels() != vocab)
      throw std::invalid_argument("oracleLogits: prev_ideal vocab mismatch");
    const Tensor3 up = resample::interpolate(*prev_ideal, teacher.rows(), teacher.cols(),
                                             resample::Kind::linear);
    out.asVector() =
        (1.0 - cfg.lowpass_lambda) * out.asVector() + cfg.lowpass_lambda * up.asVector();
  }
  if (cfg.noise_sigma > 0) {
    const std::uint64_t key = rng::combine(cfg.seed, static_cast<std::uint64_t>(k));
    for (Index n = 0; n < out.size(); ++n)
      out.data()[n] += cfg.noise_sigma * rng::normalAt(key, static_cast<std::uint64_t>(n));
  }
  return out;
}

}  // namespace nsg::pipeline
