#include "nsg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "nsg/resample.hpp"
#include "nsg/rng.hpp"
#include "nsg/sampler.hpp"

namespace nsg::pipeline {
namespace {

constexpr std::uint64_t kSampleTag = 0x73616d70;  // "samp"

struct Shared {
  const Tensor3* reference;
  const RunConfig* rc;
  const OracleConfig* oc;
  const codec::Codebook* cb;
  std::vector<TokenMap> teacher;
  std::vector<Tensor3> ideals;
  Scalar peak = 1.0;
  int prefix = 0;
};

void runSeed(const Shared& sh, std::uint64_t seed, ScaleRow* rows,
             const StepObserver& observer) {
  const RunConfig& rc = *sh.rc;
  const Tensor3& f = *sh.reference;
  const int steps = rc.ladder.steps();
  OracleConfig oc = *sh.oc;
  oc.seed = rng::combine(sh.oc->seed, seed);

  Tensor3 fhat(f.rows(), f.cols(), f.channels());
  Tensor3 cached;
  for (int k = 1; k <= steps; ++k) {
    const auto [hk, wk] = rc.ladder.sizes[static_cast<std::size_t>(k - 1)];
    const TokenMap& teacher_k = sh.teacher[static_cast<std::size_t>(k - 1)];
    const Tensor3* prev_ideal =
        k > 1 ? &sh.ideals[static_cast<std::size_t>(k - 2)] : nullptr;
    const Tensor3 raw = oracleLogits(teacher_k, prev_ideal, sh.cb->words(), oc, k);

    Tensor3 prior;
    bool guided_step = rc.with_ssg && k > 1;
    Scalar beta = 0;
    Tensor3 guided;
    if (guided_step) {
      beta = guidance::betaAt(rc.schedule, k);
      dse::guidedPriorStep(raw, cached, beta, {rc.prior, rc.amplitude_preserving}, guided);
      // the fused step never forms the prior; rebuild it only for tracing
      if (observer)
        prior = dse::buildPrior(cached, hk, wk, {rc.prior, rc.amplitude_preserving});
    } else {
      guided = raw;
    }
    cached = rc.prior_from_guided ? guided : raw;

    const TokenMap tokens =
        k <= sh.prefix
            ? teacher_k
            : sampling::sampleMap(guided, rc.temperature,
                                  rng::combine(seed, static_cast<std::uint64_t>(k),
                                               kSampleTag),
                                  rc.argmax);
    fhat.asVector() += resample::interpolate(codec::dequantize(tokens, *sh.cb), f.rows(),
                                             f.cols(), rc.up_kind)
                           .asVector();

    ScaleRow& row = rows[k - 1];
    row.seed = seed;
    row.scale = k;
    row.h = hk;
    row.w = wk;
    Index hits = 0;
    for (Index i = 0; i < hk; ++i)
      for (Index j = 0; j < wk; ++j) hits += tokens(i, j) == teacher_k(i, j);
    row.accuracy = static_cast<Scalar>(hits) / static_cast<Scalar>(hk * wk);
    row.mse = (f.asVector() - fhat.asVector()).squaredNorm() /
              static_cast<Scalar>(f.size());
    row.psnr = 10.0 * std::log10(sh.peak * sh.peak / std::max(row.mse, 1e-300));

    if (observer) {
      StepTrace trace{seed,    k,       beta, &raw, &guided, guided_step ? &prior : nullptr,
                      &tokens};
      observer(trace);
    }
  }
}

RunReport runScales(const Tensor3& reference, const RunConfig& rc, const OracleConfig& oc,
                    const codec::Codebook& cb, int prefix, const StepObserver& observer) {
  const auto t0 = std::chrono::steady_clock::now();
  requireFinite(reference, "run");
  rc.ladder.validateFor(reference.rows(), reference.cols());
  if (cb.dim() != reference.channels())
    throw std::invalid_argument("run: codebook dim != reference channels");
  if (rc.schedule.steps != rc.ladder.steps())
    throw std::invalid_argument("run: schedule steps != ladder length");
  if (rc.seeds.empty()) throw std::invalid_argument("run: need at least one seed");
  if (!rc.argmax && !(rc.temperature > 0))
    throw std::domain_error("run: temperature must be positive");
  if (!(rc.schedule.beta0 >= 0)) throw std::domain_error("run: beta0 must be non-negative");

  Shared sh;
  sh.reference = &reference;
  sh.rc = &rc;
  sh.oc = &oc;
  sh.cb = &cb;
  sh.prefix = prefix;
  sh.teacher = codec::encodeMultiscale(reference, rc.ladder, cb, rc.up_kind);
  for (std::size_t k = 0; k < sh.teacher.size(); ++k)
    sh.ideals.push_back(idealLogits(sh.teacher[k], cb.words(), oc.logit_scale));
  const Scalar lo = reference.asVector().minCoeff();
  const Scalar hi = reference.asVector().maxCoeff();
  sh.peak = hi > lo ? hi - lo : 1.0;

  const int steps = rc.ladder.steps();
  RunReport report;
  report.rows.resize(rc.seeds.size() * static_cast<std::size_t>(steps));

  const int want = observer ? 1 : std::max(1, rc.threads);
  const int workers =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(want), rc.seeds.size()));
  if (workers <= 1) {
    for (std::size_t s = 0; s < rc.seeds.size(); ++s)
      runSeed(sh, rc.seeds[s], report.rows.data() + s * static_cast<std::size_t>(steps),
              observer);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int wkr = 0; wkr < workers; ++wkr)
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t s = next.fetch_add(1);
          if (s >= rc.seeds.size()) return;
          runSeed(sh, rc.seeds[s],
                  report.rows.data() + s * static_cast<std::size_t>(steps), observer);
        }
      });
    for (auto& th : pool) th.join();
  }

  std::vector<Scalar> final_mse, final_acc, final_psnr;
  for (std::size_t s = 0; s < rc.seeds.size(); ++s) {
    const ScaleRow& last = report.rows[s * static_cast<std::size_t>(steps) +
                                       static_cast<std::size_t>(steps - 1)];
    final_mse.push_back(last.mse);
    final_acc.push_back(last.accuracy);
    final_psnr.push_back(last.psnr);
  }
  report.median_final_mse = median(std::move(final_mse));
  report.median_final_accuracy = median(std::move(final_acc));
  report.median_final_psnr = median(std::move(final_psnr));
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace

Scalar median(std::vector<Scalar> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RunReport runGeneration(const Tensor3& reference, const RunConfig& rc,
                        const OracleConfig& oc, const codec::Codebook& cb,
                        const StepObserver& observer) {
  return runScales(reference, rc, oc, cb, 0, observer);
}

RunReport runCompletion(const Tensor3& reference, const RunConfig& rc,
                        const OracleConfig& oc, const codec::Codebook& cb,
                        const StepObserver& observer) {
  if (rc.prefix_scales < 1 || rc.prefix_scales >= rc.ladder.steps())
    throw std::domain_error("runCompletion: prefix must satisfy 1 <= m < K");
  return runScales(reference, rc, oc, cb, rc.prefix_scales, observer);
}

}  // namespace nsg::pipeline
