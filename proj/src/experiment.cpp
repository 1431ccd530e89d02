#include "nsg/experiment.hpp"

#include <charconv>

#include "nsg/csv.hpp"
#include "nsg/dct.hpp"
#include "nsg/demo.hpp"
#include "nsg/rng.hpp"
#include "nsg/tensor_io.hpp"

namespace nsg::experiment {
namespace {

std::vector<std::string> splitOn(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find(sep, pos), text.size());
    parts.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

std::uint64_t asU64(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string(what) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

const std::set<std::string>& runKeys() {
  static const std::set<std::string> keys = {
      "ladder",     "beta0",     "decay",    "prior",      "kind",
      "temperature", "argmax",   "lambda",   "sigma",      "logit_scale",
      "oracle_seed", "seeds",    "codebook", "reference",  "arm",
      "amplitude_preserving",    "prior_from_guided",      "prefix",
      "threads"};
  return keys;
}

codec::Codebook parseCodebookSpec(const std::string& spec) {
  if (spec.rfind("gen:", 0) == 0) {
    const auto parts = splitOn(spec.substr(4), ',');
    if (parts.size() != 3)
      throw std::invalid_argument("codebook: expected gen:words,dim,seed, got '" + spec +
                                  "'");
    return codec::Codebook::gaussian(static_cast<Index>(asU64(parts[0], "codebook words")),
                                     static_cast<Index>(asU64(parts[1], "codebook dim")),
                                     asU64(parts[2], "codebook seed"));
  }
  const Tensor3 t = io::loadTensor(spec);
  if (t.channels() != 1)
    throw std::invalid_argument("codebook: tensor must have one channel");
  return codec::Codebook(t.channelCopy(0));
}

Tensor3 parseReferenceSpec(const std::string& spec) {
  if (spec.rfind("gen:", 0) == 0) {
    const auto parts = splitOn(spec.substr(4), ':');
    if (parts.size() != 3)
      throw std::invalid_argument("reference: expected gen:kind:HxWxC:seed, got '" + spec +
                                  "'");
    const auto dims = analysis::parseBenchSizes(parts[1]);
    if (dims.size() != 1)
      throw std::invalid_argument("reference: expected a single HxWxC shape");
    return demo::makeReference(parts[0], dims[0].h, dims[0].w, dims[0].v,
                               asU64(parts[2], "reference seed"));
  }
  return io::loadTensor(spec);
}

Setup makeSetup(const config::Config& cfg) {
  pipeline::RunConfig rc;
  rc.ladder = codec::ScaleLadder::parse(cfg.getString("ladder", "1x1,2x2,4x4,8x8"));
  rc.schedule.beta0 = cfg.getReal("beta0", 1.0);
  rc.schedule.decay = guidance::parseDecay(cfg.getString("decay", "linear"));
  rc.schedule.steps = rc.ladder.steps();
  rc.prior = dse::parsePriorMode(cfg.getString("prior", "dse"));
  rc.up_kind = resample::parseKind(cfg.getString("kind", "linear"));
  rc.temperature = cfg.getReal("temperature", 1.0);
  rc.argmax = cfg.getBool("argmax", false);
  rc.amplitude_preserving = cfg.getBool("amplitude_preserving", true);
  rc.prior_from_guided = cfg.getBool("prior_from_guided", false);
  rc.prefix_scales = static_cast<int>(cfg.getInt("prefix", 1));
  rc.seeds = cfg.getSeedList("seeds", "0..49");
  rc.threads = static_cast<int>(cfg.getInt("threads", 1));

  pipeline::OracleConfig oc;
  oc.logit_scale = cfg.getReal("logit_scale", oc.logit_scale);
  oc.noise_sigma = cfg.getReal("sigma", oc.noise_sigma);
  oc.lowpass_lambda = cfg.getReal("lambda", oc.lowpass_lambda);
  oc.seed = static_cast<std::uint64_t>(cfg.getInt("oracle_seed", 0));

  const std::string arm = cfg.getString("arm", "both");
  if (arm != "both" && arm != "ssg" && arm != "baseline")
    throw std::invalid_argument("config: arm must be both, ssg or baseline");

  return Setup{parseReferenceSpec(cfg.getString("reference", "gen:blobs:8x8x4:1")),
               std::move(rc), oc,
               parseCodebookSpec(cfg.getString("codebook", "gen:32,4,7")), arm};
}

std::vector<ArmReport> runArms(bool completion, const Setup& setup) {
  std::vector<ArmReport> out;
  for (const char* arm : {"baseline", "ssg"}) {
    if (setup.arm != "both" && setup.arm != arm) continue;
    pipeline::RunConfig rc = setup.rc;
    rc.with_ssg = std::string(arm) == "ssg";
    const pipeline::RunReport report =
        completion ? pipeline::runCompletion(setup.reference, rc, setup.oc, setup.cb)
                   : pipeline::runGeneration(setup.reference, rc, setup.oc, setup.cb);
    out.push_back({arm, report});
  }
  return out;
}

void writeReportCsv(std::ostream& out, const std::vector<ArmReport>& arms) {
  csv::writeRow(out, {"arm", "seed", "scale", "h", "w", "accuracy", "mse", "psnr"});
  for (const ArmReport& ar : arms)
    for (const pipeline::ScaleRow& r : ar.report.rows)
      csv::writeRow(out, {ar.arm, csv::num(r.seed), csv::num(std::int64_t(r.scale)),
                          csv::num(std::int64_t(r.h)), csv::num(std::int64_t(r.w)),
                          csv::num(r.accuracy), csv::num(r.mse), csv::num(r.psnr)});
}

std::vector<AblationRow> ablationSuite(const Setup& setup) {
  if (setup.rc.ladder.steps() < 2)
    throw std::invalid_argument("ablationSuite: ladder needs at least two scales");

  // the two dse variants must agree on the low band before any cell runs
  {
    const auto [sh, sw] = setup.rc.ladder.sizes[setup.rc.ladder.steps() - 2];
    const auto [th, tw] = setup.rc.ladder.sizes[setup.rc.ladder.steps() - 1];
    Tensor3 probe(sh, sw, setup.cb.words());
    rng::Stream rs(rng::combine(0x61626c70, setup.oc.seed));
    for (Index n = 0; n < probe.size(); ++n) probe.data()[n] = rs.normal();
    const Tensor3 full =
        dse::buildPrior(probe, th, tw, {dse::PriorMode::dse, setup.rc.amplitude_preserving});
    const Tensor3 zero = dse::buildPrior(
        probe, th, tw, {dse::PriorMode::dse_zero, setup.rc.amplitude_preserving});
    for (Index c = 0; c < probe.channels(); ++c) {
      const Spectrum a = spectral::dct2(full.channelCopy(c));
      const Spectrum b = spectral::dct2(zero.channelCopy(c));
      if (((a.topLeftCorner(sh, sw) - b.topLeftCorner(sh, sw)).cwiseAbs().maxCoeff()) > 1e-9)
        throw std::logic_error("ablationSuite: dse and dse_zero low bands disagree");
    }
  }

  std::vector<AblationRow> rows;
  auto cell = [&](const std::string& prior, const std::string& decay, bool with_ssg) {
    pipeline::RunConfig rc = setup.rc;
    rc.with_ssg = with_ssg;
    if (with_ssg) {
      rc.prior = dse::parsePriorMode(prior);
      rc.schedule.decay = guidance::parseDecay(decay);
    }
    const pipeline::RunReport rep =
        pipeline::runGeneration(setup.reference, rc, setup.oc, setup.cb);
    rows.push_back({prior, decay, rep.median_final_mse, rep.median_final_accuracy,
                    rep.wall_seconds});
  };
  cell("baseline", "none", false);
  for (const char* prior : {"nearest", "linear", "dse_zero", "dse"})
    for (const char* decay : {"linear", "constant"}) cell(prior, decay, true);
  return rows;
}

void writeAblationCsv(std::ostream& out, const std::vector<AblationRow>& rows) {
  csv::writeRow(out, {"prior", "decay", "median_mse", "median_accuracy", "wall_s"});
  for (const AblationRow& r : rows)
    csv::writeRow(out, {r.prior, r.decay, csv::num(r.median_mse),
                        csv::num(r.median_accuracy), csv::num(r.wall_s)});
}

void writeProfileCsv(std::ostream& out, const std::vector<Scalar>& delta,
                     Scalar nyquist_bin) {
  csv::writeRow(out, {"bin", "delta_log_amplitude", "nyquist_bin"});
  for (std::size_t b = 0; b < delta.size(); ++b)
    csv::writeRow(out, {csv::num(std::int64_t(b)), csv::num(delta[b]),
                        csv::num(nyquist_bin)});
}

void writeBenchCsv(std::ostream& out, const std::vector<analysis::BenchRow>& rows) {
  csv::writeRow(out, {"size", "op", "mean_s", "std_s", "ratio"});
  for (const analysis::BenchRow& r : rows) {
    const std::string size = csv::num(std::int64_t(r.size.h)) + "x" +
                             csv::num(std::int64_t(r.size.w)) + "x" +
                             csv::num(std::int64_t(r.size.v));
    csv::writeRow(out, {size, r.op, csv::num(r.mean_s), csv::num(r.std_s),
                        csv::num(r.ratio)});
  }
}

}  // namespace nsg::experiment
