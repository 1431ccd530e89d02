#include <CLI11.hpp>

#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nsg/demo.hpp"
#include "nsg/experiment.hpp"
#include "nsg/guidance.hpp"
#include "nsg/sampler.hpp"
#include "nsg/tensor_io.hpp"

namespace {

using namespace nsg;

std::pair<Index, Index> parseHW(const std::string& text) {
  const codec::ScaleLadder l = codec::ScaleLadder::parse(text);
  if (l.sizes.size() != 1)
    throw std::invalid_argument("expected a single HxW size, got '" + text + "'");
  return l.sizes[0];
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  return out;
}

// one flag per config key so the file and the command line stay in sync
struct KeyFlags {
  std::deque<std::string> storage;
  std::vector<std::pair<std::string, CLI::Option*>> opts;

  void add(CLI::App* cmd, const std::string& key, const std::string& help) {
    storage.emplace_back();
    opts.emplace_back(key, cmd->add_option("--" + key, storage.back(), help));
  }

  void applyTo(config::Config& cfg) const {
    for (const auto& [key, opt] : opts)
      if (opt->count() > 0) cfg.set(key, opt->as<std::string>());
  }
};

void addRunFlags(CLI::App* cmd, KeyFlags& kf, bool completion) {
  kf.add(cmd, "ladder", "scale ladder, e.g. 1x1,2x2,4x4,8x8");
  kf.add(cmd, "beta0", "guidance strength at the first guided step");
  kf.add(cmd, "decay", "beta schedule: linear or constant");
  kf.add(cmd, "prior", "prior mode: nearest, linear, dse or dse_zero");
  kf.add(cmd, "kind", "token upsampling kind: nearest or linear");
  kf.add(cmd, "temperature", "softmax temperature for sampling");
  kf.add(cmd, "argmax", "true = greedy decoding instead of sampling");
  kf.add(cmd, "lambda", "oracle blend weight toward upsampled previous-scale ideal");
  kf.add(cmd, "sigma", "oracle Gaussian noise stddev");
  kf.add(cmd, "logit_scale", "oracle score on the teacher token");
  kf.add(cmd, "oracle_seed", "base seed of the oracle noise");
  kf.add(cmd, "seeds", "run seeds, e.g. 0..49 or 0,3,7..9");
  kf.add(cmd, "codebook", "codebook: gen:words,dim,seed or a tensor path");
  kf.add(cmd, "reference", "reference field: gen:kind:HxWxC:seed or a tensor path");
  kf.add(cmd, "arm", "which arms to run: both, ssg or baseline");
  kf.add(cmd, "amplitude_preserving", "false = raw low-band copy in dse priors");
  kf.add(cmd, "prior_from_guided", "true = build priors from guided instead of raw logits");
  if (completion) kf.add(cmd, "prefix", "teacher-forced leading scales (1 <= m < K)");
  kf.add(cmd, "threads", "worker threads across seeds");
}

config::Config buildConfig(const std::string& config_path, const KeyFlags& kf) {
  config::Config cfg(experiment::runKeys());
  if (!config_path.empty()) cfg.loadFile(config_path);
  kf.applyTo(cfg);
  return cfg;
}

void printArmSummaries(const std::vector<experiment::ArmReport>& arms,
                       const pipeline::RunConfig& rc) {
  for (const auto& ar : arms)
    std::printf("arm=%-8s seeds=%zu scales=%d median final mse=%.6g accuracy=%.4f "
                "psnr=%.4g wall=%.3fs\n",
                ar.arm.c_str(), rc.seeds.size(), rc.ladder.steps(),
                ar.report.median_final_mse, ar.report.median_final_accuracy,
                ar.report.median_final_psnr, ar.report.wall_seconds);
}

int runMain(int argc, char** argv) {
  CLI::App app{"next-scale generation with spectral priors and logit guidance"};
  app.require_subcommand(1);

  // dse
  auto* dse_cmd = app.add_subcommand("dse", "build a next-scale prior from a tensor");
  std::string dse_in, dse_out, dse_target, dse_mode = "dse";
  bool dse_raw = false;
  dse_cmd->add_option("--in", dse_in, "input tensor path")->required();
  dse_cmd->add_option("--out", dse_out, "output tensor path")->required();
  dse_cmd->add_option("--target", dse_target, "target size HxW")->required();
  dse_cmd->add_option("--mode", dse_mode, "nearest, linear, dse or dse_zero");
  dse_cmd->add_flag("--raw-copy", dse_raw, "copy the low band without amplitude scaling");
  dse_cmd->callback([&]() {
    const auto [th, tw] = parseHW(dse_target);
    const Tensor3 prev = io::loadTensor(dse_in);
    const dse::PriorOptions opt{dse::parsePriorMode(dse_mode), !dse_raw};
    io::saveTensor(dse::buildPrior(prev, th, tw, opt), dse_out);
  });

  // guide
  auto* guide_cmd =
      app.add_subcommand("guide", "apply guidance to logits, or verify its closed form");
  std::string g_logits, g_prior, g_out;
  double g_beta = 1.0;
  bool g_verify = false;
  int g_dim = 16, g_trials = 100;
  std::uint64_t g_seed = 0;
  guide_cmd->add_option("--logits", g_logits, "raw logit tensor path");
  guide_cmd->add_option("--prior", g_prior, "prior logit tensor path");
  guide_cmd->add_option("--beta", g_beta, "guidance strength");
  guide_cmd->add_option("--out", g_out, "guided logit tensor path");
  guide_cmd->add_flag("--verify", g_verify, "check the closed-form maximizer numerically");
  guide_cmd->add_option("--dim", g_dim, "verification vector dimension");
  guide_cmd->add_option("--trials", g_trials, "verification trials");
  guide_cmd->add_option("--seed", g_seed, "verification seed");
  guide_cmd->callback([&]() {
    if (g_verify) {
      const auto rep = guidance::verifyClosedForm(g_dim, g_trials, g_seed);
      std::printf("max stationarity residual   %.3e\n", rep.max_stationarity);
      std::printf("fd gradient norm at optimum %.3e\n", rep.max_fd_stationarity);
      std::printf("fd vs analytic off-optimum  %.3e\n", rep.max_fd_error);
      std::printf("ascent gap after 100 steps  %.3e\n", rep.max_ascent_error);
      std::printf("objective gap rel error     %.3e\n", rep.max_gap_error);
      if (!rep.pass()) throw std::domain_error("guide --verify: tolerances exceeded");
      return;
    }
    if (g_logits.empty() || g_prior.empty() || g_out.empty())
      throw CLI::RequiredError("guide needs --logits, --prior and --out (or --verify)");
    const Tensor3 lk = io::loadTensor(g_logits);
    const Tensor3 prior = io::loadTensor(g_prior);
    io::saveTensor(guidance::applySsg(lk, prior, g_beta), g_out);
  });

  // codec
  auto* codec_cmd = app.add_subcommand("codec", "multiscale residual encode/decode");
  codec_cmd->require_subcommand(1);
  auto* enc_cmd = codec_cmd->add_subcommand("encode", "encode a feature field to token maps");
  std::string enc_feature, enc_ladder = "1x1,2x2,4x4,8x8", enc_codebook = "gen:32,4,7";
  std::string enc_out, enc_kind = "linear";
  enc_cmd->add_option("--feature", enc_feature, "feature tensor path")->required();
  enc_cmd->add_option("--ladder", enc_ladder, "scale ladder");
  enc_cmd->add_option("--codebook", enc_codebook, "gen:words,dim,seed or tensor path");
  enc_cmd->add_option("--kind", enc_kind, "upsampling kind used while encoding");
  enc_cmd->add_option("--out", enc_out, "output directory for token maps")->required();
  enc_cmd->callback([&]() {
    const Tensor3 f = io::loadTensor(enc_feature);
    const auto ladder = codec::ScaleLadder::parse(enc_ladder);
    const auto cb = experiment::parseCodebookSpec(enc_codebook);
    const auto enc =
        codec::encodeMultiscaleTraced(f, ladder, cb, resample::parseKind(enc_kind));
    std::filesystem::create_directories(enc_out);
    for (std::size_t k = 0; k < enc.tokens.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof(name), "tokens_%02zu.nsgt", k + 1);
      io::saveTokens(enc.tokens[k], enc_out + "/" + name);
      std::printf("scale %zu (%ldx%ld): mse %.6g\n", k + 1,
                  static_cast<long>(ladder.sizes[k].first),
                  static_cast<long>(ladder.sizes[k].second), enc.mse[k]);
    }
  });
  auto* dec_cmd = codec_cmd->add_subcommand("decode", "reconstruct a field from token maps");
  std::string dec_tokens, dec_ladder = "1x1,2x2,4x4,8x8", dec_codebook = "gen:32,4,7";
  std::string dec_out, dec_kind = "linear";
  dec_cmd->add_option("--tokens", dec_tokens, "directory holding tokens_XX.nsgt")->required();
  dec_cmd->add_option("--ladder", dec_ladder, "scale ladder");
  dec_cmd->add_option("--codebook", dec_codebook, "gen:words,dim,seed or tensor path");
  dec_cmd->add_option("--kind", dec_kind, "upsampling kind used while decoding");
  dec_cmd->add_option("--out", dec_out, "output tensor path")->required();
  dec_cmd->callback([&]() {
    const auto ladder = codec::ScaleLadder::parse(dec_ladder);
    const auto cb = experiment::parseCodebookSpec(dec_codebook);
    std::vector<TokenMap> tokens;
    for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof(name), "tokens_%02zu.nsgt", k + 1);
      tokens.push_back(io::loadTokens(dec_tokens + "/" + name));
    }
    io::saveTensor(codec::reconstruct(tokens, ladder, cb, resample::parseKind(dec_kind)),
                   dec_out);
  });

  // run / complete
  std::string run_config, run_out = "report.csv";
  bool run_ablation = false;
  KeyFlags run_kf;
  auto* run_cmd = app.add_subcommand("run", "generate from scratch across seeds");
  run_cmd->add_option("--config", run_config, "key=value config file");
  run_cmd->add_option("--out", run_out, "report CSV path");
  run_cmd->add_flag("--ablation", run_ablation,
                    "run the prior x decay ablation grid instead of a single setting");
  addRunFlags(run_cmd, run_kf, false);
  run_cmd->callback([&]() {
    const auto cfg = buildConfig(run_config, run_kf);
    const auto setup = experiment::makeSetup(cfg);
    if (run_ablation) {
      const auto rows = experiment::ablationSuite(setup);
      auto out = openOut(run_out);
      experiment::writeAblationCsv(out, rows);
      for (const auto& r : rows)
        std::printf("prior=%-9s decay=%-8s median mse=%.6g accuracy=%.4f wall=%.3fs\n",
                    r.prior.c_str(), r.decay.c_str(), r.median_mse, r.median_accuracy,
                    r.wall_s);
      return;
    }
    const auto arms = experiment::runArms(false, setup);
    auto out = openOut(run_out);
    experiment::writeReportCsv(out, arms);
    printArmSummaries(arms, setup.rc);
  });

  std::string comp_config, comp_out = "report.csv";
  KeyFlags comp_kf;
  auto* comp_cmd =
      app.add_subcommand("complete", "teacher-force leading scales, generate the rest");
  comp_cmd->add_option("--config", comp_config, "key=value config file");
  comp_cmd->add_option("--out", comp_out, "report CSV path");
  addRunFlags(comp_cmd, comp_kf, true);
  comp_cmd->callback([&]() {
    const auto cfg = buildConfig(comp_config, comp_kf);
    const auto setup = experiment::makeSetup(cfg);
    const auto arms = experiment::runArms(true, setup);
    auto out = openOut(comp_out);
    experiment::writeReportCsv(out, arms);
    printArmSummaries(arms, setup.rc);
  });

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "radial log-amplitude delta of two tensors");
  std::string an_a, an_b, an_prev, an_out = "profile.csv";
  an_cmd->add_option("--a", an_a, "first tensor path")->required();
  an_cmd->add_option("--b", an_b, "second tensor path")->required();
  an_cmd->add_option("--prev", an_prev, "previous-scale size HxW")->required();
  an_cmd->add_option("--out", an_out, "profile CSV path");
  an_cmd->callback([&]() {
    const Tensor3 a = io::loadTensor(an_a);
    const Tensor3 b = io::loadTensor(an_b);
    const auto [ph, pw] = parseHW(an_prev);
    const auto delta = analysis::deltaLogMagnitude(a, b);
    const Scalar ny = analysis::nyquistBin(ph, pw, a.rows(), a.cols());
    auto out = openOut(an_out);
    experiment::writeProfileCsv(out, delta, ny);
  });

  // bench
  auto* bench_cmd =
      app.add_subcommand("bench", "time a dummy predictor step against dse + guidance");
  std::string bench_sizes = "8x8x256,16x16x512", bench_out = "bench.csv";
  int bench_reps = 100;
  bench_cmd->add_option("--sizes", bench_sizes, "comma list of HxWxV source sizes");
  bench_cmd->add_option("--reps", bench_reps, "timing repetitions (>= 10)");
  bench_cmd->add_option("--out", bench_out, "bench CSV path");
  bench_cmd->callback([&]() {
    const auto rows = analysis::latencyBench(analysis::parseBenchSizes(bench_sizes),
                                             bench_reps);
    auto out = openOut(bench_out);
    experiment::writeBenchCsv(out, rows);
    for (const auto& r : rows)
      std::printf("%ldx%ldx%ld %-9s mean=%.6es std=%.2es ratio=%.4f\n",
                  static_cast<long>(r.size.h), static_cast<long>(r.size.w),
                  static_cast<long>(r.size.v), r.op.c_str(), r.mean_s, r.std_s, r.ratio);
  });

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "synthesize a seeded reference field");
  std::string demo_kind = "blobs", demo_size = "8x8x4", demo_out, demo_image;
  std::uint64_t demo_seed = 1;
  demo_cmd->add_option("--kind", demo_kind, "blobs or checkers");
  demo_cmd->add_option("--size", demo_size, "field size HxWxC");
  demo_cmd->add_option("--seed", demo_seed, "generator seed");
  demo_cmd->add_option("--out", demo_out, "output tensor path")->required();
  demo_cmd->add_option("--image", demo_image, "optional PGM/PPM preview path");
  demo_cmd->callback([&]() {
    const auto dims = analysis::parseBenchSizes(demo_size);
    if (dims.size() != 1) throw std::invalid_argument("demo: --size wants one HxWxC shape");
    const Tensor3 f =
        demo::makeReference(demo_kind, dims[0].h, dims[0].w, dims[0].v, demo_seed);
    io::saveTensor(f, demo_out);
    if (!demo_image.empty()) {
      const Index c = std::min<Index>(f.channels(), 3) == 3 ? 3 : 1;
      Tensor3 img(f.rows(), f.cols(), c);
      const Scalar lo = f.asVector().minCoeff(), hi = f.asVector().maxCoeff();
      const Scalar span = hi > lo ? hi - lo : 1.0;
      for (Index i = 0; i < f.rows(); ++i)
        for (Index j = 0; j < f.cols(); ++j)
          for (Index ch = 0; ch < c; ++ch) img(i, j, ch) = (f(i, j, ch) - lo) / span;
      io::writeImage(img, demo_image);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return runMain(argc, argv);
  } catch (const nsg::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
