#pragma once

#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "nsg/analysis.hpp"
#include "nsg/codec.hpp"
#include "nsg/config.hpp"
#include "nsg/pipeline.hpp"
#include "nsg/types.hpp"

// Experiment orchestration shared by the CLI and the test suites: builds run
// setups from a Config, runs guided and baseline arms, runs the prior/decay
// ablation grid, and owns every CSV schema.

namespace nsg::experiment {

// keys accepted by run/complete configs and their flag overrides
const std::set<std::string>& runKeys();

struct Setup {
  Tensor3 reference;
  pipeline::RunConfig rc;
  pipeline::OracleConfig oc;
  codec::Codebook cb;
  std::string arm;  // "ssg", "baseline" or "both"
};

Setup makeSetup(const config::Config& cfg);

// "gen:words,dim,seed" or a tensor path (rows = words, cols = dim, 1 channel)
codec::Codebook parseCodebookSpec(const std::string& spec);

// "gen:blobs:8x8x4:seed", "gen:checkers:...", or a tensor path
Tensor3 parseReferenceSpec(const std::string& spec);

struct ArmReport {
  std::string arm;  // "ssg" or "baseline"
  pipeline::RunReport report;
};

std::vector<ArmReport> runArms(bool completion, const Setup& setup);

// columns: arm,seed,scale,h,w,accuracy,mse,psnr
void writeReportCsv(std::ostream& out, const std::vector<ArmReport>& arms);

struct AblationRow {
  std::string prior;  // "baseline" for the no-guidance row
  std::string decay;
  Scalar median_mse = 0;
  Scalar median_accuracy = 0;
  double wall_s = 0;
};

// {nearest, linear, dse_zero, dse} x {linear, constant} plus one baseline
// row, identical seeds throughout; the dse/dse_zero low-band agreement is
// asserted before any cell runs
std::vector<AblationRow> ablationSuite(const Setup& setup);

// columns: prior,decay,median_mse,median_accuracy,wall_s
void writeAblationCsv(std::ostream& out, const std::vector<AblationRow>& rows);

// columns: bin,delta_log_amplitude,nyquist_bin
void writeProfileCsv(std::ostream& out, const std::vector<Scalar>& delta,
                     Scalar nyquist_bin);

// columns: size,op,mean_s,std_s,ratio
void writeBenchCsv(std::ostream& out, const std::vector<analysis::BenchRow>& rows);

}  // namespace nsg::experiment
