#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dta/cli/report.hpp"
#include "dta/oracle.hpp"
#include "dta/simlab.hpp"

namespace dta::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitBadInput = 2,        // malformed CSV, bad flags, unwritable output
  kExitTooFewStudies = 3,
  kExitRegionUndefined = 4,
  kExitNumericFailure = 5,  // anything else raised by the library
};

/// Writes to `path + ".partial"` and renames over `path`, so readers never see
/// a truncated file. Throws Error on I/O failure.
void write_file_atomic(const std::string& path, std::string_view content);

/// Runs `body`, printing any exception to `err` and mapping it onto an exit code.
int guarded(std::ostream& err, const std::function<int()>& body);

/// Seed from the DTA_SEED environment variable, else `fallback`. Throws
/// DomainError when the variable is set but is not an unsigned integer.
std::uint64_t default_seed(std::uint64_t fallback = 1);

struct FitArgs {
  std::string input;
  double alpha = 0.05;
  EstimatorChoice estimator = EstimatorChoice::moment;
  std::string json_path;  // empty: JSON to `out`
  std::string svg_path;   // empty: no plot
};

struct SimulateArgs {
  std::vector<double> tau2s;
  std::vector<double> rhos;
  std::vector<std::size_t> ns;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  simlab::Truncation truncation = simlab::Truncation::reject;
  Estimator ncr_estimator = Estimator::reml;
  unsigned threads = 0;
  std::string out;  // empty: CSV to `out`
};

enum class Space { logit, roc };

struct RegionArgs {
  std::string input;
  Method method = Method::ccr;
  double alpha = 0.05;
  int points = 256;
  Space space = Space::logit;
  std::string out;  // empty: CSV to `out`
};

enum class Preset { homogeneous, heterogeneous, degenerate };

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view s);

struct ValidateArgs {
  Preset preset = Preset::homogeneous;
  std::size_t reps = 200000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct TermCheck {
  std::string name;
  double expected = 0.0;  // closed form
  double estimate = 0.0;  // Monte Carlo mean
  double se = 0.0;
  double tolerance = 0.0;  // 3 se + 2 / n^2
  bool pass = false;
};

struct ValidationReport {
  Preset preset = Preset::homogeneous;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::vector<TermCheck> checks;
  bool pass = false;
};

/// Frozen configuration behind a preset:
///  homogeneous    n = 32, S_i = 0.2 I, Sigma = 0.4 I;
///  heterogeneous  n = 16, Sigma = 0.4 [[1, 0.2], [0.2, 1]], S_i drawn once
///                 from the simulation law with a fixed design seed;
///  degenerate     n = 16, S_i = 0.2 I, Sigma = 0.4 I with the true Sigma
///                 injected, so every moment is exactly zero.
oracle::OracleConfig preset_config(Preset p, std::size_t reps, std::uint64_t seed, unsigned threads = 0);

/// Compares the Monte Carlo moments with their closed forms (zero for the
/// degenerate preset) at tolerance 3 SE + 2 / n^2.
ValidationReport run_validation(const ValidateArgs& args);
void print_validation(std::ostream& os, const ValidationReport& r);

/// Each command reports errors on `err` and returns an ExitCode.
int cmd_fit(const FitArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_region(const RegionArgs& args, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err);

}  // namespace dta::cli
