// dtameta: bivariate meta-analysis of diagnostic accuracy from the command line.
//
//   dtameta fit      --input F [--alpha A] [--estimator moment|reml|both] [--json F] [--svg F]
//   dtameta simulate --tau2 LIST --rho LIST --n LIST [--reps R] [--seed S] [--out F]
//   dtameta region   --input F [--method ncr|ccr] [--alpha A] [--points M] [--space logit|roc] [--out F]
//   dtameta validate [--preset homogeneous|heterogeneous|degenerate] [--reps R] [--seed S]
//
// DTA_SEED supplies the seed when --seed is absent.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dta/cli/commands.hpp"
#include "dta/errors.hpp"

namespace {

using namespace dta;
using namespace dta::cli;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  return flag ? *flag : default_seed();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bivariate random-effects meta-analysis of diagnostic test accuracy"};
  app.require_subcommand(1);

  FitArgs fit;
  std::string fit_estimator = "moment";
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit the model and write a JSON report (and optional SVG)");
  fit_cmd->add_option("--input", fit.input, "Study CSV (count or summary form)")->required();
  fit_cmd->add_option("--alpha", fit.alpha, "One minus the confidence level")->capture_default_str();
  fit_cmd->add_option("--estimator", fit_estimator, "Estimator for the summary and naive region")
      ->check(CLI::IsMember({"moment", "reml", "both"}))
      ->capture_default_str();
  fit_cmd->add_option("--json", fit.json_path, "JSON report path (default: stdout)");
  fit_cmd->add_option("--svg", fit.svg_path, "SVG plot path");

  SimulateArgs sim;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_truncation = "reject";
  std::string sim_ncr = "reml";
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a coverage simulation grid and write CSV");
  sim_cmd->add_option("--tau2", sim.tau2s, "Between-study variances, comma separated")
      ->delimiter(',')
      ->required();
  sim_cmd->add_option("--rho", sim.rhos, "Between-study correlations, comma separated")
      ->delimiter(',')
      ->required();
  sim_cmd->add_option("--n", sim.ns, "Study counts, comma separated")->delimiter(',')->required();
  sim_cmd->add_option("--reps", sim.reps, "Replications per scenario")->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "Master seed");
  sim_cmd->add_option("--alpha", sim.alpha, "One minus the confidence level")->capture_default_str();
  sim_cmd->add_option("--truncation", sim_truncation, "Within-variance truncation")
      ->check(CLI::IsMember({"reject", "clip"}))
      ->capture_default_str();
  sim_cmd->add_option("--ncr-estimator", sim_ncr, "Estimator behind the naive region")
      ->check(CLI::IsMember({"moment", "reml"}))
      ->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Output CSV path (default: stdout)");

  RegionArgs reg;
  std::string reg_method = "ccr";
  std::string reg_space = "logit";
  CLI::App* reg_cmd = app.add_subcommand("region", "Write the boundary of a confidence region as CSV");
  reg_cmd->add_option("--input", reg.input, "Study CSV (count or summary form)")->required();
  reg_cmd->add_option("--method", reg_method, "Region type")
      ->check(CLI::IsMember({"ncr", "ccr"}))
      ->capture_default_str();
  reg_cmd->add_option("--alpha", reg.alpha, "One minus the confidence level")->capture_default_str();
  reg_cmd->add_option("--points", reg.points, "Boundary points")->capture_default_str();
  reg_cmd->add_option("--space", reg_space, "Output coordinates")
      ->check(CLI::IsMember({"logit", "roc"}))
      ->capture_default_str();
  reg_cmd->add_option("--out", reg.out, "Output CSV path (default: stdout)");

  ValidateArgs val;
  std::string val_preset = "homogeneous";
  std::optional<std::uint64_t> val_seed;
  CLI::App* val_cmd = app.add_subcommand("validate", "Check the closed-form correction terms by Monte Carlo");
  val_cmd->add_option("--preset", val_preset, "Named configuration")
      ->check(CLI::IsMember({"homogeneous", "heterogeneous", "degenerate"}))
      ->capture_default_str();
  val_cmd->add_option("--reps", val.reps, "Monte Carlo replications")->capture_default_str();
  val_cmd->add_option("--seed", val_seed, "Master seed");
  val_cmd->add_option("--threads", val.threads, "Worker threads (0 = all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*fit_cmd) {
      fit.estimator = parse_estimator_choice(fit_estimator);
      return cmd_fit(fit, std::cout, std::cerr);
    }
    if (*sim_cmd) {
      sim.seed = resolve_seed(sim_seed);
      sim.truncation = sim_truncation == "clip" ? simlab::Truncation::clip : simlab::Truncation::reject;
      sim.ncr_estimator = sim_ncr == "moment" ? Estimator::moment_bc : Estimator::reml;
      return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*reg_cmd) {
      reg.method = reg_method == "ncr" ? Method::ncr : Method::ccr;
      reg.space = reg_space == "roc" ? Space::roc : Space::logit;
      return cmd_region(reg, std::cout, std::cerr);
    }
    val.preset = parse_preset(val_preset);
    val.seed = resolve_seed(val_seed);
    return cmd_validate(val, std::cout, std::cerr);
  } catch (const dta::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
}
