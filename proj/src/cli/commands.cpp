#include "dta/cli/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dta/cli/input.hpp"
#include "dta/errors.hpp"
#include "dta/random.hpp"

namespace dta::cli {

namespace {

constexpr std::uint64_t kHeterogeneousDesignSeed = 16;

}  // namespace

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitBadInput;
  } catch (const InsufficientStudies& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitTooFewStudies;
  } catch (const RegionUndefined& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitRegionUndefined;
  } catch (const DomainError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitNumericFailure;
  }
}

namespace {

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

Dataset load(const std::string& path) { return to_dataset(read_input_csv(path)); }

}  // namespace

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = fs::path(path + ".partial");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw DomainError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw DomainError("cannot rename onto '" + path + "': " + ec.message());
  }
}

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* env = std::getenv("DTA_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  const std::string_view s(env);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("DTA_SEED is not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::homogeneous:
      return "homogeneous";
    case Preset::heterogeneous:
      return "heterogeneous";
    case Preset::degenerate:
      return "degenerate";
  }
  return "unknown";
}

Preset parse_preset(std::string_view s) {
  if (s == "homogeneous") return Preset::homogeneous;
  if (s == "heterogeneous") return Preset::heterogeneous;
  if (s == "degenerate") return Preset::degenerate;
  throw DomainError("unknown preset '" + std::string(s) + "'");
}

oracle::OracleConfig preset_config(Preset p, std::size_t reps, std::uint64_t seed, unsigned threads) {
  oracle::OracleConfig cfg;
  cfg.reps = reps;
  cfg.seed = seed;
  cfg.threads = threads;
  switch (p) {
    case Preset::homogeneous:
      cfg.n = 32;
      cfg.sigma_true = Sym2::diag(0.4, 0.4);
      cfg.within_vars.assign(cfg.n, {0.2, 0.2});
      break;
    case Preset::heterogeneous: {
      cfg.n = 16;
      cfg.sigma_true = {0.4, 0.08, 0.4};
      Rng design(stream_seed(kHeterogeneousDesignSeed, {}));
      cfg.within_vars = simlab::gen_within_variances(cfg.n, design);
      break;
    }
    case Preset::degenerate:
      cfg.n = 16;
      cfg.sigma_true = Sym2::diag(0.4, 0.4);
      cfg.within_vars.assign(cfg.n, {0.2, 0.2});
      break;
  }
  return cfg;
}

ValidationReport run_validation(const ValidateArgs& args) {
  const oracle::OracleConfig cfg = preset_config(args.preset, args.reps, args.seed, args.threads);
  const bool inject = args.preset == Preset::degenerate;
  const oracle::BMoments mc =
      oracle::mc_b_moments(cfg, inject ? oracle::SigmaSource::inject_truth : oracle::SigmaSource::estimate);

  BTerms expected;
  if (!inject) expected = b_star(oracle::design_dataset(cfg, std::vector<Vec2>(cfg.n)), cfg.sigma_true);

  ValidationReport r;
  r.preset = args.preset;
  r.n = cfg.n;
  r.reps = mc.reps;
  const double slack = 2.0 / static_cast<double>(cfg.n * cfg.n);
  const auto add = [&](const char* name, double e, double m, double se) {
    TermCheck c{name, e, m, se, 3.0 * se + slack, false};
    c.pass = std::abs(m - e) <= c.tolerance;
    r.checks.push_back(c);
  };
  add("b1", expected.b1, mc.mean.b1, mc.se.b1);
  add("b2", expected.b2, mc.mean.b2, mc.se.b2);
  add("b3", expected.b3, mc.mean.b3, mc.se.b3);
  r.pass = true;
  for (const TermCheck& c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

void print_validation(std::ostream& os, const ValidationReport& r) {
  fmt::print(os, "preset {} n={} reps={}\n", to_string(r.preset), r.n, r.reps);
  fmt::print(os, "{:<4} {:>12} {:>12} {:>11} {:>11} {:>11}  {}\n", "term", "closed_form", "monte_carlo", "se",
             "abs_diff", "tolerance", "result");
  for (const TermCheck& c : r.checks) {
    fmt::print(os, "{:<4} {:>12.6f} {:>12.6f} {:>11.3e} {:>11.3e} {:>11.3e}  {}\n", c.name, c.expected,
               c.estimate, c.se, std::abs(c.estimate - c.expected), c.tolerance, c.pass ? "PASS" : "FAIL");
  }
  fmt::print(os, "overall {}\n", r.pass ? "PASS" : "FAIL");
}

int cmd_fit(const FitArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(args.alpha > 0.0 && args.alpha < 1.0)) throw DomainError("--alpha must lie in (0, 1)");
    const Dataset d = load(args.input);
    const FitReport report = build_fit_report(d, args.alpha, args.estimator);
    const std::string json = to_json(report).dump(2) + "\n";
    const std::string svg = args.svg_path.empty() ? std::string{} : render_svg(report, d);
    for (const std::string& w : report.warnings) fmt::print(err, "warning: {}\n", w);
    emit(args.json_path, json, out);
    if (!args.svg_path.empty()) write_file_atomic(args.svg_path, svg);
    return static_cast<int>(kExitOk);
  });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.tau2s.empty() || args.rhos.empty() || args.ns.empty()) {
      throw DomainError("--tau2, --rho and --n each need at least one value");
    }
    const std::vector<simlab::Scenario> grid =
        simlab::make_grid(args.tau2s, args.rhos, args.ns, args.reps, args.alpha, args.seed);
    simlab::GridOptions opts;
    opts.truncation = args.truncation;
    opts.ncr_estimator = args.ncr_estimator;
    opts.threads = args.threads;
    const std::vector<simlab::GridRow> rows = simlab::run_grid(grid, opts);
    std::ostringstream csv;
    simlab::write_grid_csv(csv, rows);
    emit(args.out, csv.str(), out);
    return static_cast<int>(kExitOk);
  });
}

int cmd_region(const RegionArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(args.alpha > 0.0 && args.alpha < 1.0)) throw DomainError("--alpha must lie in (0, 1)");
    if (args.points < 3) throw DomainError("--points must be >= 3");
    const Dataset d = load(args.input);
    if (d.size() < 3) throw InsufficientStudies(d.size(), 3);
    const ConfidenceRegion r = confidence_region(d, args.method, args.alpha);
    const std::vector<Vec2> pts = region_boundary(r, args.points);
    std::string csv;
    if (args.space == Space::logit) {
      csv = "y_sens,y_spec\n";
      for (const Vec2& p : pts) csv += fmt::format("{},{}\n", p.x, p.y);
    } else {
      csv = "fpr,sens\n";
      for (const RocPoint& p : to_roc_space(pts)) csv += fmt::format("{},{}\n", p.fpr, p.sens);
    }
    emit(args.out, csv, out);
    return static_cast<int>(kExitOk);
  });
}

int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ValidationReport r = run_validation(args);
    print_validation(out, r);
    return static_cast<int>(r.pass ? kExitOk : kExitValidationFailed);
  });
}

}  // namespace dta::cli
