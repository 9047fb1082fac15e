#include "dta/cli/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dta/errors.hpp"

namespace dta::cli {

namespace {

using nlohmann::json;

json vec_json(const Vec2& v) { return json::array({v.x, v.y}); }

json sym_json(const Sym2& s) { return json::array({json::array({s.a11, s.a12}), json::array({s.a12, s.a22})}); }

json region_json(const ConfidenceRegion& r, Estimator estimator) {
  return {
      {"method", std::string(to_string(r.method))},
      {"estimator", std::string(to_string(estimator))},
      {"alpha", r.alpha},
      {"center", vec_json(r.center)},
      {"shape", sym_json(r.shape)},
      {"threshold", r.threshold},
      {"h", r.h},
      {"area", region_area(r)},
  };
}

std::vector<double> within_column(const Dataset& d, bool sens) {
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = sens ? d[i].var_sens : d[i].var_spec;
  return out;
}

}  // namespace

std::string_view to_string(EstimatorChoice c) {
  switch (c) {
    case EstimatorChoice::moment:
      return "moment";
    case EstimatorChoice::reml:
      return "reml";
    case EstimatorChoice::both:
      return "both";
  }
  return "unknown";
}

EstimatorChoice parse_estimator_choice(std::string_view s) {
  if (s == "moment") return EstimatorChoice::moment;
  if (s == "reml") return EstimatorChoice::reml;
  if (s == "both") return EstimatorChoice::both;
  throw DomainError("unknown estimator '" + std::string(s) + "'");
}

FitReport build_fit_report(const Dataset& d, double alpha, EstimatorChoice choice) {
  if (d.size() < 3) throw InsufficientStudies(d.size(), 3);
  FitReport r;
  r.choice = choice;
  r.alpha = alpha;
  r.moment = fit(d, Estimator::moment_bc, alpha);
  if (choice != EstimatorChoice::moment) r.reml = fit(d, Estimator::reml, alpha);
  r.primary = choice == EstimatorChoice::reml ? *r.reml : r.moment;

  r.ncr = confidence_region(r.primary, Method::ncr, alpha);
  r.ccr = confidence_region(r.moment, Method::ccr, alpha);
  if (choice == EstimatorChoice::both) r.ncr_reml = confidence_region(*r.reml, Method::ncr, alpha);

  const std::vector<double> ws = within_column(d, true);
  const std::vector<double> wp = within_column(d, false);
  r.i2_sens = i_squared(ws, r.primary.sigma.a11);
  r.i2_spec = i_squared(wp, r.primary.sigma.a22);
  r.sroc = sroc_curve(r.primary.beta, r.primary.sigma, default_fpr_grid());

  const double h = *r.moment.h;
  if (h_unreliable(h)) {
    r.warnings.push_back(fmt::format("|h| = {:.4g} exceeds 1; the corrected region is outside the range "
                                     "where the expansion is accurate",
                                     std::abs(h)));
  }
  if (r.moment.projected) {
    r.warnings.push_back("moment estimate of sigma was not PSD and was projected onto the PSD cone");
  }
  if (r.reml && r.reml->reml && !r.reml->reml->converged) {
    r.warnings.push_back(fmt::format("REML did not converge after {} iterations", r.reml->reml->iterations));
  }
  return r;
}

json to_json(const FitReport& r) {
  json regions = {
      {"ncr", region_json(r.ncr, r.primary.estimator)},
      {"ccr", region_json(r.ccr, Estimator::moment_bc)},
  };
  if (r.ncr_reml) regions["ncr_reml"] = region_json(*r.ncr_reml, Estimator::reml);

  json sroc = json::array();
  for (const RocPoint& p : r.sroc) sroc.push_back(json::array({p.fpr, p.sens}));

  const BTerms& b = *r.moment.b;
  json out = {
      {"beta", vec_json(r.primary.beta)},
      {"sigma", sym_json(r.primary.sigma)},
      {"v", sym_json(r.primary.v)},
      {"estimator", std::string(to_string(r.choice))},
      {"h", *r.moment.h},
      {"b_terms", {{"b1", b.b1}, {"b2", b.b2}, {"b3", b.b3}}},
      {"regions", regions},
      {"i2", {{"sens", r.i2_sens}, {"spec", r.i2_spec}}},
      {"sroc", sroc},
      {"warnings", r.warnings},
  };
  return out;
}

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 60.0;

double px(double fpr) { return kMargin + fpr * kSize; }
double py(double sens) { return kMargin + (1.0 - sens) * kSize; }

std::string polyline(const std::vector<RocPoint>& pts, bool closed) {
  std::string s;
  for (const RocPoint& p : pts) s += fmt::format("{:.2f},{:.2f} ", px(p.fpr), py(p.sens));
  if (closed && !pts.empty()) s += fmt::format("{:.2f},{:.2f}", px(pts.front().fpr), py(pts.front().sens));
  return s;
}

}  // namespace

std::string render_svg(const FitReport& r, const Dataset& d) {
  const double full = kSize + 2.0 * kMargin;
  std::string s = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" "
      "viewBox=\"0 0 {0} {0}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n"
      "<rect x=\"{1}\" y=\"{1}\" width=\"{2}\" height=\"{2}\" fill=\"none\" stroke=\"black\"/>\n",
      full, kMargin, kSize);

  for (int i = 0; i <= 5; ++i) {
    const double t = i / 5.0;
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                     px(t), py(0.0), py(0.0) + 5.0);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.1f}</text>\n", px(t),
                     py(0.0) + 18.0, t);
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
                     px(0.0) - 5.0, py(t), px(0.0));
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n", px(0.0) - 8.0,
                     py(t) + 4.0, t);
  }
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">False positive rate</text>\n",
                   px(0.5), full - 15.0);
  s += fmt::format(
      "<text x=\"15\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 15 {0:.2f})\">"
      "Sensitivity</text>\n",
      py(0.5));

  s += "<g fill=\"grey\" fill-opacity=\"0.6\">\n";
  for (const Study& st : d) {
    const RocPoint p = to_roc_space(st.y());
    s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\"/>\n", px(p.fpr), py(p.sens));
  }
  s += "</g>\n";

  s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
                   polyline(r.sroc, false));
  s += fmt::format(
      "<polyline points=\"{}\" fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" stroke-dasharray=\"6,3\"/>\n",
      polyline(to_roc_space(region_boundary(r.ncr, kSvgBoundaryPoints)), true));
  s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"/>\n",
                   polyline(to_roc_space(region_boundary(r.ccr, kSvgBoundaryPoints)), true));

  const RocPoint c = to_roc_space(r.primary.beta);
  s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"black\"/>\n", px(c.fpr), py(c.sens));

  const double lx = px(0.62);
  const double ly = py(0.16);
  s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"blue\" "
                   "stroke-dasharray=\"6,3\"/><text x=\"{3:.2f}\" y=\"{4:.2f}\">naive region</text>\n",
                   lx, ly, lx + 24.0, lx + 30.0, ly + 4.0);
  s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"red\"/>"
                   "<text x=\"{3:.2f}\" y=\"{4:.2f}\">corrected region</text>\n",
                   lx, ly + 18.0, lx + 24.0, lx + 30.0, ly + 22.0);
  s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
                   "<text x=\"{3:.2f}\" y=\"{4:.2f}\">SROC</text>\n",
                   lx, ly + 36.0, lx + 24.0, lx + 30.0, ly + 40.0);
  s += "</svg>\n";
  return s;
}

}  // namespace dta::cli
