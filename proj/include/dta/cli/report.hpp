#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dta/region.hpp"
#include "dta/study.hpp"
#include "dta/summary.hpp"

namespace dta::cli {

enum class EstimatorChoice { moment, reml, both };

std::string_view to_string(EstimatorChoice c);
/// Accepts "moment", "reml" and "both"; throws DomainError otherwise.
EstimatorChoice parse_estimator_choice(std::string_view s);

struct FitReport {
  EstimatorChoice choice = EstimatorChoice::moment;
  double alpha = 0.05;
  FitResult primary;                 // moment_bc unless choice == reml
  FitResult moment;                  // always present; carries h and the B terms
  std::optional<FitResult> reml;     // present for reml and both
  ConfidenceRegion ncr;              // from `primary`
  ConfidenceRegion ccr;              // from `moment`
  std::optional<ConfidenceRegion> ncr_reml;  // both only
  double i2_sens = 0.0;
  double i2_spec = 0.0;
  std::vector<RocPoint> sroc;
  std::vector<std::string> warnings;
};

/// Fits the dataset and builds both regions. Throws InsufficientStudies for
/// n < 3 and RegionUndefined when 1 + h <= 0.
FitReport build_fit_report(const Dataset& d, double alpha, EstimatorChoice choice);

nlohmann::json to_json(const FitReport& r);

/// Static SVG 1.1 plot in ROC space: unit axes with false positive rate to the
/// right and sensitivity upward, study points (grey), SROC curve (black),
/// naive region (dashed blue), corrected region (solid red), summary point.
std::string render_svg(const FitReport& r, const Dataset& d);

inline constexpr int kSvgBoundaryPoints = 256;

}  // namespace dta::cli
