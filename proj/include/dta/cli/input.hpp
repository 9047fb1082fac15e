#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "dta/errors.hpp"
#include "dta/study.hpp"

namespace dta::cli {

/// Malformed input; `line` is the 1-based line number in the file (0 when the
/// problem is not tied to one line).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class InputForm {
  counts,   // id,tp,fn,fp,tn
  summary,  // id,y_sens,y_spec,var_sens,var_spec (variances, not standard errors)
};

inline constexpr const char* kCountsHeader = "id,tp,fn,fp,tn";
inline constexpr const char* kSummaryHeader = "id,y_sens,y_spec,var_sens,var_spec";

struct InputTable {
  InputForm form = InputForm::summary;
  std::vector<std::string> ids;
  std::vector<CellCounts> counts;  // counts form only
  std::vector<Study> summaries;    // summary form only (ids duplicated in Study::id)
  std::vector<std::size_t> lines;  // source line of each row, for diagnostics

  std::size_t size() const { return ids.size(); }
  bool operator==(const InputTable& o) const;
};

/// Parses either CSV form, detected from the header. Blank lines are skipped,
/// '\r' line endings tolerated, numbers use '.' as decimal separator
/// regardless of locale.
InputTable parse_input_csv(std::istream& is);
InputTable read_input_csv(const std::string& path);

/// Writes the table in its own form with round-trip exact numbers.
void write_input_csv(std::ostream& os, const InputTable& table);

/// Converts to the logit-scale dataset. Count rows go through
/// summarize_counts with continuity correction `cc`; every within-study
/// variance must end up strictly positive. Errors name the offending row.
Dataset to_dataset(const InputTable& table, double cc = kDefaultContinuityCorrection);

}  // namespace dta::cli
