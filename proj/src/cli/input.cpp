#include "dta/cli/input.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace dta::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::string describe_row(std::size_t line, std::string_view id) {
  return "row at line " + std::to_string(line) + " (id '" + std::string(id) + "')";
}

double parse_real(std::string_view field, std::size_t line, std::string_view id, std::string_view column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError(line, describe_row(line, id) + ": column '" + std::string(column) +
                               "' is not a finite number: '" + std::string(field) + "'");
  }
  return v;
}

std::int64_t parse_count(std::string_view field, std::size_t line, std::string_view id, std::string_view column) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || v < 0) {
    throw ParseError(line, describe_row(line, id) + ": column '" + std::string(column) +
                               "' is not a non-negative integer: '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

bool InputTable::operator==(const InputTable& o) const {
  if (form != o.form || ids != o.ids || size() != o.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (form == InputForm::counts) {
      const CellCounts& a = counts[i];
      const CellCounts& b = o.counts[i];
      if (a.tp != b.tp || a.fn != b.fn || a.fp != b.fp || a.tn != b.tn) return false;
    } else {
      const Study& a = summaries[i];
      const Study& b = o.summaries[i];
      if (a.y_sens != b.y_sens || a.y_spec != b.y_spec || a.var_sens != b.var_sens ||
          a.var_spec != b.var_spec) {
        return false;
      }
    }
  }
  return true;
}

InputTable parse_input_csv(std::istream& is) {
  InputTable table;
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(is, raw)) {
    ++line;
    std::string_view text(raw);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (trim(text).empty()) continue;
    const std::vector<std::string_view> fields = split(text);

    if (!have_header) {
      std::string header;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) header += ',';
        header += fields[i];
      }
      if (header == kCountsHeader) {
        table.form = InputForm::counts;
      } else if (header == kSummaryHeader) {
        table.form = InputForm::summary;
      } else {
        throw ParseError(line, "unrecognized header '" + header + "'; expected '" + kCountsHeader +
                                   "' or '" + kSummaryHeader + "'");
      }
      have_header = true;
      continue;
    }

    const std::string_view id = fields.front();
    if (fields.size() != 5) {
      throw ParseError(line, describe_row(line, id) + ": expected 5 fields, found " +
                                 std::to_string(fields.size()));
    }
    table.ids.emplace_back(id);
    table.lines.push_back(line);
    if (table.form == InputForm::counts) {
      table.counts.push_back({parse_count(fields[1], line, id, "tp"), parse_count(fields[2], line, id, "fn"),
                              parse_count(fields[3], line, id, "fp"), parse_count(fields[4], line, id, "tn")});
    } else {
      Study s;
      s.id = std::string(id);
      s.y_sens = parse_real(fields[1], line, id, "y_sens");
      s.y_spec = parse_real(fields[2], line, id, "y_spec");
      s.var_sens = parse_real(fields[3], line, id, "var_sens");
      s.var_spec = parse_real(fields[4], line, id, "var_spec");
      if (!(s.var_sens > 0.0) || !(s.var_spec > 0.0)) {
        throw ParseError(line, describe_row(line, id) + ": within-study variances must be > 0");
      }
      table.summaries.push_back(std::move(s));
    }
  }
  if (!have_header) throw ParseError(0, "empty input: missing header");
  return table;
}

InputTable read_input_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open input file '" + path + "'");
  return parse_input_csv(in);
}

void write_input_csv(std::ostream& os, const InputTable& table) {
  if (table.form == InputForm::counts) {
    os << kCountsHeader << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
      const CellCounts& c = table.counts[i];
      fmt::print(os, "{},{},{},{},{}\n", table.ids[i], c.tp, c.fn, c.fp, c.tn);
    }
  } else {
    os << kSummaryHeader << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
      const Study& s = table.summaries[i];
      fmt::print(os, "{},{},{},{},{}\n", table.ids[i], s.y_sens, s.y_spec, s.var_sens, s.var_spec);
    }
  }
}

Dataset to_dataset(const InputTable& table, double cc) {
  if (table.form == InputForm::summary) return Dataset(table.summaries);
  std::vector<Study> studies;
  studies.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::size_t line = i < table.lines.size() ? table.lines[i] : 0;
    try {
      studies.push_back(summarize_counts(table.counts[i], cc, table.ids[i]));
    } catch (const DomainError& e) {
      throw ParseError(line, describe_row(line, table.ids[i]) + ": " + e.what());
    }
  }
  return Dataset(std::move(studies));
}

}  // namespace dta::cli
