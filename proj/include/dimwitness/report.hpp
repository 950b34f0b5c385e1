#pragma once

// Bar-chart report of measured witness values against their bound chains,
// plus the companion CSV.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dimwitness/witness.hpp"

namespace dimwitness {

struct ReportRow {
  std::string label;
  std::string witness;  // catalog name; selects the chart panel and its bound lines
  double value;
  double sigma;
  double theory;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

inline constexpr std::string_view kCsvHeader = "label,value,sigma,theory";

// bit/trit/quart for classical, qubit/qutrit/ququart for quantum.
std::string bound_name(Model model, int dim);

// One panel per witness in order of first appearance. Throws InvariantViolation
// for an empty or duplicate-labelled row set and NotFound for a witness
// outside the catalog.
std::string render_svg(std::span<const ReportRow> rows);

std::string render_csv(std::span<const ReportRow> rows);
// Rows parsed back have an empty witness field. Throws ParseError.
std::vector<ReportRow> parse_csv(std::string_view text);

// Estimate JSON: {"label", "witness", "value", "sigma", "theory", ...}.
ReportRow row_from_json(const nlohmann::json& j);

// Shortest decimal that parses back to exactly v.
std::string shortest(double v);

}  // namespace dimwitness
