#include "dimwitness/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace dimwitness {

namespace {

// Chart geometry, in SVG user units.
constexpr double kChartWidth = 760.0;
constexpr double kPlotLeft = 190.0;   // labels live to the left of this
constexpr double kPlotWidth = 530.0;
constexpr double kTitleBand = 24.0;
constexpr double kBoundLabelBand = 34.0;  // two staggered lines of bound labels
constexpr double kRowHeight = 30.0;
constexpr double kBarHeight = 16.0;
constexpr double kAxisBand = 34.0;
constexpr double kPanelGap = 18.0;
constexpr double kCapHalf = 4.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct BoundLine {
  double value;
  std::string label;
};

std::vector<BoundLine> bound_lines(const BoundTable& table) {
  std::vector<Bound> sorted = table.entries();
  std::stable_sort(sorted.begin(), sorted.end(), [](const Bound& a, const Bound& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.model == Model::Classical && b.model == Model::Quantum;
  });
  std::vector<BoundLine> lines;
  for (const auto& b : sorted) {
    const auto name = bound_name(b.model, b.dim);
    if (!lines.empty() && std::abs(lines.back().value - b.value) < 1e-9) {
      lines.back().label += "," + name;
    } else {
      lines.push_back({b.value, name});
    }
  }
  return lines;
}

std::string witness_title(std::string_view name) {
  std::string t(name);
  if (!t.empty()) t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  return t;
}

}  // namespace

std::string bound_name(Model model, int dim) {
  static const std::map<int, std::string> classical{{1, "trivial"}, {2, "bit"}, {3, "trit"}, {4, "quart"}};
  static const std::map<int, std::string> quantum{{1, "trivial"}, {2, "qubit"}, {3, "qutrit"}, {4, "ququart"}};
  const auto& names = model == Model::Classical ? classical : quantum;
  if (const auto it = names.find(dim); it != names.end()) return it->second;
  return (model == Model::Classical ? "c" : "q") + std::to_string(dim);
}

std::string render_svg(std::span<const ReportRow> rows) {
  if (rows.empty()) throw InvariantViolation("report: no rows");
  std::set<std::string> labels;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ReportRow*>> groups;
  for (const auto& r : rows) {
    if (!labels.insert(r.label).second) throw InvariantViolation("report: duplicate row label '" + r.label + "'");
    if (!groups.contains(r.witness)) order.push_back(r.witness);
    groups[r.witness].push_back(&r);
  }

  std::ostringstream body;
  double top = 10.0;
  for (const auto& name : order) {
    const auto entry = catalog(name);
    const auto& group = groups[name];
    const auto lines = bound_lines(entry.bounds);

    double lo = lines.front().value;
    double hi = std::max(lines.back().value, algebraic_max(entry.witness));
    for (const auto* r : group) {
      lo = std::min({lo, r->value - r->sigma, r->theory});
      hi = std::max({hi, r->value + r->sigma, r->theory});
    }
    const double xmin = std::floor(lo) - 1.0;
    const double xmax = std::ceil(hi) + 0.5;
    const auto px = [&](double v) { return kPlotLeft + (v - xmin) / (xmax - xmin) * kPlotWidth; };

    const double rows_top = top + kTitleBand + kBoundLabelBand;
    const double rows_bottom = rows_top + kRowHeight * static_cast<double>(group.size());

    body << "  <g class=\"panel\" id=\"panel-" << escape_xml(name) << "\">\n";
    body << "    <text x=\"" << fmt(kPlotLeft) << "\" y=\"" << fmt(top + 16) << "\" font-weight=\"bold\">"
         << escape_xml(witness_title(name)) << "</text>\n";

    for (std::size_t i = 0; i < lines.size(); ++i) {
      const double x = px(lines[i].value);
      const double label_y = top + kTitleBand + (i % 2 == 0 ? 12.0 : 26.0);
      body << "    <line class=\"bound\" x1=\"" << fmt(x) << "\" y1=\"" << fmt(rows_top - 4) << "\" x2=\"" << fmt(x)
           << "\" y2=\"" << fmt(rows_bottom) << "\" stroke=\"#555\" stroke-dasharray=\"5,4\"/>\n";
      body << "    <text class=\"bound-label\" x=\"" << fmt(x) << "\" y=\"" << fmt(label_y)
           << "\" text-anchor=\"middle\" font-size=\"11\">" << escape_xml(lines[i].label) << "</text>\n";
    }

    for (std::size_t i = 0; i < group.size(); ++i) {
      const auto& r = *group[i];
      const double row_y = rows_top + kRowHeight * static_cast<double>(i);
      const double bar_y = row_y + (kRowHeight - kBarHeight) / 2.0;
      const double mid_y = row_y + kRowHeight / 2.0;
      const double x0 = px(xmin);
      const double xv = px(r.value);
      body << "    <text class=\"row-label\" x=\"" << fmt(kPlotLeft - 8) << "\" y=\"" << fmt(mid_y + 4)
           << "\" text-anchor=\"end\" font-size=\"12\">" << escape_xml(r.label) << "</text>\n";
      body << "    <rect class=\"bar\" x=\"" << fmt(std::min(x0, xv)) << "\" y=\"" << fmt(bar_y) << "\" width=\""
           << fmt(std::abs(xv - x0)) << "\" height=\"" << fmt(kBarHeight) << "\" fill=\"#7a9cc6\"/>\n";
      const double e0 = px(r.value - r.sigma);
      const double e1 = px(r.value + r.sigma);
      body << "    <g class=\"errorbar\" stroke=\"#000\">"
           << "<line x1=\"" << fmt(e0) << "\" y1=\"" << fmt(mid_y) << "\" x2=\"" << fmt(e1) << "\" y2=\"" << fmt(mid_y)
           << "\"/>"
           << "<line x1=\"" << fmt(e0) << "\" y1=\"" << fmt(mid_y - kCapHalf) << "\" x2=\"" << fmt(e0) << "\" y2=\""
           << fmt(mid_y + kCapHalf) << "\"/>"
           << "<line x1=\"" << fmt(e1) << "\" y1=\"" << fmt(mid_y - kCapHalf) << "\" x2=\"" << fmt(e1) << "\" y2=\""
           << fmt(mid_y + kCapHalf) << "\"/></g>\n";
      body << "    <circle class=\"theory\" cx=\"" << fmt(px(r.theory)) << "\" cy=\"" << fmt(mid_y)
           << "\" r=\"3\" fill=\"none\" stroke=\"#c00\"/>\n";
    }

    body << "    <line class=\"axis\" x1=\"" << fmt(kPlotLeft) << "\" y1=\"" << fmt(rows_bottom) << "\" x2=\""
         << fmt(kPlotLeft + kPlotWidth) << "\" y2=\"" << fmt(rows_bottom) << "\" stroke=\"#000\"/>\n";
    for (double t = std::ceil(xmin); t <= xmax; t += 1.0) {
      const double x = px(t);
      body << "    <line x1=\"" << fmt(x) << "\" y1=\"" << fmt(rows_bottom) << "\" x2=\"" << fmt(x) << "\" y2=\""
           << fmt(rows_bottom + 5) << "\" stroke=\"#000\"/><text x=\"" << fmt(x) << "\" y=\"" << fmt(rows_bottom + 18)
           << "\" text-anchor=\"middle\" font-size=\"11\">" << static_cast<long long>(t) << "</text>\n";
    }
    body << "  </g>\n";
    top = rows_bottom + kAxisBand + kPanelGap;
  }

  const double height = top;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kChartWidth) << "\" height=\"" << fmt(height)
      << "\" viewBox=\"0 0 " << fmt(kChartWidth) << " " << fmt(height) << "\" font-family=\"sans-serif\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n"
      << body.str() << "</svg>\n";
  return svg.str();
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("csv line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

double parse_number(const std::string& s, std::size_t line_no, const char* column) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("csv line " + std::to_string(line_no) + ", column " + column + ": '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

std::string render_csv(std::span<const ReportRow> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += csv_field(r.label) + "," + shortest(r.value) + "," + shortest(r.sigma) + "," + shortest(r.theory) + "\n";
  }
  return out;
}

std::vector<ReportRow> parse_csv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kCsvHeader) throw ParseError("csv: expected header '" + std::string(kCsvHeader) + "'");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv_line(line, line_no);
    if (f.size() != 4) throw ParseError("csv line " + std::to_string(line_no) + ": expected 4 fields");
    rows.push_back({f[0], "", parse_number(f[1], line_no, "value"), parse_number(f[2], line_no, "sigma"),
                    parse_number(f[3], line_no, "theory")});
  }
  if (line_no == 0) throw ParseError("csv: empty input");
  return rows;
}

ReportRow row_from_json(const nlohmann::json& j) {
  const auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("estimate: missing field '") + key + "'");
    return j.at(key);
  };
  const auto& label = need("label");
  const auto& witness = need("witness");
  const auto& value = need("value");
  const auto& sigma = need("sigma");
  const auto& theory = need("theory");
  if (!label.is_string() || !witness.is_string()) throw ParseError("estimate: label and witness must be strings");
  if (!value.is_number() || !sigma.is_number() || !theory.is_number()) {
    throw ParseError("estimate: value, sigma and theory must be numbers");
  }
  return {label.get<std::string>(), witness.get<std::string>(), value.get<double>(), sigma.get<double>(),
          theory.get<double>()};
}

}  // namespace dimwitness
