#include "dimwitness/certify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace dimwitness {

DimensionCertificate certify(const Witness& w, const BoundTable& bounds, const WitnessEstimate& est, double k) {
  if (!(est.sigma >= 0.0)) throw InvariantViolation("certify: sigma must be >= 0");
  if (!(k > 0.0)) throw InvariantViolation("certify: confidence multiplier k must be > 0");
  if (bounds.empty()) throw NotFound("certify: no bound table for witness '" + w.name() + "'");

  DimensionCertificate cert{w.name(), est.value, est.sigma, {}, 1, 1, k, {}, bounds};
  int top_classical = 0;
  int top_quantum = 0;
  for (const auto& b : bounds.entries()) {
    if (!(est.value - k * est.sigma > b.value)) continue;
    const double significance =
        est.sigma > 0.0 ? (est.value - b.value) / est.sigma : std::numeric_limits<double>::infinity();
    cert.violations.push_back({b.model, b.dim, b.value, significance});
    int& top = b.model == Model::Classical ? top_classical : top_quantum;
    top = std::max(top, b.dim);
  }
  if (cert.nontrivial()) {
    cert.min_classical_dim = std::max(top_classical + 1, 2);
    cert.min_quantum_dim = std::max(top_quantum + 1, 2);
  }

  const double amax = algebraic_max(w);
  if (est.value > amax + 3.0 * est.sigma) {
    std::ostringstream msg;
    msg << "data-sanity: value " << est.value << " exceeds the algebraic maximum " << amax
        << " by more than 3 sigma; impossible for any model";
    cert.warnings.push_back(msg.str());
  }
  if (est.degenerate_variance) {
    cert.warnings.push_back("degenerate-variance: some settings recorded a single outcome only; sigma is an underestimate");
  }
  return cert;
}

DimensionCertificate certify(std::string_view witness_name, const WitnessEstimate& est, double k) {
  const auto entry = catalog(witness_name);
  return certify(entry.witness, entry.bounds, est, k);
}

namespace {

nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

nlohmann::json to_json(const DimensionCertificate& cert) {
  auto violations = nlohmann::json::array();
  for (const auto& v : cert.violations) {
    violations.push_back({{"model", to_string(v.model)},
                          {"dim", v.dim},
                          {"bound", v.bound},
                          {"significance", number_or_inf(v.significance)}});
  }
  auto bounds = nlohmann::json::array();
  for (const auto& b : cert.bounds.entries()) {
    bounds.push_back({{"model", to_string(b.model)}, {"dim", b.dim}, {"bound", b.value}, {"exact", b.exact}});
  }
  return {{"witness_name", cert.witness_name},
          {"value", cert.value},
          {"sigma", cert.sigma},
          {"violations", std::move(violations)},
          {"min_classical_dim", cert.min_classical_dim},
          {"min_quantum_dim", cert.min_quantum_dim},
          {"confidence_sigmas", cert.confidence_sigmas},
          {"nontrivial", cert.nontrivial()},
          {"warnings", cert.warnings},
          {"bounds", std::move(bounds)}};
}

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::int64_t integer_field(const nlohmann::json& rec, const char* key, const std::string& where) {
  if (!rec.contains(key)) throw ParseError(where + "." + key + ": missing");
  const auto& v = rec.at(key);
  if (!v.is_number_integer()) throw ParseError(where + "." + key + ": expected integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw ParseError(where + "." + key + ": value out of range");
  }
  return v.get<std::int64_t>();
}

}  // namespace

CountsFile parse_counts(std::string_view text, bool merge) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("counts: malformed JSON at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("counts: top level must be an object");
  if (!j.contains("witness") || !j.at("witness").is_string()) throw ParseError("counts.witness: expected string");
  if (!j.contains("records") || !j.at("records").is_array()) throw ParseError("counts.records: expected array");

  CountsFile out{j.at("witness").get<std::string>(), {}};
  std::map<std::pair<int, int>, std::size_t> seen;
  const auto& records = j.at("records");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const std::string where = "counts.records[" + std::to_string(i) + "]";
    if (!rec.is_object()) throw ParseError(where + ": expected object");
    const auto x = integer_field(rec, "x", where);
    const auto y = integer_field(rec, "y", where);
    const auto np = integer_field(rec, "n_plus", where);
    const auto nm = integer_field(rec, "n_minus", where);
    if (x < 1 || y < 1 || x > 1000 || y > 1000) throw ParseError(where + ": x and y are 1-based indices");
    if (np < 0 || nm < 0) throw InvariantViolation(where + ": negative count");
    const CountRecord r{static_cast<int>(x - 1), static_cast<int>(y - 1), static_cast<std::uint64_t>(np),
                        static_cast<std::uint64_t>(nm)};
    const auto [it, inserted] = seen.emplace(std::pair{r.x, r.y}, out.records.size());
    if (inserted) {
      out.records.push_back(r);
    } else if (merge) {
      out.records[it->second].n_plus += r.n_plus;
      out.records[it->second].n_minus += r.n_minus;
    } else {
      throw ParseError(where + ": duplicate record for (x=" + std::to_string(x) + ", y=" + std::to_string(y) +
                       "); pass --merge to sum duplicates");
    }
  }
  return out;
}

CountsFile load_counts(const std::filesystem::path& path, bool merge) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("counts: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_counts(buf.str(), merge);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace dimwitness
