#include "dimwitness/witness.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace dimwitness {

namespace {

void check_rectangular(const Table& t, const char* what) {
  if (t.empty() || t.front().empty()) throw DimensionError(std::string(what) + ": empty table");
  for (const auto& row : t) {
    if (row.size() != t.front().size()) throw DimensionError(std::string(what) + ": ragged table");
  }
}

}  // namespace

Witness::Witness(std::string name, Table coeffs, bool take_abs)
    : name_(std::move(name)), coeffs_(std::move(coeffs)), take_abs_(take_abs) {
  check_rectangular(coeffs_, "Witness");
  bool any = false;
  for (const auto& row : coeffs_) {
    for (double c : row) {
      if (!std::isfinite(c)) throw InvariantViolation("Witness: non-finite coefficient");
      any = any || c != 0.0;
    }
  }
  if (!any) throw InvariantViolation("Witness '" + name_ + "': all coefficients are zero");
}

ExpectationTable::ExpectationTable(Table values) : values_(std::move(values)) {
  check_rectangular(values_, "ExpectationTable");
  for (const auto& row : values_) {
    for (double e : row) {
      if (!std::isfinite(e) || std::abs(e) > 1.0 + kExpectationTol) {
        throw InvariantViolation("ExpectationTable: entry " + std::to_string(e) + " outside [-1, 1]");
      }
    }
  }
}

std::string_view to_string(Model model) { return model == Model::Classical ? "classical" : "quantum"; }

Model model_from_string(std::string_view text) {
  if (text == "classical") return Model::Classical;
  if (text == "quantum") return Model::Quantum;
  throw ParseError("unknown model '" + std::string(text) + "' (expected classical|quantum)");
}

BoundTable::BoundTable(std::vector<Bound> entries) : entries_(std::move(entries)) {
  std::map<std::pair<Model, int>, double> by_key;
  for (const auto& b : entries_) {
    if (b.dim < 1 || !std::isfinite(b.value)) throw InvariantViolation("BoundTable: invalid entry");
    if (!by_key.emplace(std::pair{b.model, b.dim}, b.value).second) {
      throw InvariantViolation("BoundTable: duplicate entry for " + std::string(to_string(b.model)) +
                               " dim " + std::to_string(b.dim));
    }
  }
  for (const Model model : {Model::Classical, Model::Quantum}) {
    std::optional<double> prev;
    for (const auto& [key, value] : by_key) {
      if (key.first != model) continue;
      if (prev && value < *prev) {
        throw InvariantViolation("BoundTable: " + std::string(to_string(model)) +
                                 " bounds decrease with dimension");
      }
      prev = value;
    }
  }
  for (const auto& [key, value] : by_key) {
    if (key.first != Model::Quantum) continue;
    const auto it = by_key.find({Model::Classical, key.second});
    if (it != by_key.end() && value < it->second) {
      throw InvariantViolation("BoundTable: quantum bound below classical bound at dim " +
                               std::to_string(key.second));
    }
  }
}

std::optional<double> BoundTable::find(Model model, int dim) const {
  for (const auto& b : entries_) {
    if (b.model == model && b.dim == dim) return b.value;
  }
  return std::nullopt;
}

double evaluate(const Witness& w, const ExpectationTable& e) {
  if (e.preparations() != w.preparations() || e.measurements() != w.measurements()) {
    throw DimensionError("evaluate: table is " + std::to_string(e.preparations()) + "x" +
                         std::to_string(e.measurements()) + ", witness '" + w.name() + "' is " +
                         std::to_string(w.preparations()) + "x" + std::to_string(w.measurements()));
  }
  double s = 0.0;
  for (int x = 0; x < w.preparations(); ++x) {
    for (int y = 0; y < w.measurements(); ++y) {
      if (w.coeff(x, y) != 0.0) s += w.coeff(x, y) * e(x, y);
    }
  }
  return w.take_abs() ? std::abs(s) : s;
}

double algebraic_max(const Witness& w) {
  double s = 0.0;
  for (const auto& row : w.coefficients()) {
    for (double c : row) s += std::abs(c);
  }
  return s;
}

CatalogEntry catalog(std::string_view name) {
  const double root2 = std::numbers::sqrt2;
  if (name == "i3") {
    Witness w("i3", {{1, 1}, {1, -1}, {-1, 0}}, true);
    BoundTable bounds({
        {Model::Classical, 2, 3.0, true},
        {Model::Quantum, 2, 1.0 + 2.0 * root2, true},
        {Model::Classical, 3, 5.0, true},
        {Model::Quantum, 3, 5.0, true},
    });
    return {std::move(w), std::move(bounds)};
  }
  if (name == "i4") {
    Witness w("i4", {{1, 1, 1}, {1, 1, -1}, {1, -1, 0}, {-1, 0, 0}}, false);
    BoundTable bounds({
        {Model::Classical, 2, 5.0, true},
        {Model::Quantum, 2, 6.0, true},
        {Model::Classical, 3, 7.0, true},
        {Model::Quantum, 3, 2.0 + std::sqrt(13.0 + 16.0 * root2), true},
        {Model::Classical, 4, 9.0, true},
        {Model::Quantum, 4, 9.0, true},
    });
    return {std::move(w), std::move(bounds)};
  }
  throw NotFound("unknown witness '" + std::string(name) + "' (catalog: i3, i4)");
}

std::vector<std::string> catalog_names() { return {"i3", "i4"}; }

nlohmann::json to_json(const Witness& w, const BoundTable& bounds) {
  nlohmann::json j;
  j["name"] = w.name();
  j["coefficients"] = w.coefficients();
  j["take_abs"] = w.take_abs();
  if (!bounds.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& b : bounds.entries()) {
      arr.push_back({{"model", to_string(b.model)}, {"dim", b.dim}, {"bound", b.value}, {"exact", b.exact}});
    }
    j["bounds"] = std::move(arr);
  }
  return j;
}

CatalogEntry witness_from_json(const nlohmann::json& j) {
  const auto field = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("witness: missing field '") + key + "'");
    return j.at(key);
  };
  try {
    const auto& name = field("name");
    const auto& coeffs = field("coefficients");
    const auto& take_abs = field("take_abs");
    if (!name.is_string()) throw ParseError("witness.name: expected string");
    if (!take_abs.is_boolean()) throw ParseError("witness.take_abs: expected boolean");
    if (!coeffs.is_array()) throw ParseError("witness.coefficients: expected array of arrays");
    Table table;
    for (std::size_t x = 0; x < coeffs.size(); ++x) {
      const auto& row = coeffs[x];
      if (!row.is_array()) throw ParseError("witness.coefficients[" + std::to_string(x) + "]: expected array");
      std::vector<double> r;
      for (std::size_t y = 0; y < row.size(); ++y) {
        if (!row[y].is_number()) {
          throw ParseError("witness.coefficients[" + std::to_string(x) + "][" + std::to_string(y) +
                           "]: expected number");
        }
        r.push_back(row[y].get<double>());
      }
      table.push_back(std::move(r));
    }
    Witness w(name.get<std::string>(), std::move(table), take_abs.get<bool>());

    std::vector<Bound> bounds;
    if (j.contains("bounds")) {
      const auto& arr = j.at("bounds");
      if (!arr.is_array()) throw ParseError("witness.bounds: expected array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& b = arr[i];
        const std::string where = "witness.bounds[" + std::to_string(i) + "]";
        if (!b.is_object() || !b.contains("model") || !b.contains("dim") || !b.contains("bound")) {
          throw ParseError(where + ": expected {model, dim, bound}");
        }
        if (!b.at("model").is_string() || !b.at("dim").is_number_integer() || !b.at("bound").is_number()) {
          throw ParseError(where + ": wrong field types");
        }
        bounds.push_back({model_from_string(b.at("model").get<std::string>()), b.at("dim").get<int>(),
                          b.at("bound").get<double>(), b.value("exact", false)});
      }
    }
    return {std::move(w), BoundTable(std::move(bounds))};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("witness: ") + e.what());
  }
}

}  // namespace dimwitness
