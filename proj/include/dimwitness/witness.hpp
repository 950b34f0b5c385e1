#pragma once

// Linear dimension witnesses over the correlators E_xy = P(+1|x,y) - P(-1|x,y),
// and the catalog of I3/I4 with their published bound chains.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dimwitness/errors.hpp"

namespace dimwitness {

// Tolerance on E_xy leaving [-1, 1].
inline constexpr double kExpectationTol = 1e-9;

using Table = std::vector<std::vector<double>>;

class Witness {
 public:
  // coeffs[x][y] for preparation x and measurement y (0-based). Throws
  // DimensionError on ragged or empty tables and InvariantViolation when every
  // coefficient is zero.
  Witness(std::string name, Table coeffs, bool take_abs);

  const std::string& name() const { return name_; }
  int preparations() const { return static_cast<int>(coeffs_.size()); }
  int measurements() const { return static_cast<int>(coeffs_.front().size()); }
  double coeff(int x, int y) const {
    return coeffs_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  }
  const Table& coefficients() const { return coeffs_; }
  bool take_abs() const { return take_abs_; }

 private:
  std::string name_;
  Table coeffs_;
  bool take_abs_;
};

class ExpectationTable {
 public:
  // Throws DimensionError on a ragged table and InvariantViolation for entries
  // outside [-1, 1] by more than kExpectationTol.
  explicit ExpectationTable(Table values);

  int preparations() const { return static_cast<int>(values_.size()); }
  int measurements() const { return values_.empty() ? 0 : static_cast<int>(values_.front().size()); }
  double operator()(int x, int y) const {
    return values_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  }
  const Table& values() const { return values_; }

 private:
  Table values_;
};

enum class Model { Classical, Quantum };

std::string_view to_string(Model model);
Model model_from_string(std::string_view text);

struct Bound {
  Model model;
  int dim;
  double value;
  bool exact;
};

// Bound chain for one witness. Within a model bounds must not decrease with
// dimension, and a quantum bound is never below the classical one at the same
// dimension.
class BoundTable {
 public:
  BoundTable() = default;
  // Throws InvariantViolation when the ordering invariants fail.
  explicit BoundTable(std::vector<Bound> entries);

  const std::vector<Bound>& entries() const { return entries_; }
  std::optional<double> find(Model model, int dim) const;
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Bound> entries_;
};

// Σ c_xy E_xy, with the absolute value taken iff w.take_abs().
double evaluate(const Witness& w, const ExpectationTable& e);

// Σ |c_xy|
double algebraic_max(const Witness& w);

struct CatalogEntry {
  Witness witness;
  BoundTable bounds;
};

// "i3" or "i4". Throws NotFound otherwise.
CatalogEntry catalog(std::string_view name);
std::vector<std::string> catalog_names();

// Witness JSON: {"name", "coefficients", "take_abs"} plus an optional "bounds"
// array of {"model", "dim", "bound", "exact"}.
nlohmann::json to_json(const Witness& w, const BoundTable& bounds = {});
CatalogEntry witness_from_json(const nlohmann::json& j);

}  // namespace dimwitness
