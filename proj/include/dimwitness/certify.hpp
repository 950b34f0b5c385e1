#pragma once

// From a measured witness value with error bar to the minimum classical and
// quantum dimensions it certifies.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dimwitness/simulate.hpp"
#include "dimwitness/witness.hpp"

namespace dimwitness {

inline constexpr double kDefaultConfidenceSigmas = 3.0;

struct Violation {
  Model model;
  int dim;
  double bound;
  double significance;  // (value - bound)/sigma; +inf when sigma = 0
};

struct DimensionCertificate {
  std::string witness_name;
  double value;
  double sigma;
  std::vector<Violation> violations;
  int min_classical_dim;
  int min_quantum_dim;
  double confidence_sigmas;
  std::vector<std::string> warnings;
  BoundTable bounds;

  bool nontrivial() const { return !violations.empty(); }
};

// A bound is violated iff value - k·sigma > bound. The minimum dimension per
// model is one more than the largest violated dimension; any violation at all
// also rules out a one-dimensional system, so both minima are at least 2 then.
// Throws InvariantViolation for sigma < 0 or k <= 0.
DimensionCertificate certify(const Witness& w, const BoundTable& bounds, const WitnessEstimate& est,
                             double k = kDefaultConfidenceSigmas);
// Catalog witness by name; throws NotFound for unknown names.
DimensionCertificate certify(std::string_view witness_name, const WitnessEstimate& est,
                             double k = kDefaultConfidenceSigmas);

nlohmann::json to_json(const DimensionCertificate& cert);

struct CountsFile {
  std::string witness;
  std::vector<CountRecord> records;
};

// Counts JSON. Throws ParseError (with line/column or field path) on
// malformed input or duplicate (x, y) records unless merge is set, in which
// case duplicates are summed. Negative counts throw InvariantViolation.
CountsFile parse_counts(std::string_view text, bool merge = false);
CountsFile load_counts(const std::filesystem::path& path, bool merge = false);

}  // namespace dimwitness
