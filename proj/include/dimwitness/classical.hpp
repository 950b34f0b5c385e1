#pragma once

#include <cstdint>
#include <vector>

#include "dimwitness/witness.hpp"

namespace dimwitness {

inline constexpr double kDefaultEnumerationGuard = 1e9;

// Deterministic strategy with a d-valued message: preparation x sends
// labels[x], measurement y answers responses[y][label] ∈ {-1, +1}.
class ClassicalStrategy {
 public:
  // Throws InvariantViolation when labels or responses are out of range.
  ClassicalStrategy(int d, std::vector<int> labels, std::vector<std::vector<int>> responses);

  int d() const { return d_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::vector<int>>& responses() const { return responses_; }

  friend bool operator==(const ClassicalStrategy&, const ClassicalStrategy&) = default;

 private:
  int d_;
  std::vector<int> labels_;
  std::vector<std::vector<int>> responses_;
};

// E_xy = f_y(label(x)). Throws DimensionError when the strategy shape does not
// match N preparations and m measurements.
ExpectationTable classical_expectations(const ClassicalStrategy& s, int n_preparations, int n_measurements);

struct ClassicalBoundResult {
  double value;
  ClassicalStrategy strategy;
  std::uint64_t strategies_checked;
};

// Number of deterministic strategies, d^N · 2^(d·m), as a double so that
// oversized cases can be reported without overflow.
double strategy_count(const Witness& w, int d);

// Exact maximum of the witness over all deterministic d-valued strategies.
//
// Labels run in odometer order (last preparation fastest); for each labeling
// the responses are a bitmask with bit y·d + l set meaning f_y(l) = -1. The
// first strategy attaining the maximum is returned. When the witness takes an
// absolute value, masks with f_1(0) = -1 are skipped, since they are global
// sign flips of masks already visited.
//
// Throws TooLarge when strategy_count exceeds guard.
ClassicalBoundResult classical_bound(const Witness& w, int d, double guard = kDefaultEnumerationGuard);

}  // namespace dimwitness
