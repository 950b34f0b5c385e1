#pragma once

// Lower bounds on the quantum value of a witness over d-dimensional pure
// states and ±1-valued observables, by multi-restart see-saw ascent.

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "dimwitness/qmath.hpp"
#include "dimwitness/witness.hpp"

namespace dimwitness {

class QuantumStrategy {
 public:
  // Throws DimensionError when a state or observable has a dimension other
  // than d, and InvariantViolation when an observable fails M² = 1.
  QuantumStrategy(int d, std::vector<StateVector> states, std::vector<HermitianMatrix> observables);

  int d() const { return d_; }
  const std::vector<StateVector>& states() const { return states_; }
  const std::vector<HermitianMatrix>& observables() const { return observables_; }

 private:
  int d_;
  std::vector<StateVector> states_;
  std::vector<HermitianMatrix> observables_;
};

struct SeesawConfig {
  int restarts = 64;
  int max_iters = 500;
  double conv_tol = 1e-10;
  std::uint64_t seed = 42;
  Sign zero_tie = Sign::Plus;

  // Throws InvariantViolation for restarts < 1, max_iters < 1 or conv_tol <= 0.
  void validate() const;
};

struct SeesawResult {
  double best_value;
  QuantumStrategy best_strategy;
  std::vector<double> per_restart_values;
  std::vector<int> iterations_used;
};

// One ascent from a fixed start on a fixed sign branch.
struct SeesawTrace {
  QuantumStrategy strategy;
  std::vector<double> objective;  // objective[0] is the starting value
  int iterations;
};

// E_xy = <ψ_x|M_y|ψ_x>
ExpectationTable quantum_expectations(const QuantumStrategy& s);

// Throws DimensionError when the strategy shape does not match the witness.
double quantum_value(const QuantumStrategy& s, const Witness& w);

// branch · Σ c_xy <ψ_x|M_y|ψ_x>, the quantity one see-saw branch maximizes.
double signed_objective(const QuantumStrategy& s, const Witness& w, Sign branch);

// Top eigenvector of branch · Σ_y c_xy M_y. A row of zero coefficients leaves
// the objective independent of ψ_x; current is then returned (or |0> if null).
StateVector seesaw_state_update(const Witness& w, std::span<const HermitianMatrix> observables, int x,
                                Sign branch = Sign::Plus, const StateVector* current = nullptr);

// sign_observable(branch · Σ_x c_xy |ψ_x><ψ_x|, zero_tie)
HermitianMatrix seesaw_measurement_update(const Witness& w, std::span<const StateVector> states, int y,
                                          Sign zero_tie = Sign::Plus, Sign branch = Sign::Plus);

// Every state update followed by every measurement update.
QuantumStrategy seesaw_sweep(const Witness& w, const QuantumStrategy& s, Sign branch = Sign::Plus,
                             Sign zero_tie = Sign::Plus);

// Sweeps until the improvement drops below cfg.conv_tol or cfg.max_iters
// sweeps have run. A sweep that lowers the objective is discarded and ends
// the ascent, so objective is non-decreasing.
SeesawTrace seesaw_ascend(const Witness& w, QuantumStrategy start, Sign branch, const SeesawConfig& cfg);

// Random start for restart r: Haar-random states, then random dichotomic
// observables, drawn from SplitMix64::stream(seed, r).
QuantumStrategy random_start(const Witness& w, int d, std::uint64_t seed, std::uint64_t restart);

// cfg.restarts independent ascents; witnesses with an absolute value are
// ascended once per sign branch. Ties in the best value go to the lowest
// restart index. Throws DimensionError for d outside [2, 4].
SeesawResult optimize(const Witness& w, int d, const SeesawConfig& cfg = {});

// A single ascent (both branches for take_abs witnesses) from a given start.
SeesawResult optimize_from(const Witness& w, const QuantumStrategy& start, const SeesawConfig& cfg = {});

// {"d", "states": [[[re,im],...],...], "observables": [[[[re,im],...],...],...]}
nlohmann::json to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const nlohmann::json& j);

}  // namespace dimwitness
