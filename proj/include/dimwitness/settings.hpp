#pragma once

// The seven prepare-and-measure configurations and the half-wave-plate
// parametrization of the four-mode photonic preparation.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dimwitness/classical.hpp"
#include "dimwitness/quantum_opt.hpp"

namespace dimwitness {

// Plate rotation angles in radians. Amplitudes depend on 2θ.
struct HwpAngles {
  double theta1;
  double theta2;
  double theta3;
};

// sin2θ1 cos2θ2 |0> + sin2θ1 sin2θ2 |1> + cos2θ1 cos2θ3 |2> + cos2θ1 sin2θ3 |3>
// in the mode basis |0>=|H,a>, |1>=|V,a>, |2>=|H,b>, |3>=|V,b>.
StateVector hwp_state(const HwpAngles& a);

// Pads a qubit or qutrit into the four optical modes.
StateVector embed_optical(const StateVector& s);

// Canonical inverse of hwp_state for states with real amplitudes up to a
// global phase (dimension 2 and 3 states are padded first). θ2 or θ3 is 0
// when its arm carries no amplitude. Throws NotRepresentable for states with
// non-real relative phases.
HwpAngles angles_for(const StateVector& state);

using ExperimentStrategy = std::variant<QuantumStrategy, ClassicalStrategy>;

struct ExperimentSpec {
  std::string id;
  std::string label;  // row label for reports
  std::string witness_name;
  int d;
  Model model;
  ExperimentStrategy strategy;
  double expected_value;
};

// i3-qubit, i3-qutrit, i4-qubit, i4-trit, i4-qutrit, i4-ququart, i4-bb84.
// Throws NotFound for anything else.
ExperimentSpec experiment(std::string_view id);
std::vector<std::string> experiment_ids();

// Basis states |label(x)> and diagonal observables diag(f_y).
QuantumStrategy embed_classical(const ClassicalStrategy& s);

QuantumStrategy as_quantum(const ExperimentSpec& spec);
ExpectationTable expectations(const ExperimentSpec& spec);
// Witness value of the stored strategy.
double spec_value(const ExperimentSpec& spec);

}  // namespace dimwitness
