#include "dimwitness/quantum_opt.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace dimwitness {

namespace {

void check_shape(const QuantumStrategy& s, const Witness& w) {
  if (static_cast<int>(s.states().size()) != w.preparations() ||
      static_cast<int>(s.observables().size()) != w.measurements()) {
    throw DimensionError("strategy has " + std::to_string(s.states().size()) + " states and " +
                         std::to_string(s.observables().size()) + " observables, witness '" + w.name() +
                         "' needs " + std::to_string(w.preparations()) + " and " +
                         std::to_string(w.measurements()));
  }
}

double raw_sum(const QuantumStrategy& s, const Witness& w) {
  check_shape(s, w);
  double total = 0.0;
  for (int x = 0; x < w.preparations(); ++x) {
    for (int y = 0; y < w.measurements(); ++y) {
      const double c = w.coeff(x, y);
      if (c != 0.0) {
        total += c * expectation(s.states()[static_cast<std::size_t>(x)], s.observables()[static_cast<std::size_t>(y)]);
      }
    }
  }
  return total;
}

}  // namespace

QuantumStrategy::QuantumStrategy(int d, std::vector<StateVector> states, std::vector<HermitianMatrix> observables)
    : d_(d), states_(std::move(states)), observables_(std::move(observables)) {
  if (d_ < kMinDim || d_ > kMaxDim) throw DimensionError("QuantumStrategy: d=" + std::to_string(d_) + " outside [2, 4]");
  for (const auto& s : states_) {
    if (s.dim() != d_) throw DimensionError("QuantumStrategy: state dimension differs from d");
  }
  for (std::size_t y = 0; y < observables_.size(); ++y) {
    if (observables_[y].dim() != d_) throw DimensionError("QuantumStrategy: observable dimension differs from d");
    if (!is_dichotomic(observables_[y])) {
      throw InvariantViolation("QuantumStrategy: observable " + std::to_string(y) + " does not square to identity");
    }
  }
}

void SeesawConfig::validate() const {
  if (restarts < 1) throw InvariantViolation("SeesawConfig: restarts must be >= 1");
  if (max_iters < 1) throw InvariantViolation("SeesawConfig: max_iters must be >= 1");
  if (!(conv_tol > 0.0)) throw InvariantViolation("SeesawConfig: conv_tol must be > 0");
}

ExpectationTable quantum_expectations(const QuantumStrategy& s) {
  Table e;
  for (const auto& psi : s.states()) {
    std::vector<double> row;
    for (const auto& m : s.observables()) row.push_back(expectation(psi, m));
    e.push_back(std::move(row));
  }
  return ExpectationTable(std::move(e));
}

double quantum_value(const QuantumStrategy& s, const Witness& w) {
  const double v = raw_sum(s, w);
  return w.take_abs() ? std::abs(v) : v;
}

double signed_objective(const QuantumStrategy& s, const Witness& w, Sign branch) {
  return to_double(branch) * raw_sum(s, w);
}

StateVector seesaw_state_update(const Witness& w, std::span<const HermitianMatrix> observables, int x, Sign branch,
                                const StateVector* current) {
  if (observables.empty()) throw DimensionError("seesaw_state_update: no observables");
  if (static_cast<int>(observables.size()) != w.measurements()) {
    throw DimensionError("seesaw_state_update: observable count does not match witness");
  }
  const int d = observables.front().dim();
  auto h = HermitianMatrix::zero(d);
  bool any = false;
  for (int y = 0; y < w.measurements(); ++y) {
    const double c = w.coeff(x, y);
    if (c == 0.0) continue;
    h += (to_double(branch) * c) * observables[static_cast<std::size_t>(y)];
    any = true;
  }
  if (!any) return current ? *current : StateVector::basis(d, 0);
  return eigh(h).eigenvectors.front();
}

HermitianMatrix seesaw_measurement_update(const Witness& w, std::span<const StateVector> states, int y, Sign zero_tie,
                                          Sign branch) {
  if (static_cast<int>(states.size()) != w.preparations()) {
    throw DimensionError("seesaw_measurement_update: state count does not match witness");
  }
  auto h = HermitianMatrix::zero(states.front().dim());
  for (int x = 0; x < w.preparations(); ++x) {
    const double c = w.coeff(x, y);
    if (c == 0.0) continue;
    h += (to_double(branch) * c) * HermitianMatrix::projector(states[static_cast<std::size_t>(x)]);
  }
  return sign_observable(h, zero_tie);
}

QuantumStrategy seesaw_sweep(const Witness& w, const QuantumStrategy& s, Sign branch, Sign zero_tie) {
  check_shape(s, w);
  std::vector<StateVector> states;
  states.reserve(s.states().size());
  for (int x = 0; x < w.preparations(); ++x) {
    states.push_back(seesaw_state_update(w, s.observables(), x, branch, &s.states()[static_cast<std::size_t>(x)]));
  }
  std::vector<HermitianMatrix> observables;
  observables.reserve(s.observables().size());
  for (int y = 0; y < w.measurements(); ++y) {
    observables.push_back(seesaw_measurement_update(w, states, y, zero_tie, branch));
  }
  return QuantumStrategy(s.d(), std::move(states), std::move(observables));
}

SeesawTrace seesaw_ascend(const Witness& w, QuantumStrategy start, Sign branch, const SeesawConfig& cfg) {
  cfg.validate();
  SeesawTrace trace{std::move(start), {}, 0};
  trace.objective.push_back(signed_objective(trace.strategy, w, branch));
  while (trace.iterations < cfg.max_iters) {
    auto next = seesaw_sweep(w, trace.strategy, branch, cfg.zero_tie);
    const double value = signed_objective(next, w, branch);
    const double gain = value - trace.objective.back();
    // Eigenvalues inside the zero-tie window can cost up to kSignTol each, so
    // near a degenerate fixed point a sweep may lose ~1e-10. Such sweeps are
    // dropped and the ascent ends.
    if (gain < 0.0) break;
    trace.strategy = std::move(next);
    ++trace.iterations;
    trace.objective.push_back(value);
    if (gain < cfg.conv_tol) break;
  }
  return trace;
}

QuantumStrategy random_start(const Witness& w, int d, std::uint64_t seed, std::uint64_t restart) {
  auto rng = SplitMix64::stream(seed, restart);
  std::vector<StateVector> states;
  for (int x = 0; x < w.preparations(); ++x) states.push_back(random_state(d, rng));
  std::vector<HermitianMatrix> observables;
  for (int y = 0; y < w.measurements(); ++y) observables.push_back(random_dichotomic(d, rng));
  return QuantumStrategy(d, std::move(states), std::move(observables));
}

namespace {

struct Ascent {
  double value;
  QuantumStrategy strategy;
  int iterations;
};

Ascent ascend_all_branches(const Witness& w, const QuantumStrategy& start, const SeesawConfig& cfg) {
  auto plus = seesaw_ascend(w, start, Sign::Plus, cfg);
  Ascent best{quantum_value(plus.strategy, w), std::move(plus.strategy), plus.iterations};
  if (w.take_abs()) {
    auto minus = seesaw_ascend(w, start, Sign::Minus, cfg);
    const double v = quantum_value(minus.strategy, w);
    if (v > best.value) best = {v, std::move(minus.strategy), minus.iterations};
  }
  return best;
}

}  // namespace

SeesawResult optimize(const Witness& w, int d, const SeesawConfig& cfg) {
  if (d < kMinDim || d > kMaxDim) throw DimensionError("optimize: d=" + std::to_string(d) + " outside [2, 4]");
  cfg.validate();
  std::vector<double> values;
  std::vector<int> iterations;
  std::optional<Ascent> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    auto ascent = ascend_all_branches(w, random_start(w, d, cfg.seed, static_cast<std::uint64_t>(r)), cfg);
    values.push_back(ascent.value);
    iterations.push_back(ascent.iterations);
    if (!best || ascent.value > best->value) best = std::move(ascent);
  }
  return {best->value, std::move(best->strategy), std::move(values), std::move(iterations)};
}

SeesawResult optimize_from(const Witness& w, const QuantumStrategy& start, const SeesawConfig& cfg) {
  cfg.validate();
  auto ascent = ascend_all_branches(w, start, cfg);
  return {ascent.value, std::move(ascent.strategy), {ascent.value}, {ascent.iterations}};
}

nlohmann::json to_json(const QuantumStrategy& s) {
  const auto pair = [](const Complex& z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json states = nlohmann::json::array();
  for (const auto& psi : s.states()) {
    auto amps = nlohmann::json::array();
    for (const auto& z : psi.amplitudes()) amps.push_back(pair(z));
    states.push_back(std::move(amps));
  }
  nlohmann::json observables = nlohmann::json::array();
  for (const auto& m : s.observables()) {
    auto rows = nlohmann::json::array();
    for (int i = 0; i < m.dim(); ++i) {
      auto row = nlohmann::json::array();
      for (int j = 0; j < m.dim(); ++j) row.push_back(pair(m(i, j)));
      rows.push_back(std::move(row));
    }
    observables.push_back(std::move(rows));
  }
  return {{"d", s.d()}, {"states", std::move(states)}, {"observables", std::move(observables)}};
}

namespace {

Complex parse_complex(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

QuantumStrategy strategy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("states") || !j.contains("observables")) {
    throw ParseError("strategy: expected object with d, states, observables");
  }
  if (!j.at("d").is_number_integer()) throw ParseError("strategy.d: expected integer");
  const int d = j.at("d").get<int>();
  const auto& js = j.at("states");
  const auto& jo = j.at("observables");
  if (!js.is_array() || !jo.is_array()) throw ParseError("strategy: states and observables must be arrays");

  std::vector<StateVector> states;
  for (std::size_t x = 0; x < js.size(); ++x) {
    const std::string where = "strategy.states[" + std::to_string(x) + "]";
    if (!js[x].is_array()) throw ParseError(where + ": expected array");
    std::vector<Complex> amps;
    for (std::size_t i = 0; i < js[x].size(); ++i) {
      amps.push_back(parse_complex(js[x][i], where + "[" + std::to_string(i) + "]"));
    }
    states.emplace_back(std::move(amps));
  }
  std::vector<HermitianMatrix> observables;
  for (std::size_t y = 0; y < jo.size(); ++y) {
    const std::string where = "strategy.observables[" + std::to_string(y) + "]";
    if (!jo[y].is_array()) throw ParseError(where + ": expected array of rows");
    const auto n = static_cast<int>(jo[y].size());
    std::vector<Complex> entries;
    for (int i = 0; i < n; ++i) {
      const auto& row = jo[y][static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) throw ParseError(where + ": matrix is not square");
      for (int k = 0; k < n; ++k) {
        entries.push_back(parse_complex(row[static_cast<std::size_t>(k)],
                                        where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
      }
    }
    observables.emplace_back(n, std::move(entries));
  }
  return QuantumStrategy(d, std::move(states), std::move(observables));
}

}  // namespace dimwitness
