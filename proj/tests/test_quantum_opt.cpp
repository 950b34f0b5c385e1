#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dimwitness/classical.hpp"
#include "dimwitness/quantum_opt.hpp"
#include "dimwitness/settings.hpp"
#include "test_support.hpp"

using namespace dimwitness;

namespace {

const double kRoot2 = std::sqrt(2.0);
const double kI4Qutrit = 2.0 + std::sqrt(13.0 + 16.0 * kRoot2);

StateVector real2(double a, double b) { return StateVector::normalized({{a, 0.0}, {b, 0.0}}); }

// |<a|b>| = 1 up to a global phase.
bool same_ray(const StateVector& a, const StateVector& b, double tol) {
  return std::abs(std::abs(inner(a, b)) - 1.0) < tol;
}

QuantumStrategy optimum(const char* id) { return std::get<QuantumStrategy>(experiment(id).strategy); }

}  // namespace

TEST_CASE("quantum_value of the published optima") {
  CHECK(quantum_value(optimum("i3-qubit"), catalog("i3").witness) == doctest::Approx(1.0 + 2.0 * kRoot2).epsilon(1e-14));
  CHECK(quantum_value(optimum("i4-ququart"), catalog("i4").witness) == 9.0);
  CHECK(quantum_value(optimum("i4-bb84"), catalog("i4").witness) ==
        doctest::Approx(kRoot2 + 2.0 + std::sqrt(5.0)).epsilon(1e-14));
  CHECK_THROWS_AS(quantum_value(optimum("i3-qubit"), catalog("i4").witness), DimensionError);
}

TEST_CASE("quantum strategies validate their parts") {
  const auto z = HermitianMatrix::identity(2);
  CHECK_THROWS_AS(QuantumStrategy(2, {StateVector::basis(3, 0)}, {z}), DimensionError);
  CHECK_THROWS_AS(QuantumStrategy(5, {}, {}), DimensionError);
  const double half[] = {1.0, 0.5};
  CHECK_THROWS_AS(QuantumStrategy(2, {StateVector::basis(2, 0)}, {HermitianMatrix::diagonal(half)}), InvariantViolation);
  CHECK_NOTHROW(QuantumStrategy(2, {StateVector::basis(2, 0)}, {z}));
}

TEST_CASE("state update examples") {
  const auto i3 = catalog("i3").witness;
  const auto s3 = optimum("i3-qubit");
  const auto psi3 = seesaw_state_update(i3, s3.observables(), 2);
  CHECK(same_ray(psi3, s3.states()[2], 1e-12));

  const auto i4 = catalog("i4").witness;
  const auto s4 = optimum("i4-qubit");
  CHECK(same_ray(seesaw_state_update(i4, s4.observables(), 3), s4.states()[3], 1e-12));

  const Witness zero_row("z", {{1, 1}, {0, 0}}, false);
  const auto current = real2(0.3, 0.7);
  const auto kept = seesaw_state_update(zero_row, s3.observables(), 1, Sign::Plus, &current);
  CHECK(same_ray(kept, current, 1e-15));
  CHECK(same_ray(seesaw_state_update(zero_row, s3.observables(), 1), StateVector::basis(2, 0), 1e-15));
}

TEST_CASE("measurement update examples") {
  const auto i3 = catalog("i3").witness;
  const auto s3 = optimum("i3-qubit");
  CHECK(seesaw_measurement_update(i3, s3.states(), 0).max_abs_diff(s3.observables()[0]) < 1e-12);
  CHECK(seesaw_measurement_update(i3, s3.states(), 1).max_abs_diff(s3.observables()[1]) < 1e-12);

  // One state with c = +1: +1 on the state and, by the tie rule, on its complement.
  const Witness single("s", {{1}}, false);
  const StateVector psi = real2(1, 2);
  const auto m = seesaw_measurement_update(single, std::vector<StateVector>{psi}, 0);
  CHECK(expectation(psi, m) == doctest::Approx(1.0));
  CHECK(m.max_abs_diff(HermitianMatrix::identity(2)) < 1e-12);
  const auto m_minus = seesaw_measurement_update(single, std::vector<StateVector>{psi}, 0, Sign::Minus);
  CHECK(m_minus.max_abs_diff(HermitianMatrix::projector(psi) - HermitianMatrix::projector(real2(2, -1))) < 1e-12);

  const Witness pair("p", {{1}, {-1}}, false);
  const std::vector<StateVector> orth{real2(1, 1), real2(1, -1)};
  const auto mp = seesaw_measurement_update(pair, orth, 0);
  CHECK(expectation(orth[0], mp) == doctest::Approx(1.0));
  CHECK(expectation(orth[1], mp) == doctest::Approx(-1.0));
}

TEST_CASE("optimize reproduces the published quantum bounds") {
  const auto i3 = catalog("i3").witness;
  const auto i4 = catalog("i4").witness;
  CHECK(std::abs(optimize(i3, 2).best_value - (1.0 + 2.0 * kRoot2)) < 1e-6);
  CHECK(std::abs(optimize(i3, 3).best_value - 5.0) < 1e-6);
  CHECK(std::abs(optimize(i4, 2).best_value - 6.0) < 1e-6);
  CHECK(std::abs(optimize(i4, 3).best_value - kI4Qutrit) < 1e-6);
  CHECK(std::abs(optimize(i4, 4).best_value - 9.0) < 1e-6);
  CHECK_THROWS_AS(optimize(i4, 1), DimensionError);
  CHECK_THROWS_AS(optimize(i4, 5), DimensionError);
}

TEST_CASE("optimize result invariants") {
  const auto i4 = catalog("i4").witness;
  SeesawConfig cfg;
  cfg.restarts = 8;
  const auto r = optimize(i4, 3, cfg);
  REQUIRE(r.per_restart_values.size() == 8);
  REQUIRE(r.iterations_used.size() == 8);
  CHECK(r.best_value == *std::max_element(r.per_restart_values.begin(), r.per_restart_values.end()));
  CHECK(std::abs(quantum_value(r.best_strategy, i4) - r.best_value) < 1e-9);
  for (int it : r.iterations_used) CHECK((it >= 0 && it <= cfg.max_iters));

  const auto again = optimize(i4, 3, cfg);
  CHECK(again.per_restart_values == r.per_restart_values);
  cfg.seed = 43;
  CHECK(optimize(i4, 3, cfg).per_restart_values != r.per_restart_values);
}

TEST_CASE("config validation") {
  SeesawConfig cfg;
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), InvariantViolation);
  cfg = {};
  cfg.conv_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvariantViolation);
  cfg = {};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(optimize(catalog("i3").witness, 2, cfg), InvariantViolation);
}

TEST_CASE("ascent is monotone on random witnesses") {
  SplitMix64 rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    const auto w = dimwitness::testing::random_witness(rng, 4, 4);
    const int d = 2 + trial % 2;
    for (Sign branch : {Sign::Plus, Sign::Minus}) {
      SeesawConfig cfg;
      const auto trace = seesaw_ascend(w, random_start(w, d, 9, static_cast<std::uint64_t>(trial)), branch, cfg);
      for (std::size_t i = 1; i < trace.objective.size(); ++i) {
        CHECK(trace.objective[i] >= trace.objective[i - 1] - 1e-12);
      }
      CHECK(trace.objective.size() == static_cast<std::size_t>(trace.iterations) + 1);
    }
  }
}

TEST_CASE("a raw sweep loses at most the zero-tie window") {
  // Each measurement update is optimal except on eigenvalues within kSignTol
  // of zero, and each state update is optimal, so one sweep can lose at most
  // kSignTol per eigenvalue per measurement.
  SplitMix64 rng(8080);
  for (int trial = 0; trial < 60; ++trial) {
    const auto w = dimwitness::testing::random_witness(rng, 4, 4);
    for (int d = 2; d <= 3; ++d) {
      auto s = random_start(w, d, 42, static_cast<std::uint64_t>(trial));
      double value = signed_objective(s, w, Sign::Plus);
      const double allowance = kSignTol * d * w.measurements() + 1e-12;
      for (int i = 0; i < 60; ++i) {
        s = seesaw_sweep(w, s);
        const double next = signed_objective(s, w, Sign::Plus);
        CHECK(next >= value - allowance);
        value = next;
      }
    }
  }
}

TEST_CASE("sandwich between classical bound and algebraic maximum") {
  SplitMix64 rng(555);
  SeesawConfig cfg;
  cfg.restarts = 16;
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = dimwitness::testing::random_witness(rng, 3, 3);
    for (int d = 2; d <= 3; ++d) {
      const double q = optimize(w, d, cfg).best_value;
      CHECK(q <= algebraic_max(w) + 1e-9);
      CHECK(q >= classical_bound(w, d).value - 1e-9);
    }
  }
}

TEST_CASE("zero tie does not change the optimum") {
  for (const auto& name : catalog_names()) {
    const auto w = catalog(name).witness;
    for (int d = 2; d <= 3; ++d) {
      SeesawConfig plus;
      SeesawConfig minus;
      minus.zero_tie = Sign::Minus;
      CHECK(std::abs(optimize(w, d, plus).best_value - optimize(w, d, minus).best_value) < 1e-9);
    }
  }
}

TEST_CASE("published optima are stationary") {
  for (const auto& id : experiment_ids()) {
    const auto spec = experiment(id);
    if (spec.model != Model::Quantum || id == "i4-bb84") continue;
    const auto w = catalog(spec.witness_name).witness;
    const auto s = std::get<QuantumStrategy>(spec.strategy);
    const double before = quantum_value(s, w);
    const double after = quantum_value(seesaw_sweep(w, s), w);
    CAPTURE(id);
    CHECK(std::abs(after - before) < 1e-10);
  }
}

TEST_CASE("bb84 measurements are optimal for the fixed bb84 states") {
  const auto w = catalog("i4").witness;
  const auto s = optimum("i4-bb84");
  std::vector<HermitianMatrix> best;
  for (int y = 0; y < w.measurements(); ++y) best.push_back(seesaw_measurement_update(w, s.states(), y));
  const QuantumStrategy updated(2, s.states(), best);
  CHECK(std::abs(quantum_value(updated, w) - quantum_value(s, w)) < 1e-12);
  // The states are not optimal: a full sweep climbs towards the qubit bound.
  CHECK(quantum_value(seesaw_sweep(w, s), w) > quantum_value(s, w) + 0.1);
}

TEST_CASE("optimize_from a published optimum stays there") {
  const auto w = catalog("i4").witness;
  const auto r = optimize_from(w, optimum("i4-qutrit"));
  CHECK(std::abs(r.best_value - kI4Qutrit) < 1e-10);
  CHECK(r.per_restart_values.size() == 1);
}

TEST_CASE("strategy json round trip") {
  const auto s = optimum("i4-qutrit");
  const auto back = strategy_from_json(nlohmann::json::parse(to_json(s).dump()));
  CHECK(back.d() == 3);
  REQUIRE(back.states().size() == s.states().size());
  for (std::size_t x = 0; x < s.states().size(); ++x) CHECK(std::abs(inner(back.states()[x], s.states()[x]) - 1.0) < 1e-15);
  for (std::size_t y = 0; y < s.observables().size(); ++y) CHECK(back.observables()[y].max_abs_diff(s.observables()[y]) == 0.0);

  SplitMix64 rng(1);
  const auto complex_start = random_start(catalog("i3").witness, 3, 1, 0);
  const auto cback = strategy_from_json(to_json(complex_start));
  CHECK(cback.observables()[0].max_abs_diff(complex_start.observables()[0]) == 0.0);

  CHECK_THROWS_AS(strategy_from_json(nlohmann::json::parse(R"({"d":2})")), ParseError);
  CHECK_THROWS_AS(strategy_from_json(nlohmann::json::parse(R"({"d":2,"states":[[[1,0],[0]]],"observables":[]})")),
                  ParseError);
  CHECK_THROWS_AS(strategy_from_json(nlohmann::json::parse(
                      R"({"d":2,"states":[[[1,0],[0,0]]],"observables":[[[[1,0],[0,0]],[[0,0]]]]})")),
                  ParseError);
  CHECK_THROWS_AS(strategy_from_json(nlohmann::json::parse(
                      R"({"d":2,"states":[[[1,0],[0,0]]],"observables":[[[[1,0],[0,0]],[[0,0],[0.5,0]]]]})")),
                  InvariantViolation);
}
