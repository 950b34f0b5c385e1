#include <doctest.h>

#include <cmath>
#include <functional>

#include "dimwitness/classical.hpp"
#include "test_support.hpp"

using namespace dimwitness;

namespace {

// Independent oracle: recursive enumeration over response tables first, then
// labels, with the witness evaluated by hand.
double brute_force_bound(const Witness& w, int d) {
  const int n = w.preparations();
  const int m = w.measurements();
  std::vector<std::vector<int>> f(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(d), 1));
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  double best = -1e300;

  std::function<void(int)> over_labels = [&](int x) {
    if (x == n) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int y = 0; y < m; ++y) s += w.coeff(i, y) * f[static_cast<std::size_t>(y)][static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
      }
      best = std::max(best, w.take_abs() ? std::abs(s) : s);
      return;
    }
    for (int l = 0; l < d; ++l) {
      labels[static_cast<std::size_t>(x)] = l;
      over_labels(x + 1);
    }
  };
  std::function<void(int)> over_responses = [&](int k) {
    if (k == m * d) {
      over_labels(0);
      return;
    }
    for (int v : {1, -1}) {
      f[static_cast<std::size_t>(k / d)][static_cast<std::size_t>(k % d)] = v;
      over_responses(k + 1);
    }
  };
  over_responses(0);
  return best;
}

// d = 1: every preparation sends the same label, so E_xy = f_y and the best
// choice of f_y is the sign of the column sum.
double one_label_formula(const Witness& w) {
  double total = 0.0;
  for (int y = 0; y < w.measurements(); ++y) {
    double col = 0.0;
    for (int x = 0; x < w.preparations(); ++x) col += w.coeff(x, y);
    total += std::abs(col);
  }
  return total;
}

}  // namespace

TEST_CASE("classical_expectations examples") {
  const ClassicalStrategy one(1, {0, 0, 0}, {{1}, {1}});
  CHECK(classical_expectations(one, 3, 2).values() == Table{{1, 1}, {1, 1}, {1, 1}});

  const auto i3 = catalog("i3").witness;
  const ClassicalStrategy bit(2, {0, 0, 1}, {{1, -1}, {1, 1}});
  const auto e = classical_expectations(bit, 3, 2);
  CHECK(e.values() == Table{{1, 1}, {1, 1}, {-1, 1}});
  CHECK(evaluate(i3, e) == 3.0);

  const ClassicalStrategy trit(3, {0, 2, 1}, {{1, -1, 1}, {1, 1, -1}});
  CHECK(evaluate(i3, classical_expectations(trit, 3, 2)) == 5.0);

  CHECK_THROWS_AS(classical_expectations(bit, 4, 2), DimensionError);
  CHECK_THROWS_AS(classical_expectations(bit, 3, 3), DimensionError);
}

TEST_CASE("classical strategies validate ranges") {
  CHECK_THROWS_AS(ClassicalStrategy(2, {0, 2}, {{1, 1}}), InvariantViolation);
  CHECK_THROWS_AS(ClassicalStrategy(2, {0, 1}, {{1, 0}}), InvariantViolation);
  CHECK_THROWS_AS(ClassicalStrategy(2, {0, 1}, {{1, 1, 1}}), InvariantViolation);
  CHECK_THROWS_AS(ClassicalStrategy(0, {}, {}), InvariantViolation);
}

TEST_CASE("classical bounds of the catalog witnesses") {
  const auto i3 = catalog("i3").witness;
  const auto i4 = catalog("i4").witness;
  CHECK(classical_bound(i3, 2).value == 3.0);
  CHECK(classical_bound(i3, 3).value == 5.0);
  CHECK(classical_bound(i4, 2).value == 5.0);
  CHECK(classical_bound(i4, 3).value == 7.0);
  CHECK(classical_bound(i4, 4).value == 9.0);
  CHECK(classical_bound(i3, 1).value == 1.0);
  CHECK(classical_bound(i4, 1).value == one_label_formula(i4));
}

TEST_CASE("returned strategy re-evaluates to the bound and is deterministic") {
  for (const auto& name : catalog_names()) {
    const auto w = catalog(name).witness;
    for (int d = 1; d <= w.preparations(); ++d) {
      const auto r = classical_bound(w, d);
      CHECK(evaluate(w, classical_expectations(r.strategy, w.preparations(), w.measurements())) == r.value);
      CHECK(r.strategy.d() == d);
      CHECK(classical_bound(w, d).strategy == r.strategy);
    }
  }
}

TEST_CASE("strategy counts and the enumeration guard") {
  const auto i4 = catalog("i4").witness;
  CHECK(strategy_count(i4, 3) == 81.0 * 512.0);
  CHECK(strategy_count(i4, 4) == 256.0 * 4096.0);
  CHECK_THROWS_AS(classical_bound(i4, 7), TooLarge);
  CHECK_THROWS_AS(classical_bound(i4, 3, 1000.0), TooLarge);
  try {
    classical_bound(i4, 3, 1000.0);
  } catch (const TooLarge& e) {
    CHECK(std::string(e.what()).find("41472") != std::string::npos);
  }
  CHECK_THROWS_AS(classical_bound(i4, 0), std::exception);
}

TEST_CASE("symmetry reduction only halves take_abs searches") {
  const auto i3 = catalog("i3").witness;
  const auto i4 = catalog("i4").witness;
  CHECK(static_cast<double>(classical_bound(i3, 2).strategies_checked) == strategy_count(i3, 2) / 2);
  CHECK(static_cast<double>(classical_bound(i4, 2).strategies_checked) == strategy_count(i4, 2));
}

TEST_CASE("classical bound matches an independent enumerator on random witnesses") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    const auto w = dimwitness::testing::random_witness(rng, 3, 3);
    for (int d = 1; d <= 3; ++d) {
      if (strategy_count(w, d) > 3e5) continue;
      CAPTURE(trial);
      CAPTURE(d);
      CHECK(classical_bound(w, d).value == brute_force_bound(w, d));
    }
  }
}

TEST_CASE("classical bound properties on random witnesses") {
  SplitMix64 rng(405);
  for (int trial = 0; trial < 60; ++trial) {
    const auto w = dimwitness::testing::random_witness(rng, 4, 3);
    const int n = w.preparations();
    double previous = -1.0;
    for (int d = 1; d <= n; ++d) {
      const double v = classical_bound(w, d).value;
      CHECK(v >= previous);
      previous = v;
    }
    CHECK(previous == algebraic_max(w));
    CHECK(classical_bound(w, 1).value == one_label_formula(w));
  }
}

TEST_CASE("mixtures of deterministic strategies never beat the bound") {
  const auto i4 = catalog("i4").witness;
  const double bound = classical_bound(i4, 2).value;
  SplitMix64 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    Table mix(4, std::vector<double>(3, 0.0));
    double total = 0.0;
    for (int k = 0; k < 5; ++k) {
      std::vector<int> labels;
      for (int x = 0; x < 4; ++x) labels.push_back(static_cast<int>(rng.next() % 2));
      std::vector<std::vector<int>> f(3, std::vector<int>(2));
      for (auto& row : f) {
        for (auto& v : row) v = rng.uniform() < 0.5 ? 1 : -1;
      }
      const double weight = rng.uniform();
      total += weight;
      const auto e = classical_expectations(ClassicalStrategy(2, labels, f), 4, 3);
      for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 3; ++y) mix[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] += weight * e(x, y);
      }
    }
    for (auto& row : mix) {
      for (auto& v : row) v /= total;
    }
    CHECK(evaluate(i4, ExpectationTable(mix)) <= bound + 1e-12);
  }
}
