#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dimwitness/qmath.hpp"
#include "test_support.hpp"

using namespace dimwitness;
using dimwitness::testing::random_hermitian;

namespace {

StateVector real2(double a, double b) { return StateVector::normalized({{a, 0.0}, {b, 0.0}}); }

HermitianMatrix diag2(double a, double b) {
  const double v[] = {a, b};
  return HermitianMatrix::diagonal(v);
}

// Reference 2x2 arithmetic for <v|(1 - 2|m><m|)|v> with real vectors.
double reflection_expectation(double v0, double v1, double m0, double m1) {
  const double overlap = v0 * m0 + v1 * m1;
  return v0 * v0 + v1 * v1 - 2.0 * overlap * overlap;
}

}  // namespace

TEST_CASE("state vectors validate dimension and norm") {
  CHECK_THROWS_AS(StateVector(std::vector<Complex>{{1, 0}}), DimensionError);
  CHECK_THROWS_AS(StateVector(std::vector<Complex>{{1, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}}), DimensionError);
  CHECK_THROWS_AS(StateVector(std::vector<Complex>{{1, 0}, {1, 0}}), InvariantViolation);
  CHECK_NOTHROW(StateVector(std::vector<Complex>{{1.0 + 4e-10, 0}, {0, 0}}));
  CHECK_THROWS_AS(StateVector::normalized({{0, 0}, {0, 0}}), InvariantViolation);
  CHECK_THROWS_AS(StateVector::normalized({{NAN, 0}, {1, 0}}), InvariantViolation);
  CHECK(StateVector::normalized({{3, 0}, {0, 4}}).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(StateVector::basis(3, 3), std::exception);
}

TEST_CASE("hermitian matrices validate symmetry") {
  CHECK_THROWS_AS(HermitianMatrix(2, {{1, 0}, {1, 1}, {1, 1}, {0, 0}}), InvariantViolation);
  CHECK_NOTHROW(HermitianMatrix(2, {{1, 0}, {1, 1}, {1, -1}, {0, 0}}));
  CHECK_THROWS_AS(HermitianMatrix(2, {{1, 0}, {0, 0}, {0, 0}}), DimensionError);
  CHECK_THROWS_AS(HermitianMatrix(2, {{0, 1}, {0, 0}, {0, 0}, {0, 0}}), InvariantViolation);
  CHECK_THROWS_AS(HermitianMatrix::identity(5), DimensionError);
}

TEST_CASE("expectation examples") {
  CHECK(expectation(StateVector::basis(2, 0), diag2(1, -1)) == 1.0);
  CHECK(std::abs(expectation(real2(1, 1), diag2(1, -1))) < 1e-15);

  const double x = std::numbers::pi / 4;
  const double m0 = std::cos(x / 2);
  const double m1 = -std::sin(x / 2);
  const auto obs = dichotomic_from_vector(real2(m0, m1));
  const double oracle = reflection_expectation(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), m0, m1);
  CHECK(oracle == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK(expectation(real2(1, 1), obs) == doctest::Approx(oracle).epsilon(1e-14));

  CHECK_THROWS_AS(expectation(StateVector::basis(3, 0), diag2(1, -1)), DimensionError);
}

TEST_CASE("expectation of the identity is one") {
  SplitMix64 rng(11);
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    for (int i = 0; i < 100; ++i) {
      CHECK(std::abs(expectation(random_state(d, rng), HermitianMatrix::identity(d)) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("eigh examples") {
  const auto id = eigh(HermitianMatrix::identity(3));
  CHECK(id.eigenvalues == std::vector<double>{1, 1, 1});

  const auto z = eigh(diag2(1, -1));
  CHECK(z.eigenvalues == std::vector<double>{1, -1});
  CHECK(std::abs(std::abs(z.eigenvectors[0][0]) - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(z.eigenvectors[1][1]) - 1.0) < 1e-15);

  SplitMix64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto e = eigh(dichotomic_from_vector(random_state(2, rng)));
    CHECK(std::abs(e.eigenvalues[0] - 1.0) < 1e-12);
    CHECK(std::abs(e.eigenvalues[1] + 1.0) < 1e-12);
  }
}

TEST_CASE("eigh reconstructs random hermitian matrices") {
  SplitMix64 rng(2024);
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    double worst_reconstruction = 0.0;
    double worst_residual = 0.0;
    double worst_overlap = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto a = random_hermitian(d, rng);
      const auto e = eigh(a);
      REQUIRE(e.eigenvalues.size() == static_cast<std::size_t>(d));
      for (int i = 1; i < d; ++i) CHECK(e.eigenvalues[i - 1] >= e.eigenvalues[i]);
      worst_reconstruction = std::max(worst_reconstruction, from_spectrum(e.eigenvalues, e.eigenvectors).max_abs_diff(a));
      for (int i = 0; i < d; ++i) {
        const auto& v = e.eigenvectors[static_cast<std::size_t>(i)];
        const auto av = a.apply(v.amplitudes());
        for (int k = 0; k < d; ++k) {
          worst_residual = std::max(worst_residual, std::abs(av[static_cast<std::size_t>(k)] - e.eigenvalues[i] * v[k]));
        }
        for (int j = i + 1; j < d; ++j) {
          worst_overlap = std::max(worst_overlap, std::abs(inner(v, e.eigenvectors[static_cast<std::size_t>(j)])));
        }
      }
    }
    CAPTURE(d);
    CHECK(worst_reconstruction < 1e-8);
    CHECK(worst_residual < 1e-8);
    CHECK(worst_overlap < 1e-8);
  }
}

TEST_CASE("eigh handles degenerate spectra") {
  SplitMix64 rng(8);
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    const auto basis = random_orthonormal_basis(d, rng);
    std::vector<double> values(static_cast<std::size_t>(d), 2.0);
    values.back() = -1.0;
    const auto a = from_spectrum(values, basis);
    const auto e = eigh(a);
    CHECK(from_spectrum(e.eigenvalues, e.eigenvectors).max_abs_diff(a) < 1e-10);
    for (int i = 0; i + 1 < d; ++i) CHECK(std::abs(e.eigenvalues[i] - 2.0) < 1e-10);
  }
}

TEST_CASE("dichotomic_from_vector examples") {
  CHECK(dichotomic_from_vector(StateVector::basis(2, 1)).max_abs_diff(diag2(1, -1)) < 1e-15);
  const HermitianMatrix x(2, {{0, 0}, {1, 0}, {1, 0}, {0, 0}});
  CHECK(dichotomic_from_vector(real2(1, -1)).max_abs_diff(x) < 1e-15);
  const double d3[] = {1, 1, -1};
  CHECK(dichotomic_from_vector(StateVector::basis(3, 2)).max_abs_diff(HermitianMatrix::diagonal(d3)) < 1e-15);
}

TEST_CASE("dichotomic_from_vector is a reflection with trace d - 2") {
  SplitMix64 rng(3);
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    for (int i = 0; i < 100; ++i) {
      const auto m = random_state(d, rng);
      const auto r = dichotomic_from_vector(m);
      CHECK(std::abs(r.trace() - (d - 2)) < 1e-10);
      CHECK(is_dichotomic(r));
      const auto rm = r.apply(m.amplitudes());
      for (int k = 0; k < d; ++k) CHECK(std::abs(rm[static_cast<std::size_t>(k)] + m[k]) < 1e-12);
    }
  }
}

TEST_CASE("sign_observable examples") {
  CHECK(sign_observable(diag2(3, -0.5)).max_abs_diff(diag2(1, -1)) == 0.0);
  CHECK(sign_observable(diag2(0, 2), Sign::Plus).max_abs_diff(diag2(1, 1)) == 0.0);
  CHECK(sign_observable(diag2(0, 2), Sign::Minus).max_abs_diff(diag2(-1, 1)) == 0.0);
  CHECK(sign_observable(diag2(5e-11, -2)).max_abs_diff(diag2(1, -1)) == 0.0);
  CHECK(sign_observable(diag2(-5e-11, -2), Sign::Minus).max_abs_diff(diag2(-1, -1)) == 0.0);

  // Σ_x c_x1 ρ_x over the optimal I3 qubit preparations reproduces M1.
  const double x = std::numbers::pi / 4;
  const auto m1 = real2(std::cos(x / 2), -std::sin(x / 2));
  auto h = HermitianMatrix::projector(real2(0, 1));
  h += HermitianMatrix::projector(real2(1, 1));
  h -= HermitianMatrix::projector(m1);
  CHECK(sign_observable(h).max_abs_diff(dichotomic_from_vector(m1)) < 1e-12);
}

TEST_CASE("sign_observable is idempotent and shares eigenvectors") {
  SplitMix64 rng(17);
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    for (int i = 0; i < 200; ++i) {
      const auto h = random_hermitian(d, rng);
      const auto s = sign_observable(h);
      CHECK(is_dichotomic(s));
      CHECK(sign_observable(s).max_abs_diff(s) < 1e-10);
      // Commuting with h: s·h·v = h·s·v for every basis vector.
      for (int k = 0; k < d; ++k) {
        const auto e = StateVector::basis(d, k);
        const auto hs = h.apply(s.apply(e.amplitudes()));
        const auto sh = s.apply(h.apply(e.amplitudes()));
        for (int j = 0; j < d; ++j) CHECK(std::abs(hs[static_cast<std::size_t>(j)] - sh[static_cast<std::size_t>(j)]) < 1e-9);
      }
    }
  }
}

TEST_CASE("random generators") {
  SplitMix64 a(99);
  SplitMix64 b(99);
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    const auto s = random_state(d, a);
    const auto t = random_state(d, b);
    CHECK(std::abs(s.norm() - 1.0) < 1e-9);
    for (int k = 0; k < d; ++k) CHECK(s[k] == t[k]);
  }
  for (int d = kMinDim; d <= kMaxDim; ++d) {
    const auto basis = random_orthonormal_basis(d, a);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const double want = i == j ? 1.0 : 0.0;
        CHECK(std::abs(inner(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]) - want) < 1e-12);
      }
    }
    for (int i = 0; i < 50; ++i) {
      const auto m = random_dichotomic(d, a);
      CHECK(is_dichotomic(m));
      CHECK(eigh(m).eigenvalues.back() == doctest::Approx(-1.0));
    }
  }
}

TEST_CASE("rng streams") {
  SplitMix64 a(1);
  SplitMix64 b(1);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(SplitMix64::stream(42, 3).next() == SplitMix64(42 ^ 3).next());
  CHECK(SplitMix64::stream(42, 3).next() != SplitMix64::stream(42, 4).next());

  SplitMix64 u(7);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = u.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}
