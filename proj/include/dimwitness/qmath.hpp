#pragma once

// Dense complex linear algebra for Hilbert-space dimensions 2 to 4.

#include <complex>
#include <span>
#include <vector>

#include "dimwitness/errors.hpp"
#include "dimwitness/rng.hpp"

namespace dimwitness {

using Complex = std::complex<double>;

inline constexpr double kNormTol = 1e-9;
inline constexpr double kHermTol = 1e-12;
inline constexpr double kEigTol = 1e-8;
// Eigenvalues with |λ| at or below this are treated as zero by sign_observable.
inline constexpr double kSignTol = 1e-10;
// Jacobi stops once the off-diagonal Frobenius mass drops below this,
// relative to max(1, ||A||_F).
inline constexpr double kJacobiTol = 1e-12;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 4;

enum class Sign : int { Minus = -1, Plus = 1 };

inline double to_double(Sign s) { return static_cast<double>(static_cast<int>(s)); }

// Unit-norm pure state.
class StateVector {
 public:
  // Throws DimensionError for a size outside [kMinDim, kMaxDim] and
  // InvariantViolation if the norm deviates from 1 by more than kNormTol.
  explicit StateVector(std::vector<Complex> amplitudes);

  // Rescales to unit norm; throws InvariantViolation on a zero or non-finite
  // vector.
  static StateVector normalized(std::vector<Complex> amplitudes);
  static StateVector basis(int dim, int k);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Complex& operator[](int i) const { return amps_[static_cast<std::size_t>(i)]; }
  std::span<const Complex> amplitudes() const { return amps_; }
  double norm() const;

 private:
  std::vector<Complex> amps_;
};

// <a|b>
Complex inner(const StateVector& a, const StateVector& b);

class HermitianMatrix {
 public:
  // Row-major entries. Throws DimensionError on a bad size and
  // InvariantViolation when entries[i][j] != conj(entries[j][i]) within
  // kHermTol or any entry is non-finite.
  HermitianMatrix(int dim, std::vector<Complex> row_major);

  static HermitianMatrix zero(int dim);
  static HermitianMatrix identity(int dim);
  static HermitianMatrix diagonal(std::span<const double> values);
  // |v><v|
  static HermitianMatrix projector(const StateVector& v);

  int dim() const { return dim_; }
  const Complex& operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * dim_ + j)];
  }
  std::span<const Complex> entries() const { return entries_; }

  HermitianMatrix& operator+=(const HermitianMatrix& rhs);
  HermitianMatrix& operator-=(const HermitianMatrix& rhs);
  HermitianMatrix& operator*=(double s);

  std::vector<Complex> apply(std::span<const Complex> v) const;
  double trace() const;
  // Largest entrywise deviation from rhs.
  double max_abs_diff(const HermitianMatrix& rhs) const;

 private:
  int dim_;
  std::vector<Complex> entries_;
};

HermitianMatrix operator+(HermitianMatrix lhs, const HermitianMatrix& rhs);
HermitianMatrix operator-(HermitianMatrix lhs, const HermitianMatrix& rhs);
HermitianMatrix operator*(double s, HermitianMatrix m);

struct EigenDecomposition {
  std::vector<double> eigenvalues;        // descending
  std::vector<StateVector> eigenvectors;  // orthonormal, eigenvectors[i] ↔ eigenvalues[i]
};

// <ψ|M|ψ>. Throws DimensionError on mismatch.
double expectation(const StateVector& state, const HermitianMatrix& obs);

// Complex cyclic Jacobi.
EigenDecomposition eigh(const HermitianMatrix& h);

// Σ λ_i |v_i><v_i|
HermitianMatrix from_spectrum(std::span<const double> eigenvalues,
                              std::span<const StateVector> eigenvectors);

// 1 - 2|m><m|: eigenvalue -1 on m, +1 on its orthogonal complement.
HermitianMatrix dichotomic_from_vector(const StateVector& m);

// Replaces every eigenvalue by its sign; eigenvalues within kSignTol of zero
// become zero_tie.
HermitianMatrix sign_observable(const HermitianMatrix& h, Sign zero_tie = Sign::Plus);

// M² = 1 within tol entrywise.
bool is_dichotomic(const HermitianMatrix& m, double tol = kEigTol);

// Haar-random pure state.
StateVector random_state(int dim, SplitMix64& rng);
// Haar-random unitary, returned as its orthonormal columns.
std::vector<StateVector> random_orthonormal_basis(int dim, SplitMix64& rng);
// U D U† with D a random ±1 diagonal holding at least one -1.
HermitianMatrix random_dichotomic(int dim, SplitMix64& rng);

}  // namespace dimwitness
