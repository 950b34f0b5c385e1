#include "dimwitness/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dimwitness {

namespace {

void check_dim(int dim, const char* what) {
  if (dim < kMinDim || dim > kMaxDim) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(dim) +
                         " outside [" + std::to_string(kMinDim) + ", " +
                         std::to_string(kMaxDim) + "]");
  }
}

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double squared_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  check_dim(dim(), "StateVector");
  for (const auto& z : amps_) {
    if (!finite(z)) throw InvariantViolation("StateVector: non-finite amplitude");
  }
  const double n = norm();
  if (std::abs(n - 1.0) > kNormTol) {
    throw InvariantViolation("StateVector: norm " + std::to_string(n) + " is not 1");
  }
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
  check_dim(static_cast<int>(amplitudes.size()), "StateVector");
  const double n = std::sqrt(squared_norm(amplitudes));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvariantViolation("StateVector: cannot normalize a zero or non-finite vector");
  }
  for (auto& z : amplitudes) z /= n;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(int dim, int k) {
  check_dim(dim, "StateVector");
  if (k < 0 || k >= dim) throw DimensionError("basis index out of range");
  std::vector<Complex> v(static_cast<std::size_t>(dim));
  v[static_cast<std::size_t>(k)] = 1.0;
  return StateVector(std::move(v));
}

double StateVector::norm() const { return std::sqrt(squared_norm(amps_)); }

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
  Complex s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

HermitianMatrix::HermitianMatrix(int dim, std::vector<Complex> row_major)
    : dim_(dim), entries_(std::move(row_major)) {
  check_dim(dim, "HermitianMatrix");
  if (entries_.size() != static_cast<std::size_t>(dim * dim)) {
    throw DimensionError("HermitianMatrix: expected " + std::to_string(dim * dim) +
                         " entries, got " + std::to_string(entries_.size()));
  }
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      const auto& a = (*this)(i, j);
      const auto& b = (*this)(j, i);
      if (!finite(a)) throw InvariantViolation("HermitianMatrix: non-finite entry");
      if (std::abs(a - std::conj(b)) > kHermTol) {
        throw InvariantViolation("HermitianMatrix: entry (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") is not the conjugate of its transpose");
      }
    }
  }
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  check_dim(dim, "HermitianMatrix");
  return HermitianMatrix(dim, std::vector<Complex>(static_cast<std::size_t>(dim * dim)));
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  check_dim(dim, "HermitianMatrix");
  std::vector<double> ones(static_cast<std::size_t>(dim), 1.0);
  return diagonal(ones);
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  const int d = static_cast<int>(values.size());
  check_dim(d, "HermitianMatrix");
  std::vector<Complex> e(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i * d + i)] = values[static_cast<std::size_t>(i)];
  return HermitianMatrix(d, std::move(e));
}

HermitianMatrix HermitianMatrix::projector(const StateVector& v) {
  const int d = v.dim();
  std::vector<Complex> e(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) e[static_cast<std::size_t>(i * d + j)] = v[i] * std::conj(v[j]);
  }
  return HermitianMatrix(d, std::move(e));
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& rhs) {
  if (rhs.dim_ != dim_) throw DimensionError("HermitianMatrix +: dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& rhs) {
  if (rhs.dim_ != dim_) throw DimensionError("HermitianMatrix -: dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  for (auto& z : entries_) z *= s;
  return *this;
}

HermitianMatrix operator+(HermitianMatrix lhs, const HermitianMatrix& rhs) { return lhs += rhs; }
HermitianMatrix operator-(HermitianMatrix lhs, const HermitianMatrix& rhs) { return lhs -= rhs; }
HermitianMatrix operator*(double s, HermitianMatrix m) { return m *= s; }

std::vector<Complex> HermitianMatrix::apply(std::span<const Complex> v) const {
  if (static_cast<int>(v.size()) != dim_) throw DimensionError("HermitianMatrix::apply: dimension mismatch");
  std::vector<Complex> out(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    Complex s = 0.0;
    for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i).real();
  return t;
}

double HermitianMatrix::max_abs_diff(const HermitianMatrix& rhs) const {
  if (rhs.dim_ != dim_) throw DimensionError("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) m = std::max(m, std::abs(entries_[i] - rhs.entries_[i]));
  return m;
}

double expectation(const StateVector& state, const HermitianMatrix& obs) {
  if (state.dim() != obs.dim()) {
    throw DimensionError("expectation: state dimension " + std::to_string(state.dim()) +
                         " vs observable dimension " + std::to_string(obs.dim()));
  }
  const auto mv = obs.apply(state.amplitudes());
  double s = 0.0;
  for (int i = 0; i < state.dim(); ++i) s += (std::conj(state[i]) * mv[static_cast<std::size_t>(i)]).real();
  return s;
}

EigenDecomposition eigh(const HermitianMatrix& h) {
  const int d = h.dim();
  const auto at = [d](int i, int j) { return static_cast<std::size_t>(i * d + j); };
  std::vector<Complex> a(h.entries().begin(), h.entries().end());
  std::vector<Complex> v(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i) v[at(i, i)] = 1.0;

  const double scale = std::max(1.0, std::sqrt(squared_norm(a)));
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j) off += std::norm(a[at(i, j)]);
      }
    }
    if (std::sqrt(off) < kJacobiTol * scale) break;

    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const Complex b = a[at(p, q)];
        const double r = std::abs(b);
        if (r == 0.0) continue;
        const Complex phase = b / r;
        const double theta = (a[at(q, q)].real() - a[at(p, p)].real()) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Block of W = diag(1, e^{-iφ}) · [[c, s], [-s, c]].
        const Complex w_pp = c;
        const Complex w_pq = s;
        const Complex w_qp = -s * std::conj(phase);
        const Complex w_qq = c * std::conj(phase);

        for (int k = 0; k < d; ++k) {  // A ← A W
          const Complex akp = a[at(k, p)];
          const Complex akq = a[at(k, q)];
          a[at(k, p)] = akp * w_pp + akq * w_qp;
          a[at(k, q)] = akp * w_pq + akq * w_qq;
        }
        for (int k = 0; k < d; ++k) {  // A ← W† A
          const Complex apk = a[at(p, k)];
          const Complex aqk = a[at(q, k)];
          a[at(p, k)] = std::conj(w_pp) * apk + std::conj(w_qp) * aqk;
          a[at(q, k)] = std::conj(w_pq) * apk + std::conj(w_qq) * aqk;
        }
        a[at(p, q)] = 0.0;
        a[at(q, p)] = 0.0;
        a[at(p, p)] = a[at(p, p)].real();
        a[at(q, q)] = a[at(q, q)].real();
        for (int k = 0; k < d; ++k) {  // V ← V W
          const Complex vkp = v[at(k, p)];
          const Complex vkq = v[at(k, q)];
          v[at(k, p)] = vkp * w_pp + vkq * w_qp;
          v[at(k, q)] = vkp * w_pq + vkq * w_qq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a[at(i, i)].real() > a[at(j, j)].real(); });

  EigenDecomposition out;
  for (int idx : order) {
    out.eigenvalues.push_back(a[at(idx, idx)].real());
    std::vector<Complex> col(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) col[static_cast<std::size_t>(k)] = v[at(k, idx)];
    out.eigenvectors.push_back(StateVector::normalized(std::move(col)));
  }
  return out;
}

HermitianMatrix from_spectrum(std::span<const double> eigenvalues, std::span<const StateVector> eigenvectors) {
  if (eigenvalues.size() != eigenvectors.size() || eigenvectors.empty()) {
    throw DimensionError("from_spectrum: eigenvalue/eigenvector count mismatch");
  }
  auto out = HermitianMatrix::zero(eigenvectors.front().dim());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    out += eigenvalues[i] * HermitianMatrix::projector(eigenvectors[i]);
  }
  return out;
}

HermitianMatrix dichotomic_from_vector(const StateVector& m) {
  return HermitianMatrix::identity(m.dim()) - 2.0 * HermitianMatrix::projector(m);
}

HermitianMatrix sign_observable(const HermitianMatrix& h, Sign zero_tie) {
  const auto eig = eigh(h);
  std::vector<double> signs;
  signs.reserve(eig.eigenvalues.size());
  for (double lambda : eig.eigenvalues) {
    if (lambda > kSignTol) {
      signs.push_back(1.0);
    } else if (lambda < -kSignTol) {
      signs.push_back(-1.0);
    } else {
      signs.push_back(to_double(zero_tie));
    }
  }
  return from_spectrum(signs, eig.eigenvectors);
}

bool is_dichotomic(const HermitianMatrix& m, double tol) {
  const int d = m.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < d; ++k) s += m(i, k) * m(k, j);
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return true;
}

StateVector random_state(int dim, SplitMix64& rng) {
  check_dim(dim, "random_state");
  std::vector<Complex> v(static_cast<std::size_t>(dim));
  for (auto& z : v) {
    const double re = rng.normal();
    z = Complex(re, rng.normal());
  }
  return StateVector::normalized(std::move(v));
}

std::vector<StateVector> random_orthonormal_basis(int dim, SplitMix64& rng) {
  check_dim(dim, "random_orthonormal_basis");
  std::vector<std::vector<Complex>> cols;
  std::vector<StateVector> out;
  while (static_cast<int>(out.size()) < dim) {
    std::vector<Complex> v(static_cast<std::size_t>(dim));
    for (auto& z : v) {
      const double re = rng.normal();
      z = Complex(re, rng.normal());
    }
    // Modified Gram-Schmidt, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : out) {
        Complex proj = 0.0;
        for (int k = 0; k < dim; ++k) proj += std::conj(u[k]) * v[static_cast<std::size_t>(k)];
        for (int k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] -= proj * u[k];
      }
    }
    if (std::sqrt(squared_norm(v)) < 1e-8) continue;
    out.push_back(StateVector::normalized(std::move(v)));
  }
  return out;
}

HermitianMatrix random_dichotomic(int dim, SplitMix64& rng) {
  const auto basis = random_orthonormal_basis(dim, rng);
  std::vector<double> signs(static_cast<std::size_t>(dim));
  bool any_minus = false;
  for (auto& s : signs) {
    s = rng.uniform() < 0.5 ? -1.0 : 1.0;
    any_minus = any_minus || s < 0.0;
  }
  if (!any_minus) {
    const auto k = static_cast<std::size_t>(rng.next() % static_cast<std::uint64_t>(dim));
    signs[k] = -1.0;
  }
  return from_spectrum(signs, basis);
}

}  // namespace dimwitness
