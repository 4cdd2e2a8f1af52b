// Copyright 2026 The estalg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace estalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest Hilbert-space dimension accepted by Operator.
inline constexpr int kMaxDim = 64;

/// Dense operator on a finite-dimensional Hilbert space.
///
/// Holds a square complex matrix of size 1..kMaxDim with finite entries.
/// Values are immutable after construction.
class Operator {
 public:
  /// Throws InputError if `entries` is not square, is empty, exceeds
  /// kMaxDim or holds a non-finite entry.
  explicit Operator(Matrix entries);

  static Operator identity(int dim);
  static Operator zero(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  /// Frobenius norm.
  double norm() const { return m_.norm(); }

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);
  friend Operator operator-(const Operator& a);

 private:
  Matrix m_;
};

struct HermitianCheck {
  bool is_selfadjoint;
  /// Operator-norm distance ||A - A^dagger||.
  double defect;
};

Operator dagger(const Operator& a);
Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

/// Hilbert-Schmidt pairing tr(A^dagger B).
Complex hs_inner(const Operator& a, const Operator& b);

/// Matrix exponential by scaling and squaring with a Pade approximant.
Operator expm(const Operator& a);
Matrix expm(const Matrix& a);

/// Self-adjointness at absolute tolerance `tol` in operator norm.
HermitianCheck hermitian_check(const Operator& a, double tol = 0.0);

/// Throws InputError unless both operators act on the same space.
void require_same_dim(const Operator& a, const Operator& b, const char* what);

// Standard operators.
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
/// Lowering matrix |1><0|, taking the +1 eigenvector of pauli_z to the -1 one.
Operator sigma_minus();
Operator sigma_plus();
/// Matrix unit |row><col|.
Operator matrix_unit(int dim, int row, int col);
/// Annihilation operator of an oscillator truncated to `levels` Fock states.
Operator annihilation(int levels);

}  // namespace estalg
