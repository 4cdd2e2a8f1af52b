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

#include "estalg/operators.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "estalg/error.hpp"

namespace estalg {

namespace {

void require_dim_match(int a, int b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                     " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Operator::Operator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw InputError("operator must be square, got " + std::to_string(m_.rows()) + "x" +
                     std::to_string(m_.cols()));
  }
  if (m_.rows() < 1 || m_.rows() > kMaxDim) {
    throw InputError("operator dimension " + std::to_string(m_.rows()) +
                     " outside 1.." + std::to_string(kMaxDim));
  }
  if (!m_.allFinite()) {
    throw InputError("operator has non-finite entries");
  }
}

Operator Operator::identity(int dim) { return Operator(Matrix::Identity(dim, dim)); }

Operator Operator::zero(int dim) { return Operator(Matrix::Zero(dim, dim)); }

Operator operator+(const Operator& a, const Operator& b) {
  require_dim_match(a.dim(), b.dim(), "operator +");
  return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_dim_match(a.dim(), b.dim(), "operator -");
  return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_dim_match(a.dim(), b.dim(), "operator *");
  return Operator(a.m_ * b.m_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.m_); }

Operator operator-(const Operator& a) { return Operator(-a.m_); }

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  require_dim_match(a.dim(), b.dim(), what);
}

Operator dagger(const Operator& a) { return Operator(a.matrix().adjoint()); }

Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "commutator");
  return Operator(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

Operator anticommutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "anticommutator");
  return Operator(a.matrix() * b.matrix() + b.matrix() * a.matrix());
}

Complex hs_inner(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "hs_inner");
  // tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum();
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("expm: matrix must be square");
  if (!a.allFinite()) throw InputError("expm: non-finite input");
  return a.exp();
}

Operator expm(const Operator& a) { return Operator(expm(a.matrix())); }

HermitianCheck hermitian_check(const Operator& a, double tol) {
  const Matrix diff = a.matrix() - a.matrix().adjoint();
  // i(A - A^dagger) is self-adjoint, so its spectral radius is the operator norm.
  const Matrix herm = Complex(0.0, 1.0) * diff;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
  const double defect = eig.eigenvalues().cwiseAbs().maxCoeff();
  return {defect <= tol, defect};
}

Operator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator(m);
}

Operator pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return Operator(m);
}

Operator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator(m);
}

Operator sigma_minus() { return matrix_unit(2, 1, 0); }

Operator sigma_plus() { return matrix_unit(2, 0, 1); }

Operator matrix_unit(int dim, int row, int col) {
  if (row < 0 || row >= dim || col < 0 || col >= dim) {
    throw InputError("matrix_unit: index out of range");
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return Operator(m);
}

Operator annihilation(int levels) {
  Matrix m = Matrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(m);
}

}  // namespace estalg
