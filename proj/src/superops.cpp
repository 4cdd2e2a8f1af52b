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

#include "estalg/superops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "estalg/error.hpp"

namespace estalg {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

void require_same_dim(const SuperOperator& a, const SuperOperator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InputError(std::string(what) + ": super-operator dimension mismatch");
  }
}

Matrix dissipator_matrix(const Operator& l) {
  const int d = l.dim();
  const Matrix& m = l.matrix();
  const Matrix ldl = m.adjoint() * m;
  const Matrix id = Matrix::Identity(d, d);
  // L* X L - 1/2 L*L X - 1/2 X L*L
  return kron(m.transpose(), m.adjoint()) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
}

}  // namespace

Vector vec(const Matrix& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

Matrix unvec(const Vector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw InputError("unvec: vector length does not match dimension");
  }
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

SuperOperator::SuperOperator(int dim, Matrix matrix) : dim_(dim), m_(std::move(matrix)) {
  if (dim < 1 || dim > kMaxDim) throw InputError("super-operator dimension out of range");
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  if (m_.rows() != n || m_.cols() != n) {
    throw InputError("super-operator matrix must be dim^2 x dim^2");
  }
}

SuperOperator SuperOperator::identity(int dim) {
  const int n = dim * dim;
  return SuperOperator(dim, Matrix::Identity(n, n));
}

SuperOperator SuperOperator::zero(int dim) {
  const int n = dim * dim;
  return SuperOperator(dim, Matrix::Zero(n, n));
}

Matrix SuperOperator::apply(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw InputError("apply: operator dimension does not match super-operator");
  }
  return unvec(m_ * vec(x), dim_);
}

Operator SuperOperator::apply(const Operator& x) const { return Operator(apply(x.matrix())); }

SuperOperator operator+(const SuperOperator& a, const SuperOperator& b) {
  require_same_dim(a, b, "super-operator +");
  return SuperOperator(a.dim_, a.m_ + b.m_);
}

SuperOperator operator-(const SuperOperator& a, const SuperOperator& b) {
  require_same_dim(a, b, "super-operator -");
  return SuperOperator(a.dim_, a.m_ - b.m_);
}

SuperOperator operator*(Complex s, const SuperOperator& a) { return SuperOperator(a.dim_, s * a.m_); }

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
  require_same_dim(a, b, "super-operator composition");
  return SuperOperator(a.dim_, a.m_ * b.m_);
}

SuperOperator zeta(const Operator& a) {
  const int d = a.dim();
  const Matrix id = Matrix::Identity(d, d);
  // vec(X A) = (A^T kron I) vec X,  vec(A* X) = (I kron A*) vec X
  return SuperOperator(d, kron(a.matrix().transpose(), id) + kron(id, a.matrix().adjoint()));
}

SuperOperator sandwich(const Operator& left, const Operator& right) {
  require_same_dim(left, right, "sandwich");
  return SuperOperator(left.dim(), kron(right.matrix().transpose(), left.matrix()));
}

SuperOperator sbracket(const SuperOperator& a, const SuperOperator& b) {
  require_same_dim(a, b, "sbracket");
  return SuperOperator(a.dim(), a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

Operator dissipation(const SuperOperator& s, const Operator& x, const Operator& y) {
  require_same_dim(x, y, "dissipation");
  const Matrix& xm = x.matrix();
  const Matrix& ym = y.matrix();
  return Operator(s.apply(Matrix(xm * ym)) - s.apply(xm) * ym - xm * s.apply(ym));
}

DerivationCertificate is_derivation(const SuperOperator& s, double tol) {
  if (!(tol > 0.0)) throw InputError("is_derivation: tolerance must be positive");
  const int d = s.dim();
  // Image of the matrix unit E_ij is the column i + j d of the stored matrix.
  auto image = [&](int i, int j) { return unvec(s.matrix().col(i + j * d), d); };
  std::vector<Matrix> images;
  images.reserve(static_cast<std::size_t>(d) * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) images.push_back(image(i, j));
  auto img = [&](int i, int j) -> const Matrix& { return images[i + j * d]; };

  double worst = 0.0;
  Matrix defect(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          // X = E_ij, Y = E_kl, XY = delta_jk E_il
          if (j == k) {
            defect = img(i, l);
          } else {
            defect.setZero();
          }
          defect.col(l) -= img(i, j).col(k);
          defect.row(i) -= img(k, l).row(j);
          worst = std::max(worst, defect.norm());
        }
  return {worst <= tol, worst};
}

SuperOperator adjoint(const SuperOperator& s) {
  const int d = s.dim();
  const int n = d * d;
  // With P the transposition permutation on vec, S* = P S^T P.
  auto transposed = [d](int p) { return (p / d) + (p % d) * d; };
  Matrix out(n, n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) out(p, q) = s.matrix()(transposed(q), transposed(p));
  return SuperOperator(d, std::move(out));
}

ModelSpec::ModelSpec(std::vector<Operator> couplings, Operator hamiltonian)
    : l_(std::move(couplings)), h_(std::move(hamiltonian)) {
  for (std::size_t k = 0; k < l_.size(); ++k) {
    if (l_[k].dim() != h_.dim()) {
      throw InputError("coupling L[" + std::to_string(k) + "] has dimension " +
                       std::to_string(l_[k].dim()) + ", Hamiltonian has " +
                       std::to_string(h_.dim()));
    }
  }
  const auto check = hermitian_check(h_);
  if (check.defect > 1e-12 * std::max(1.0, h_.norm())) {
    throw InputError("Hamiltonian is not self-adjoint (defect " + std::to_string(check.defect) +
                     ")");
  }
}

MeasurementScheme::MeasurementScheme(std::vector<int> observed, std::vector<double> theta)
    : observed_(std::move(observed)), theta_(std::move(theta)) {
  if (observed_.size() != theta_.size()) {
    throw InputError("measurement scheme needs one phase per observed channel");
  }
  for (std::size_t i = 0; i < observed_.size(); ++i) {
    if (observed_[i] < 0) throw InputError("observed channel index must be non-negative");
    if (!std::isfinite(theta_[i])) throw InputError("quadrature phase must be finite");
    for (std::size_t j = 0; j < i; ++j) {
      if (observed_[j] == observed_[i]) throw InputError("observed channel listed twice");
    }
  }
}

MeasurementScheme MeasurementScheme::complete(std::size_t channels, double theta) {
  return complete(std::vector<double>(channels, theta));
}

MeasurementScheme MeasurementScheme::complete(std::vector<double> thetas) {
  std::vector<int> idx(thetas.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k);
  return MeasurementScheme(std::move(idx), std::move(thetas));
}

bool MeasurementScheme::observes(int channel) const {
  return std::find(observed_.begin(), observed_.end(), channel) != observed_.end();
}

bool MeasurementScheme::is_complete(std::size_t channels) const {
  if (observed_.size() != channels) return false;
  return std::all_of(observed_.begin(), observed_.end(),
                     [channels](int k) { return static_cast<std::size_t>(k) < channels; });
}

void MeasurementScheme::check_against(const ModelSpec& g) const {
  for (int k : observed_) {
    if (static_cast<std::size_t>(k) >= g.channels()) {
      throw InputError("observed channel " + std::to_string(k + 1) + " out of range (model has " +
                       std::to_string(g.channels()) + " channels)");
    }
  }
}

Operator measured_coupling(const ModelSpec& g, const MeasurementScheme& scheme, std::size_t i) {
  scheme.check_against(g);
  const int k = scheme.observed().at(i);
  return std::polar(1.0, scheme.theta()[i]) * g.coupling(static_cast<std::size_t>(k));
}

SuperOperator lindblad(const ModelSpec& g, LindbladForm form) {
  const int d = g.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& h = g.hamiltonian().matrix();
  switch (form) {
    case LindbladForm::kDirect: {
      // -i[X, H] = -i X H + i H X
      Matrix m = -kI * kron(h.transpose(), id) + kI * kron(id, h);
      for (const auto& l : g.couplings()) m += dissipator_matrix(l);
      return SuperOperator(d, std::move(m));
    }
    case LindbladForm::kZetaSplit: {
      SuperOperator s = zeta(k_ito(g));
      for (const auto& l : g.couplings()) s = s + sandwich(dagger(l), l);
      return s;
    }
    case LindbladForm::kZetaSquares: {
      SuperOperator s = zeta(k_ito(g));
      for (const auto& l : g.couplings()) {
        const SuperOperator zl = zeta(l);
        s = s + Complex(0.5) * (zl * zl - zeta(l * l));
      }
      return s;
    }
  }
  throw InputError("unknown Lindblad form");
}

Operator k_ito(const ModelSpec& g) {
  Matrix k = -kI * g.hamiltonian().matrix();
  for (const auto& l : g.couplings()) k -= 0.5 * l.matrix().adjoint() * l.matrix();
  return Operator(std::move(k));
}

Operator k_strat(const ModelSpec& g, const MeasurementScheme& scheme, KForm form) {
  scheme.check_against(g);
  double square_weight = 1.0;
  switch (form) {
    case KForm::kDerived:
      square_weight = 1.0;
      break;
    case KForm::kPaperInline:
      square_weight = -1.0;
      break;
    case KForm::kPaperComplete:
      square_weight = -0.5;
      break;
  }
  Matrix k = -kI * g.hamiltonian().matrix();
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    const Matrix& l = g.coupling(static_cast<std::size_t>(scheme.observed()[i])).matrix();
    const Complex phase2 = std::polar(1.0, 2.0 * scheme.theta()[i]);
    k -= 0.5 * (l.adjoint() * l + square_weight * phase2 * (l * l));
  }
  return Operator(std::move(k));
}

SuperOperator strat_generator(const ModelSpec& g, const MeasurementScheme& scheme) {
  scheme.check_against(g);
  SuperOperator s = lindblad(g);
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    const SuperOperator z = zeta(measured_coupling(g, scheme, i));
    s = s - Complex(0.5) * (z * z);
  }
  return s;
}

SuperOperator l_unobs(const ModelSpec& g, const MeasurementScheme& scheme) {
  scheme.check_against(g);
  const int d = g.dim();
  const int n = d * d;
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < g.channels(); ++k) {
    if (!scheme.observes(static_cast<int>(k))) m += dissipator_matrix(g.coupling(k));
  }
  return SuperOperator(d, std::move(m));
}

}  // namespace estalg
