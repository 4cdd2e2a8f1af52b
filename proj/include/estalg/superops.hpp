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

#include <cstddef>
#include <vector>

#include "estalg/operators.hpp"

namespace estalg {

/// Column-stacking vectorization: vec(AXB) = (B^T kron A) vec(X).
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, int dim);

/// Linear map on operators, stored as a dim^2 x dim^2 matrix acting on vec(X).
class SuperOperator {
 public:
  SuperOperator(int dim, Matrix matrix);

  static SuperOperator identity(int dim);
  static SuperOperator zero(int dim);

  int dim() const noexcept { return dim_; }
  const Matrix& matrix() const noexcept { return m_; }
  double norm() const { return m_.norm(); }

  Operator apply(const Operator& x) const;
  Matrix apply(const Matrix& x) const;

  friend SuperOperator operator+(const SuperOperator& a, const SuperOperator& b);
  friend SuperOperator operator-(const SuperOperator& a, const SuperOperator& b);
  friend SuperOperator operator*(Complex s, const SuperOperator& a);
  /// Composition: (a * b)(X) = a(b(X)).
  friend SuperOperator operator*(const SuperOperator& a, const SuperOperator& b);

 private:
  int dim_;
  Matrix m_;
};

inline Operator apply(const SuperOperator& s, const Operator& x) { return s.apply(x); }

/// zeta_A(X) = X A + A^dagger X.
SuperOperator zeta(const Operator& a);

/// X -> left X right.
SuperOperator sandwich(const Operator& left, const Operator& right);

/// Lie bracket of super-operators, S1 o S2 - S2 o S1.
SuperOperator sbracket(const SuperOperator& a, const SuperOperator& b);

/// D_S(X, Y) = S(XY) - S(X) Y - X S(Y).
Operator dissipation(const SuperOperator& s, const Operator& x, const Operator& y);

struct DerivationCertificate {
  bool is_derivation;
  /// Largest Frobenius norm of the dissipation over all pairs of matrix units.
  double max_defect;
};

/// Decides whether `s` is a derivation by evaluating the dissipation on every
/// pair of matrix units (a spanning set of the bilinear argument space).
DerivationCertificate is_derivation(const SuperOperator& s, double tol);

/// Adjoint with respect to the trace pairing tr{S*(rho) X} = tr{rho S(X)}.
SuperOperator adjoint(const SuperOperator& s);

/// Coupling vector L and Hamiltonian H of an open quantum system.
class ModelSpec {
 public:
  /// Throws InputError on mismatched dimensions or if H is not self-adjoint
  /// within 1e-12 relative to its Frobenius norm.
  ModelSpec(std::vector<Operator> couplings, Operator hamiltonian);

  int dim() const noexcept { return h_.dim(); }
  std::size_t channels() const noexcept { return l_.size(); }
  const std::vector<Operator>& couplings() const noexcept { return l_; }
  const Operator& coupling(std::size_t k) const { return l_.at(k); }
  const Operator& hamiltonian() const noexcept { return h_; }

 private:
  std::vector<Operator> l_;
  Operator h_;
};

/// Which output channels are measured in homodyne, and at which phases.
///
/// Channel indices are zero-based; the JSON encoding is one-based.
class MeasurementScheme {
 public:
  MeasurementScheme() = default;
  MeasurementScheme(std::vector<int> observed, std::vector<double> theta);

  /// Every one of `channels` outputs observed at phase `theta`.
  static MeasurementScheme complete(std::size_t channels, double theta = 0.0);
  static MeasurementScheme complete(std::vector<double> thetas);

  const std::vector<int>& observed() const noexcept { return observed_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  std::size_t size() const noexcept { return observed_.size(); }
  bool observes(int channel) const;
  bool is_complete(std::size_t channels) const;

  /// Throws InputError if an observed index is not a channel of `g`.
  void check_against(const ModelSpec& g) const;

 private:
  std::vector<int> observed_;
  std::vector<double> theta_;
};

/// e^{i theta_alpha} L_alpha for the `i`-th observed channel of the scheme.
Operator measured_coupling(const ModelSpec& g, const MeasurementScheme& scheme, std::size_t i);

enum class LindbladForm {
  /// sum {L* X L - 1/2 L*L X - 1/2 X L*L} - i[X, H]
  kDirect,
  /// sum L* X L + zeta_K
  kZetaSplit,
  /// 1/2 sum (zeta_L o zeta_L - zeta_{L^2}) + zeta_K
  kZetaSquares,
};

/// Lindblad generator in the Heisenberg picture.
SuperOperator lindblad(const ModelSpec& g, LindbladForm form = LindbladForm::kDirect);

/// K = -1/2 sum L*L - iH.
Operator k_ito(const ModelSpec& g);

/// Closed forms for the Stratonovich K(G, Theta). Only kDerived satisfies
/// strat_generator = zeta_K + l_unobs; the other two are kept as negative
/// controls reproducing the printed variants.
enum class KForm {
  /// -1/2 sum_A (L*L + e^{2i theta} L^2) - iH
  kDerived,
  /// -1/2 sum_A (L*L - e^{2i theta} L^2) - iH
  kPaperInline,
  /// -1/2 sum_A (L*L - 1/2 e^{2i theta} L^2) - iH
  kPaperComplete,
};

Operator k_strat(const ModelSpec& g, const MeasurementScheme& scheme,
                 KForm form = KForm::kDerived);

/// L_G - 1/2 sum_{alpha in A} zeta_{e^{i theta} L} o zeta_{e^{i theta} L}.
SuperOperator strat_generator(const ModelSpec& g, const MeasurementScheme& scheme);

/// Dissipator summed over unobserved channels, without Hamiltonian term.
SuperOperator l_unobs(const ModelSpec& g, const MeasurementScheme& scheme);

}  // namespace estalg
