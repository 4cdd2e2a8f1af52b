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
#include <optional>
#include <span>
#include <vector>

#include "estalg/operators.hpp"
#include "estalg/superops.hpp"

namespace estalg {

/// Real Hilbert-Schmidt inner product Re tr(A^dagger B).
double real_inner(const Matrix& a, const Matrix& b);

inline constexpr double kDefaultClosureTol = 1e-9;

/// Orthonormal basis (under real_inner) of a real subspace of complex matrices.
class Subspace {
 public:
  Subspace() = default;

  std::size_t dimension() const noexcept { return basis_.size(); }
  const std::vector<Matrix>& basis() const noexcept { return basis_; }

  /// Component of `m` orthogonal to the span (two passes of Gram-Schmidt).
  Matrix residual(const Matrix& m) const;

  /// Appends the normalized residual of `m` if its norm exceeds `threshold`.
  /// Returns the residual norm.
  double add(const Matrix& m, double threshold, bool* added = nullptr);

  /// Real coordinates of `m` in the basis.
  Eigen::VectorXd coordinates(const Matrix& m) const;

 private:
  std::vector<Matrix> basis_;
};

/// Real structure constants c(i, j, k) with [X_i, X_j] = sum_k c(i, j, k) X_k.
class StructureConstants {
 public:
  explicit StructureConstants(std::size_t dimension = 0)
      : n_(dimension), c_(dimension * dimension * dimension, 0.0) {}
  std::size_t dimension() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * n_ + j) * n_ + k];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return c_[(i * n_ + j) * n_ + k];
  }

 private:
  std::size_t n_;
  std::vector<double> c_;
};

struct LieBasis {
  /// Orthonormal under real_inner; generator-first order.
  std::vector<Matrix> elements;
  StructureConstants structure;
  /// Largest norm of a bracket component left outside the span.
  double residual = 0.0;

  std::size_t dimension() const noexcept { return elements.size(); }
};

enum class ClosureOutcome { kFinite, kCapExceeded };

struct ClosureReport {
  ClosureOutcome outcome = ClosureOutcome::kFinite;
  /// Present for kFinite.
  std::optional<LieBasis> basis;
  /// Final dimension; for kCapExceeded the first dimension above the cap.
  std::size_t dimension = 0;
  /// Dimension after generator orthonormalization and after every sweep.
  std::vector<std::size_t> growth_trace;
  double tolerance = kDefaultClosureTol;
  std::size_t bracket_count = 0;

  bool finite() const noexcept { return outcome == ClosureOutcome::kFinite; }
};

/// Real Lie closure of a set of equally shaped complex matrices under the
/// commutator.
///
/// Generators are orthonormalized in input order; a component counts as new
/// when its norm after projection exceeds tol times the largest generator
/// norm (for generators) or tol (for brackets of unit basis elements). Each
/// sweep brackets every pair that involves an element added since the
/// previous sweep. A `cap` of 0 selects the real ambient dimension
/// 2 * rows * cols.
ClosureReport closure(std::span<const Matrix> generators, double tol = kDefaultClosureTol,
                      std::size_t cap = 0);

/// Throws InputError if some bracket of basis elements leaves the span by
/// more than `tol`.
StructureConstants structure_constants(std::span<const Matrix> basis, double tol = 1e-8);

/// Lie{K(G, Theta), e^{i theta_k} L_k}; requires complete homodyne detection.
ClosureReport operator_algebra(const ModelSpec& g, const MeasurementScheme& scheme,
                               double tol = kDefaultClosureTol, std::size_t cap = 0);

/// Lie{strat_generator, zeta_{e^{i theta} L_alpha}} over super-operator matrices.
ClosureReport estimation_algebra(const ModelSpec& g, const MeasurementScheme& scheme,
                                 double tol = kDefaultClosureTol, std::size_t cap = 0);

struct TheoremReport {
  std::size_t dim_ops = 0;
  std::size_t dim_superops = 0;
  /// dim of the operator algebra intersected with iR I (0 or 1).
  std::size_t kernel_dim = 0;
  bool ops_finite = false;
  bool superops_finite = false;
  /// Largest distance of a super-operator basis element from the zeta-image.
  double forward_inclusion_defect = 0.0;
  /// Largest distance of a normalized zeta-image element from the super-operator span.
  double backward_inclusion_defect = 0.0;
  bool pass = false;
};

/// Checks that the estimation algebra equals the zeta-image of the operator
/// algebra: dimension with kernel correction and two-sided inclusion.
TheoremReport verify_theorem_main(const ModelSpec& g, const MeasurementScheme& scheme,
                                  double tol = kDefaultClosureTol, std::size_t cap = 0);

/// Wei-Norman coordinates u(t) with prod_i exp(u_i X_i) equal to the
/// time-ordered propagator of dPhi/dt = (sum_i g_i(t) X_i) Phi.
///
/// `coefficients[n]` holds g on [n dt, (n+1) dt); the result has one more
/// entry than the path and starts at u = 0. Integrates M(u) du/dt = g with
/// classical RK4. Throws ChartBreakdown when cond(M(u)) exceeds
/// `max_condition`.
std::vector<Eigen::VectorXd> wei_norman(const LieBasis& basis,
                                        std::span<const Eigen::VectorXd> coefficients, double dt,
                                        double max_condition = 1e12);

/// prod_i exp(u_i X_i), ordered left to right.
Matrix wei_norman_product(const LieBasis& basis, const Eigen::VectorXd& u);

/// Column j holds the coordinates of Ad_{e^{u_1 X_1}} ... Ad_{e^{u_{j-1} X_{j-1}}} X_j.
Eigen::MatrixXd wei_norman_matrix(const LieBasis& basis, const Eigen::VectorXd& u);

}  // namespace estalg
