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

#include "estalg/lie_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "estalg/error.hpp"

namespace estalg {

double real_inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

Matrix Subspace::residual(const Matrix& m) const {
  Matrix r = m;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : basis_) r -= real_inner(e, r) * e;
  }
  return r;
}

double Subspace::add(const Matrix& m, double threshold, bool* added) {
  Matrix r = residual(m);
  const double norm = r.norm();
  const bool grow = norm > threshold;
  if (grow) basis_.push_back(r / norm);
  if (added != nullptr) *added = grow;
  return norm;
}

Eigen::VectorXd Subspace::coordinates(const Matrix& m) const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) c(static_cast<Eigen::Index>(i)) = real_inner(basis_[i], m);
  return c;
}

namespace {

Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace

ClosureReport closure(std::span<const Matrix> generators, double tol, std::size_t cap) {
  if (generators.empty()) throw InputError("closure: no generators");
  if (!(tol > 0.0)) throw InputError("closure: tolerance must be positive");
  const Eigen::Index rows = generators[0].rows();
  const Eigen::Index cols = generators[0].cols();
  double scale = 0.0;
  for (const auto& g : generators) {
    if (g.rows() != rows || g.cols() != cols) throw InputError("closure: generator shape mismatch");
    if (!g.allFinite()) throw InputError("closure: non-finite generator");
    scale = std::max(scale, g.norm());
  }
  if (cap == 0) cap = static_cast<std::size_t>(2 * rows * cols);

  ClosureReport report;
  report.tolerance = tol;
  Subspace span;
  for (const auto& g : generators) span.add(g, tol * scale);
  report.growth_trace.push_back(span.dimension());

  auto cap_hit = [&] {
    report.outcome = ClosureOutcome::kCapExceeded;
    report.dimension = span.dimension();
    report.growth_trace.push_back(span.dimension());
    return report;
  };
  if (span.dimension() > cap) {
    report.outcome = ClosureOutcome::kCapExceeded;
    report.dimension = span.dimension();
    return report;
  }

  double residual = 0.0;
  std::size_t done = 0;  // all brackets among the first `done` elements are known
  for (;;) {
    const std::size_t n = span.dimension();
    for (std::size_t j = done; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const Matrix b = bracket(span.basis()[i], span.basis()[j]);
        ++report.bracket_count;
        bool added = false;
        const double r = span.add(b, tol, &added);
        if (!added) residual = std::max(residual, r);
        if (span.dimension() > cap) return cap_hit();
      }
    }
    done = n;
    report.growth_trace.push_back(span.dimension());
    if (span.dimension() == n) break;
  }

  LieBasis basis;
  basis.elements = span.basis();
  basis.residual = residual;
  basis.structure = structure_constants(basis.elements, std::max(tol, residual) * 10.0);
  report.dimension = basis.dimension();
  report.basis = std::move(basis);
  return report;
}

StructureConstants structure_constants(std::span<const Matrix> basis, double tol) {
  const std::size_t m = basis.size();
  StructureConstants c(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      Matrix b = bracket(basis[i], basis[j]);
      for (std::size_t k = 0; k < m; ++k) {
        c(i, j, k) = real_inner(basis[k], b);
      }
      for (std::size_t k = 0; k < m; ++k) b -= c(i, j, k) * basis[k];
      if (b.norm() > tol) {
        throw InputError("structure_constants: basis is not closed (bracket residual " +
                         std::to_string(b.norm()) + ")");
      }
    }
  }
  return c;
}

ClosureReport operator_algebra(const ModelSpec& g, const MeasurementScheme& scheme, double tol,
                               std::size_t cap) {
  scheme.check_against(g);
  if (!scheme.is_complete(g.channels())) {
    throw InputError("operator_algebra requires complete homodyne detection");
  }
  std::vector<Matrix> gens;
  gens.push_back(k_strat(g, scheme).matrix());
  // Generator order follows channel order, not scheme order.
  for (std::size_t k = 0; k < g.channels(); ++k) {
    for (std::size_t i = 0; i < scheme.size(); ++i) {
      if (static_cast<std::size_t>(scheme.observed()[i]) == k) {
        gens.push_back(measured_coupling(g, scheme, i).matrix());
      }
    }
  }
  return closure(gens, tol, cap);
}

ClosureReport estimation_algebra(const ModelSpec& g, const MeasurementScheme& scheme, double tol,
                                 std::size_t cap) {
  std::vector<Matrix> gens;
  gens.push_back(strat_generator(g, scheme).matrix());
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    gens.push_back(zeta(measured_coupling(g, scheme, i)).matrix());
  }
  return closure(gens, tol, cap);
}

TheoremReport verify_theorem_main(const ModelSpec& g, const MeasurementScheme& scheme, double tol,
                                  std::size_t cap) {
  const ClosureReport ops = operator_algebra(g, scheme, tol, cap);
  const ClosureReport sup = estimation_algebra(g, scheme, tol, cap);
  TheoremReport rep;
  rep.dim_ops = ops.dimension;
  rep.dim_superops = sup.dimension;
  rep.ops_finite = ops.finite();
  rep.superops_finite = sup.finite();
  if (!ops.finite() || !sup.finite()) return rep;

  const int d = g.dim();
  Subspace ops_span;
  for (const auto& e : ops.basis->elements) ops_span.add(e, 0.0);
  const Matrix i_identity = Complex(0.0, 1.0 / std::sqrt(static_cast<double>(d))) * Matrix::Identity(d, d);
  rep.kernel_dim = ops_span.residual(i_identity).norm() <= tol ? 1 : 0;

  Subspace image;
  std::vector<Matrix> images;
  for (const auto& e : ops.basis->elements) {
    images.push_back(zeta(Operator(e)).matrix());
    image.add(images.back(), tol);
  }
  Subspace sup_span;
  for (const auto& e : sup.basis->elements) sup_span.add(e, 0.0);

  for (const auto& e : sup.basis->elements) {
    rep.forward_inclusion_defect = std::max(rep.forward_inclusion_defect, image.residual(e).norm());
  }
  for (const auto& z : images) {
    const double n = z.norm();
    if (n <= tol) continue;
    rep.backward_inclusion_defect =
        std::max(rep.backward_inclusion_defect, sup_span.residual(z / n).norm());
  }
  rep.pass = rep.dim_superops + rep.kernel_dim == rep.dim_ops &&
             rep.forward_inclusion_defect <= tol && rep.backward_inclusion_defect <= tol;
  return rep;
}

Eigen::MatrixXd wei_norman_matrix(const LieBasis& basis, const Eigen::VectorXd& u) {
  const std::size_t m = basis.dimension();
  if (static_cast<std::size_t>(u.size()) != m) throw InputError("wei_norman: coordinate size mismatch");
  Eigen::MatrixXd out(m, m);
  // Accumulated group element g_j = e^{u_1 X_1} ... e^{u_{j-1} X_{j-1}}.
  const Eigen::Index n = basis.elements.front().rows();
  Matrix group = Matrix::Identity(n, n);
  Matrix group_inv = Matrix::Identity(n, n);
  for (std::size_t j = 0; j < m; ++j) {
    const Matrix adj = group * basis.elements[j] * group_inv;
    for (std::size_t k = 0; k < m; ++k) {
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = real_inner(basis.elements[k], adj);
    }
    const Matrix step = Complex(u(static_cast<Eigen::Index>(j))) * basis.elements[j];
    group = group * expm(step);
    group_inv = expm(Matrix(-step)) * group_inv;
  }
  return out;
}

Matrix wei_norman_product(const LieBasis& basis, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != basis.dimension()) {
    throw InputError("wei_norman: coordinate size mismatch");
  }
  const Eigen::Index n = basis.elements.front().rows();
  Matrix out = Matrix::Identity(n, n);
  for (std::size_t j = 0; j < basis.dimension(); ++j) {
    out = out * expm(Matrix(Complex(u(static_cast<Eigen::Index>(j))) * basis.elements[j]));
  }
  return out;
}

std::vector<Eigen::VectorXd> wei_norman(const LieBasis& basis,
                                        std::span<const Eigen::VectorXd> coefficients, double dt,
                                        double max_condition) {
  const std::size_t m = basis.dimension();
  if (m == 0) throw InputError("wei_norman: empty basis");
  if (!(dt > 0.0)) throw InputError("wei_norman: dt must be positive");
  for (const auto& g : coefficients) {
    if (static_cast<std::size_t>(g.size()) != m) {
      throw InputError("wei_norman: coefficient vector size does not match basis");
    }
  }

  auto rhs = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& g, double t) {
    const Eigen::MatrixXd mat = wei_norman_matrix(basis, u);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : INFINITY;
    if (!(cond <= max_condition)) throw ChartBreakdown(t, cond);
    return Eigen::VectorXd(svd.solve(g));
  };

  std::vector<Eigen::VectorXd> path;
  path.reserve(coefficients.size() + 1);
  path.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m)));
  for (std::size_t n = 0; n < coefficients.size(); ++n) {
    const Eigen::VectorXd& u = path.back();
    const Eigen::VectorXd& g = coefficients[n];
    const double t = static_cast<double>(n) * dt;
    const Eigen::VectorXd k1 = rhs(u, g, t);
    const Eigen::VectorXd k2 = rhs(u + 0.5 * dt * k1, g, t + 0.5 * dt);
    const Eigen::VectorXd k3 = rhs(u + 0.5 * dt * k2, g, t + 0.5 * dt);
    const Eigen::VectorXd k4 = rhs(u + dt * k3, g, t + dt);
    path.push_back(u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  }
  return path;
}

}  // namespace estalg
