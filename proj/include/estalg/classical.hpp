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
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "estalg/lie_engine.hpp"

namespace estalg::classical {

using Rational = mpq_class;
using MultiIndex = std::vector<int>;

/// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Rational, GradedLex>;

  explicit Polynomial(int n_vars = 1);
  static Polynomial constant(int n_vars, const Rational& c);
  static Polynomial variable(int n_vars, int i);
  static Polynomial monomial(int n_vars, MultiIndex powers, const Rational& c);

  int n_vars() const noexcept { return n_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;

  void add_term(const MultiIndex& powers, const Rational& c);
  Polynomial derivative(int i) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  friend Polynomial operator*(const Rational& s, const Polynomial& p);
  bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  std::string to_string() const;

 private:
  int n_;
  Terms terms_;
};

/// Differential operator sum c_{j,k} x^j d^k with the derivatives acting first.
///
/// Keys concatenate the monomial powers j and derivative orders k.
class PolyDiffOp {
 public:
  using Terms = std::map<MultiIndex, Rational, GradedLex>;

  explicit PolyDiffOp(int n_vars = 1);
  /// Multiplication by p.
  static PolyDiffOp multiplication(const Polynomial& p);
  /// d / dx_i.
  static PolyDiffOp partial(int n_vars, int i);

  int n_vars() const noexcept { return n_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Largest |j| + |k| over the terms; -1 for zero.
  int total_degree() const;
  Rational coefficient(const MultiIndex& powers, const MultiIndex& orders) const;

  void add_term(const MultiIndex& powers, const MultiIndex& orders, const Rational& c);
  void add_key(const MultiIndex& key, const Rational& c);

  PolyDiffOp operator+(const PolyDiffOp& o) const;
  PolyDiffOp operator-(const PolyDiffOp& o) const;
  PolyDiffOp operator-() const;
  friend PolyDiffOp operator*(const Rational& s, const PolyDiffOp& p);
  bool operator==(const PolyDiffOp& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  std::string to_string() const;

 private:
  int n_;
  Terms terms_;
};

/// P o Q, expanding d^k (x^j .) with the Leibniz rule.
PolyDiffOp diffop_compose(const PolyDiffOp& p, const PolyDiffOp& q);
/// PQ - QP.
PolyDiffOp diffop_bracket(const PolyDiffOp& p, const PolyDiffOp& q);
/// Formal L2 adjoint: (x^j d^k)^* = (-1)^{|k|} d^k o x^j.
PolyDiffOp formal_adjoint(const PolyDiffOp& p);

/// dX = v(X) dt + gamma0 dW,  dY = h(X) dt + dZ.
class ClassicalModel {
 public:
  ClassicalModel(int n_vars, std::vector<Polynomial> drift, std::vector<Polynomial> observation,
                 Rational gamma0);

  int n_vars() const noexcept { return n_; }
  const std::vector<Polynomial>& drift() const noexcept { return v_; }
  const std::vector<Polynomial>& observation() const noexcept { return h_; }
  const Rational& gamma0() const noexcept { return gamma0_; }

 private:
  int n_;
  std::vector<Polynomial> v_;
  std::vector<Polynomial> h_;
  Rational gamma0_;
};

/// 1/2 gamma0^2 Laplacian - div(v .) - 1/2 |h|^2.
PolyDiffOp dmz_generator(const ClassicalModel& model);

/// F_ij = dv_i/dx_j - dv_j/dx_i.
std::vector<std::vector<Polynomial>> gauge_field(const ClassicalModel& model);

/// 1/2 [|h|^2 + div v + gamma0^-2 |v|^2].
Polynomial potential_phi(const ClassicalModel& model);

/// D_i = d_i - gamma0^-2 v_i.
PolyDiffOp gauge_derivative(const ClassicalModel& model, int i);

/// 1/2 gamma0^2 sum_i D_i o D_i - Phi; equals dmz_generator.
PolyDiffOp completed_square(const ClassicalModel& model);

bool is_exact(const ClassicalModel& model);

struct BenesVerdict {
  bool is_benes = false;
  /// One entry per failed clause.
  std::vector<std::string> reasons;
};

BenesVerdict benes_class(const ClassicalModel& model);

inline constexpr int kDegreeGuard = 60;

struct ClassicalClosureReport {
  ClosureOutcome outcome = ClosureOutcome::kFinite;
  /// Basis in generator-first order, each element reduced modulo the earlier ones.
  std::vector<PolyDiffOp> basis;
  std::size_t dimension = 0;
  std::vector<std::size_t> growth_trace;
  std::size_t bracket_count = 0;

  bool finite() const noexcept { return outcome == ClosureOutcome::kFinite; }
};

/// Exact Lie closure of {dmz_generator, h_1, ..., h_m} over the rationals.
/// Throws InputError for cap < 2 and DegreeGuardError when an intermediate
/// exceeds `degree_limit`.
ClassicalClosureReport classical_closure(const ClassicalModel& model, std::size_t cap,
                                         int degree_limit = kDegreeGuard);

}  // namespace estalg::classical
