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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "estalg/error.hpp"
#include "estalg/lie_engine.hpp"
#include "estalg/random_models.hpp"
#include "support.hpp"

using namespace estalg;

namespace {

const Complex kI(0.0, 1.0);

Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// Structure constants must reproduce every bracket of the basis.
double structure_residual(const LieBasis& basis) {
  const auto& e = basis.elements;
  double worst = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      Matrix sum = Matrix::Zero(e[0].rows(), e[0].cols());
      for (std::size_t k = 0; k < e.size(); ++k) sum += basis.structure(i, j, k) * e[k];
      worst = std::max(worst, (bracket(e[i], e[j]) - sum).norm());
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("subspace projection") {
  std::mt19937_64 rng(20);
  Subspace s;
  const Matrix a = testing::gaussian(rng, 2);
  const Matrix b = testing::gaussian(rng, 2);
  bool added = false;
  s.add(a, 1e-12, &added);
  CHECK(added);
  s.add(kI * a, 1e-12, &added);
  CHECK(added);  // real span: iA is independent of A
  s.add(2.0 * a - 3.0 * kI * a, 1e-12, &added);
  CHECK_FALSE(added);
  CHECK(s.dimension() == 2);
  const Matrix r = s.residual(b);
  for (const auto& e : s.basis()) CHECK(std::abs(real_inner(e, r)) < 1e-14);
  const Eigen::VectorXd c = s.coordinates(2.0 * a - 3.0 * kI * a);
  Matrix back = c(0) * s.basis()[0] + c(1) * s.basis()[1];
  CHECK((back - (2.0 * a - 3.0 * kI * a)).norm() < 1e-13);
}

TEST_CASE("su(2) closure") {
  const std::vector<Matrix> gens{kI * pauli_x().matrix(), kI * pauli_y().matrix()};
  const ClosureReport r = closure(gens);
  REQUIRE(r.finite());
  CHECK(r.dimension == 3);
  CHECK(r.growth_trace.front() == 2);
  CHECK(r.growth_trace.back() == 3);
  CHECK(structure_residual(*r.basis) < 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        CHECK(r.basis->structure(i, j, k) == doctest::Approx(-r.basis->structure(j, i, k)));
}

TEST_CASE("abelian generators close immediately") {
  const std::vector<Matrix> gens{pauli_z().matrix(), kI * pauli_z().matrix(),
                                 Matrix(Matrix::Identity(2, 2))};
  const ClosureReport r = closure(gens);
  CHECK(r.dimension == 3);
  CHECK(r.bracket_count == 3);
}

TEST_CASE("generic qutrit generators span gl(3, C)") {
  std::mt19937_64 rng(21);
  const std::vector<Matrix> gens{testing::gaussian(rng, 3), testing::gaussian(rng, 3)};
  const ClosureReport full = closure(gens);
  REQUIRE(full.finite());
  CHECK(full.dimension == 18);
  CHECK(structure_residual(*full.basis) < 1e-9);

  const ClosureReport capped = closure(gens, kDefaultClosureTol, 5);
  CHECK(capped.outcome == ClosureOutcome::kCapExceeded);
  CHECK_FALSE(capped.basis.has_value());
  CHECK(capped.dimension > 5);
  for (std::size_t i = 1; i < capped.growth_trace.size(); ++i) {
    CHECK(capped.growth_trace[i] >= capped.growth_trace[i - 1]);
  }
}

TEST_CASE("closure dimension is scale invariant") {
  std::mt19937_64 rng(22);
  const Matrix a = testing::gaussian(rng, 2);
  const Matrix h = testing::hermitian(rng, 2);
  const std::size_t base = closure(std::vector<Matrix>{a, kI * h}).dimension;
  for (double s : {1e-6, 1e-3, 1e3, 1e6}) {
    CHECK(closure(std::vector<Matrix>{s * a, kI * h}).dimension == base);
    CHECK(closure(std::vector<Matrix>{s * a, s * kI * h}).dimension == base);
  }
}

TEST_CASE("structure constants reject an open basis") {
  const std::vector<Matrix> open{kI * pauli_x().matrix(), kI * pauli_y().matrix()};
  CHECK_THROWS_AS(structure_constants(open), InputError);
}

TEST_CASE("qubit decay algebras") {
  const ModelSpec g({sigma_minus()}, Operator::zero(2));
  const auto scheme = MeasurementScheme::complete(1);
  // Hand computation: K = -1/2 (s+ s-) since s-^2 = 0, and [K, s-] = s-/2.
  const Matrix k = k_strat(g, scheme).matrix();
  CHECK((k + 0.5 * sigma_plus().matrix() * sigma_minus().matrix()).norm() < 1e-15);
  CHECK((bracket(k, sigma_minus().matrix()) - 0.5 * sigma_minus().matrix()).norm() < 1e-15);

  const ClosureReport ops = operator_algebra(g, scheme);
  const ClosureReport sup = estimation_algebra(g, scheme);
  CHECK(ops.dimension == 2);
  CHECK(sup.dimension == 2);
  const TheoremReport t = verify_theorem_main(g, scheme, 1e-8);
  CHECK(t.pass);
  CHECK(t.kernel_dim == 0);
}

TEST_CASE("truncated oscillator operator algebra is {K, a, ia}") {
  for (int n : {3, 5}) {
    const ModelSpec g({annihilation(n)}, dagger(annihilation(n)) * annihilation(n));
    const auto scheme = MeasurementScheme::complete(1);
    const ClosureReport ops = operator_algebra(g, scheme);
    CHECK(ops.dimension == 3);
    CHECK(verify_theorem_main(g, scheme, 1e-8).pass);
  }
}

TEST_CASE("operator algebra requires complete detection") {
  const ModelSpec g({sigma_minus(), pauli_z()}, Operator::zero(2));
  CHECK_THROWS_AS(operator_algebra(g, MeasurementScheme({0}, {0.0})), InputError);
  CHECK_NOTHROW(estimation_algebra(g, MeasurementScheme({0}, {0.0})));
}

TEST_CASE("theorem main on random complete-homodyne models") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Rng rng = make_rng(seed);
    const int d = 2 + static_cast<int>(seed % 2);
    const ModelSpec g = random_model(rng, d, 1 + seed % 2);
    const TheoremReport t = verify_theorem_main(g, random_complete_scheme(rng, g.channels()), 1e-8);
    CHECK(t.pass);
    CHECK(t.dim_superops + t.kernel_dim == t.dim_ops);
  }
}

TEST_CASE("scalar shifts put iR I into the kernel") {
  const Matrix shift = 0.5 * Matrix::Identity(2, 2);
  const ModelSpec g({Operator(sigma_minus().matrix() + shift)}, Operator(pauli_x().matrix() + shift));
  const TheoremReport t = verify_theorem_main(g, MeasurementScheme::complete(1), 1e-8);
  CHECK(t.pass);
  CHECK(t.kernel_dim == 1);
  CHECK(t.dim_ops == t.dim_superops + 1);
}

TEST_CASE("wei-norman reproduces a time-ordered product") {
  const ModelSpec g({sigma_minus()}, Operator::zero(2));
  const ClosureReport ops = operator_algebra(g, MeasurementScheme::complete(1));
  const LieBasis& basis = *ops.basis;
  const double dt = 1e-3;
  std::vector<Eigen::VectorXd> path;
  Matrix direct = Matrix::Identity(2, 2);
  for (int n = 0; n < 500; ++n) {
    const double t = n * dt;
    Eigen::VectorXd c(2);
    c << std::cos(3.0 * t), 0.5 + std::sin(5.0 * t);
    path.push_back(c);
    direct = expm(Matrix(dt * (c(0) * basis.elements[0] + c(1) * basis.elements[1]))) * direct;
  }
  const auto u = wei_norman(basis, path, dt);
  CHECK(u.size() == path.size() + 1);
  CHECK((wei_norman_product(basis, u.back()) - direct).norm() < 1e-10);
  CHECK(wei_norman_matrix(basis, Eigen::VectorXd::Zero(2)).isIdentity(1e-14));
}

TEST_CASE("wei-norman chart breakdown") {
  // [X1, X2] = X2 with X1 = -E00, X2 = E10, so M(u) has det e^{-u1}
  // and a large negative drive on X1 makes the chart singular.
  LieBasis basis;
  basis.elements = {-matrix_unit(2, 0, 0).matrix(), matrix_unit(2, 1, 0).matrix()};
  std::vector<Eigen::VectorXd> path(1000, Eigen::VectorXd::Zero(2));
  for (auto& c : path) c << -100.0, 1.0;
  CHECK_THROWS_AS(wei_norman(basis, path, 1e-3), ChartBreakdown);
}

TEST_CASE("small closure cases") {
  CHECK(closure(std::vector<Matrix>{pauli_x().matrix()}).dimension == 1);
  // Over the reals the bracket of sigma_x and sigma_y brings in i sigma_z.
  const ClosureReport r = closure(std::vector<Matrix>{pauli_x().matrix(), pauli_y().matrix()});
  REQUIRE(r.finite());
  CHECK(r.dimension == 3);
  Subspace s;
  for (const auto& e : r.basis->elements) s.add(e, 0.0);
  CHECK(s.residual(kI * pauli_z().matrix()).norm() < 1e-12);
  CHECK(s.residual(pauli_z().matrix()).norm() > 0.5);

  const ClosureReport z = closure(std::vector<Matrix>{zeta(pauli_x()).matrix(), zeta(pauli_y()).matrix()});
  REQUIRE(z.finite());
  CHECK(z.dimension == 3);
  Subspace images;
  for (const Operator& o : {pauli_x(), pauli_y(), Operator(Matrix(kI * pauli_z().matrix()))}) {
    images.add(zeta(o).matrix(), 0.0);
  }
  for (const auto& e : z.basis->elements) CHECK(images.residual(e).norm() < 1e-12);
}

TEST_CASE("structure constants of abelian and su(2) bases") {
  const std::vector<Matrix> abelian{pauli_z().matrix(), Matrix(Matrix::Identity(2, 2))};
  const StructureConstants c0 = structure_constants(abelian);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) CHECK(c0(i, j, k) == 0.0);

  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<Matrix> su2{kI * r * pauli_x().matrix(), kI * r * pauli_y().matrix(),
                                kI * r * pauli_z().matrix()};
  const StructureConstants c = structure_constants(su2);
  // [i s_a, i s_b] / 2 = -eps_abc i s_c, so c(a, b, c) = -sqrt(2) eps_abc.
  auto eps = [](int a, int b, int cc) { return double((a - b) * (b - cc) * (cc - a)) / 2.0; };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) CHECK(c(a, b, k) == doctest::Approx(-std::sqrt(2.0) * eps(a, b, k)));
}

TEST_CASE("scalar coupling gives at most two dimensions") {
  const ModelSpec g({Operator(Matrix(Complex(0.7, 0.2) * Matrix::Identity(3, 3)))}, Operator::zero(3));
  CHECK(operator_algebra(g, MeasurementScheme::complete(1)).dimension <= 2);
}

TEST_CASE("oscillator algebra is stable under truncation") {
  std::size_t first = 0;
  for (int n : {10, 16}) {
    const ModelSpec g({annihilation(n)}, dagger(annihilation(n)) * annihilation(n));
    const auto r = operator_algebra(g, MeasurementScheme::complete(1));
    REQUIRE(r.finite());
    if (first == 0) first = r.dimension;
    CHECK(r.dimension == first);
  }
}

TEST_CASE("estimation algebra without and with partial observation") {
  std::mt19937_64 rng(23);
  const ModelSpec g({Operator(testing::gaussian(rng, 2)), Operator(testing::gaussian(rng, 2))},
                    Operator(testing::hermitian(rng, 2)));
  CHECK(estimation_algebra(g, MeasurementScheme({}, {})).dimension == 1);
  const ClosureReport partial = estimation_algebra(g, MeasurementScheme({0}, {0.0}));
  // zeta images span at most dim gl(2, C) - 1 = 7 real dimensions.
  CHECK(partial.dimension > 7);
}

TEST_CASE("wei-norman trivial cases") {
  LieBasis one;
  one.elements = {kI * pauli_z().matrix() / std::sqrt(2.0)};
  std::vector<Eigen::VectorXd> path(100, Eigen::VectorXd::Constant(1, 0.7));
  const auto u = wei_norman(one, path, 1e-2);
  CHECK(u.back()(0) == doctest::Approx(0.7).epsilon(1e-12));

  LieBasis diag;
  diag.elements = {matrix_unit(2, 0, 0).matrix(), matrix_unit(2, 1, 1).matrix()};
  std::vector<Eigen::VectorXd> g;
  double i0 = 0.0;
  double i1 = 0.0;
  for (int n = 0; n < 200; ++n) {
    Eigen::VectorXd c(2);
    c << std::sin(0.05 * n), 1.0 + 0.01 * n;
    i0 += c(0) * 1e-2;
    i1 += c(1) * 1e-2;
    g.push_back(c);
  }
  const auto v = wei_norman(diag, g, 1e-2);
  CHECK(v.back()(0) == doctest::Approx(i0).epsilon(1e-12));
  CHECK(v.back()(1) == doctest::Approx(i1).epsilon(1e-12));
}
