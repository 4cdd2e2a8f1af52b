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
#include "estalg/qfilter.hpp"
#include "estalg/random_models.hpp"
#include "support.hpp"

using namespace estalg;

namespace {

const Complex kI(0.0, 1.0);

Matrix heisenberg(const std::vector<Matrix>& ls, const Matrix& h, const Matrix& x) {
  Matrix out = kI * (h * x - x * h);
  for (const auto& l : ls) {
    const Matrix ll = l.adjoint() * l;
    out += l.adjoint() * x * l - 0.5 * (ll * x + x * ll);
  }
  return out;
}

ModelSpec qubit_decay() { return ModelSpec({sigma_minus()}, Operator::zero(2)); }

Matrix plus_state() { return Matrix::Constant(2, 2, Complex(0.5, 0.0)); }

}  // namespace

TEST_CASE("euler step matches the dual equation on matrix units") {
  std::mt19937_64 rng(30);
  const Matrix l1 = testing::gaussian(rng, 2);
  const Matrix l2 = testing::gaussian(rng, 2);
  const Matrix h = testing::hermitian(rng, 2);
  const ModelSpec g({Operator(l1), Operator(l2)}, Operator(h));
  const double th1 = 0.4;
  const double th2 = -1.1;
  const MeasurementScheme scheme({0, 1}, {th1, th2});
  const FilterModel model(g, scheme);
  const Matrix rho = testing::density(rng, 2);
  const std::vector<double> dy{0.031, -0.017};
  const double dt = 1e-3;
  const FilterState next = zakai_step_ito(FilterState::from_density(rho), model, dy, dt);
  const Matrix m1 = std::exp(kI * th1) * l1;
  const Matrix m2 = std::exp(kI * th2) * l2;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const Matrix x = matrix_unit(2, r, c).matrix();
      auto sigma = [&](const Matrix& y) { return (rho * y).trace(); };
      const Complex expected = sigma(x) + sigma(heisenberg({l1, l2}, h, x)) * dt +
                               sigma(x * m1 + m1.adjoint() * x) * dy[0] +
                               sigma(x * m2 + m2.adjoint() * x) * dy[1];
      CHECK(std::abs((next.density * x).trace() - expected) < 1e-14);
    }
  }
}

TEST_CASE("sigma(I) carries no drift under Ito") {
  std::mt19937_64 rng(31);
  const ModelSpec g({Operator(testing::gaussian(rng, 3))}, Operator(testing::hermitian(rng, 3)));
  const FilterModel model(g, MeasurementScheme::complete(1));
  FilterState s = FilterState::from_density(testing::density(rng, 3));
  const std::vector<double> dy{0.0};
  for (int n = 0; n < 100; ++n) s = zakai_step_ito(s, model, dy, 1e-2);
  CHECK(std::abs(s.density.trace() - 1.0) < 1e-13);
}

TEST_CASE("kraus and milstein steps differ at higher order only") {
  std::mt19937_64 rng(32);
  const ModelSpec g({Operator(testing::gaussian(rng, 2)), Operator(testing::gaussian(rng, 2))},
                    Operator(testing::hermitian(rng, 2)));
  const FilterModel model(g, MeasurementScheme({1}, {0.3}));
  const Matrix rho = testing::density(rng, 2);
  double prev = 0.0;
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    const std::vector<double> dy{std::sqrt(dt)};
    const auto a = zakai_step_ito(FilterState::from_density(rho), model, dy, dt, ItoScheme::kMilstein);
    const auto b = zakai_step_ito(FilterState::from_density(rho), model, dy, dt, ItoScheme::kKraus);
    const double diff = (a.density - b.density).norm();
    if (prev > 0.0) CHECK(diff < prev * std::pow(10.0, -1.4));
    prev = diff;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(b.density);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("normalization") {
  std::mt19937_64 rng(33);
  const Matrix rho = testing::density(rng, 3);
  const Matrix x = testing::hermitian(rng, 3);
  const NormalizedFilter a(FilterState::from_density(rho));
  const NormalizedFilter b(FilterState::from_density(2.0 * rho));
  CHECK(a.pi(Matrix::Identity(3, 3)) == Complex(1.0, 0.0));
  CHECK(b.pi(Matrix::Identity(3, 3)) == Complex(1.0, 0.0));
  CHECK(std::abs(a.pi(x) - b.pi(x)) < 1e-14);
  CHECK(b.norm() == doctest::Approx(2.0));
  CHECK_THROWS_AS(NormalizedFilter(FilterState::from_density(Matrix::Zero(2, 2)), 17),
                  FilterDegeneracy);
  try {
    NormalizedFilter(FilterState::from_density(Matrix::Zero(2, 2)), 17);
  } catch (const FilterDegeneracy& e) {
    CHECK(e.step() == 17);
  }
}

TEST_CASE("positivity repair clips and keeps the trace") {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 1.0 + 1e-6;
  rho(1, 1) = -1e-6;
  PositivityStats stats;
  CHECK(repair_positivity(rho, stats));
  CHECK(stats.repairs == 1);
  CHECK(stats.min_eigenvalue_raw == doctest::Approx(-1e-6));
  CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
  CHECK(eig.eigenvalues().minCoeff() >= 0.0);
  Matrix fine = Matrix::Identity(2, 2) / 2.0;
  CHECK_FALSE(repair_positivity(fine, stats));
  CHECK(stats.repairs == 1);
}

TEST_CASE("records") {
  const ModelSpec g = qubit_decay();
  const auto scheme = MeasurementScheme::complete(1);
  const auto a = generate_record(g, scheme, plus_state(), 0.1, 1e-3, 5);
  const auto b = generate_record(g, scheme, plus_state(), 0.1, 1e-3, 5);
  const auto c = generate_record(g, scheme, plus_state(), 0.1, 1e-3, 6);
  CHECK(a.steps == 100);
  CHECK(a.dy == b.dy);
  CHECK(a.dw == b.dw);
  CHECK(a.dy != c.dy);
  const auto coarse = a.coarsen(4);
  CHECK(coarse.steps == 25);
  CHECK(coarse.dt == doctest::Approx(4e-3));
  CHECK(coarse.dy[0][1] == a.dy[0][4] + a.dy[0][5] + a.dy[0][6] + a.dy[0][7]);
  CHECK_THROWS_AS(a.coarsen(3), InputError);

  // A vanishing coupling carries no signal.
  const ModelSpec silent({Operator::zero(2)}, pauli_z());
  const auto s = generate_record(silent, scheme, plus_state(), 0.05, 1e-3, 1);
  CHECK(s.dy == s.dw);
}

TEST_CASE("record drift at t = 0") {
  // E[dY / dt] = tr(rho0 (L + L*)) = 1 for the |+> state under sigma_minus.
  const ModelSpec g = qubit_decay();
  const auto scheme = MeasurementScheme::complete(1);
  const double dt = 1e-2;
  const int n = 2000;
  double sum = 0.0;
  double sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto r = generate_record(g, scheme, plus_state(), dt, dt, trajectory_seed(99, k));
    const double v = r.dy[0][0] / dt;
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("filter pictures and calculi agree on a shared record") {
  const ModelSpec g = qubit_decay();
  const auto scheme = MeasurementScheme::complete(1);
  const FilterModel model(g, scheme);
  const auto rec = generate_record(g, scheme, plus_state(), 0.5, 1e-3, 3);
  const std::vector<NamedObservable> obs{{"z", pauli_z().matrix()}, {"I", Matrix::Identity(2, 2)}};
  FilterOptions density;
  FilterOptions pure;
  pure.picture = Picture::kPure;
  pure.ito_scheme = ItoScheme::kMilstein;
  const FilterTable a = run_filter(rec, model, plus_state(), obs, density);
  const FilterTable b = run_filter(rec, model, plus_state(), obs, pure);
  REQUIRE(a.t.size() == rec.steps + 1);
  double worst = 0.0;
  for (std::size_t n = 0; n < a.t.size(); ++n) {
    worst = std::max(worst, std::abs(a.pi[0][n] - b.pi[0][n]));
    CHECK(a.pi[1][n] == Complex(1.0, 0.0));
    CHECK(std::abs(a.pi[0][n].real()) <= 1.0);
  }
  CHECK(worst < 1e-10);
  CHECK(a.positivity.repairs == 0);

  FilterOptions strat;
  strat.form = Calculus::kStratonovich;
  const FilterTable s = run_filter(rec, model, plus_state(), obs, strat);
  const FilterTable sc = run_filter(rec.coarsen(2), model, plus_state(), obs, strat);
  const FilterTable ac = run_filter(rec.coarsen(2), model, plus_state(), obs, density);
  double fine = 0.0;
  double coarse = 0.0;
  for (std::size_t n = 0; n < sc.t.size(); ++n) {
    fine = std::max(fine, std::abs(a.pi[0][2 * n] - s.pi[0][2 * n]));
    coarse = std::max(coarse, std::abs(ac.pi[0][n] - sc.pi[0][n]));
  }
  CHECK(fine < coarse);
  CHECK(fine < 1e-3);
}

TEST_CASE("stratonovich drift under complete detection has no unobserved part") {
  std::mt19937_64 rng(34);
  const ModelSpec g({Operator(testing::gaussian(rng, 2))}, Operator(testing::hermitian(rng, 2)));
  const FilterModel complete(g, MeasurementScheme::complete(1));
  CHECK_FALSE(complete.has_unobserved_term());
  CHECK(complete.unobserved().empty());
  const FilterModel partial(g, MeasurementScheme({}, {}));
  CHECK(partial.has_unobserved_term());
  const std::vector<NamedObservable> obs{{"z", pauli_z().matrix()}};
  TrajectoryRecord rec;
  rec.dt = 1e-2;
  rec.steps = 1;
  FilterOptions o;
  o.picture = Picture::kPure;
  o.form = Calculus::kStratonovich;
  CHECK_THROWS_AS(run_filter(rec, partial, Matrix(Matrix::Identity(2, 2) / 2.0), obs, o), InputError);
}

TEST_CASE("zero horizon returns the initial expectations") {
  const FilterModel model(qubit_decay(), MeasurementScheme::complete(1));
  TrajectoryRecord rec;
  rec.dt = 1e-3;
  rec.dy.assign(1, {});
  rec.dw.assign(1, {});
  const std::vector<NamedObservable> obs{{"x", pauli_x().matrix()}};
  const FilterTable t = run_filter(rec, model, plus_state(), obs);
  REQUIRE(t.t.size() == 1);
  CHECK(t.pi[0][0] == Complex(1.0, 0.0));
}

TEST_CASE("unconditional expectation of qubit decay") {
  // <sigma_z>(t) = -1 + (z0 + 1) e^{-t}, <sigma_x>(t) = x0 e^{-t/2}.
  for (double t : {0.0, 0.3, 1.2}) {
    const Complex z = unconditional_expectation(qubit_decay(), plus_state(), pauli_z().matrix(), t);
    const Complex x = unconditional_expectation(qubit_decay(), plus_state(), pauli_x().matrix(), t);
    CHECK(z.real() == doctest::Approx(-1.0 + std::exp(-t)).epsilon(1e-12));
    CHECK(x.real() == doctest::Approx(std::exp(-0.5 * t)).epsilon(1e-12));
  }
}

TEST_CASE("ensemble statistics do not depend on the thread count") {
  const ModelSpec g = qubit_decay();
  const auto scheme = MeasurementScheme::complete(1);
  const std::vector<NamedObservable> obs{{"z", pauli_z().matrix()}};
  const auto a = run_ensemble(g, scheme, plus_state(), obs, 0.2, 1e-2, 4, 24, {}, 1);
  const auto b = run_ensemble(g, scheme, plus_state(), obs, 0.2, 1e-2, 4, 24, {}, 5);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.trajectories == 24);
}

TEST_CASE("input validation") {
  const FilterModel model(qubit_decay(), MeasurementScheme::complete(1));
  const auto rec = generate_record(qubit_decay(), MeasurementScheme::complete(1), plus_state(), 0.01,
                                   1e-3, 0);
  const std::vector<NamedObservable> wrong{{"big", Matrix::Identity(3, 3)}};
  CHECK_THROWS_AS(run_filter(rec, model, plus_state(), wrong), InputError);
  Matrix not_density = plus_state();
  not_density(0, 0) = 2.0;
  CHECK_THROWS_AS(run_filter(rec, model, not_density, {}), InputError);
  CHECK_THROWS_AS(generate_record(qubit_decay(), MeasurementScheme::complete(1), plus_state(), 1.0,
                                  -1e-3, 0),
                  InputError);
}

TEST_CASE("smooth measurement paths: Milstein-type Ito and Stratonovich agree") {
  // With dY = c dt the (dY^2 - dt) correction turns the Ito step into an
  // Euler step of the Stratonovich equation, so the gap closes with dt.
  const FilterModel model(qubit_decay(), MeasurementScheme::complete(1));
  const std::vector<NamedObservable> obs{{"z", pauli_z().matrix()}};
  double prev = 0.0;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    TrajectoryRecord rec;
    rec.dt = dt;
    rec.steps = static_cast<std::size_t>(std::llround(0.5 / dt));
    rec.dy.assign(1, std::vector<double>(rec.steps, 0.3 * dt));
    rec.dw = rec.dy;
    FilterOptions strat;
    strat.form = Calculus::kStratonovich;
    const auto a = run_filter(rec, model, plus_state(), obs);
    const auto b = run_filter(rec, model, plus_state(), obs, strat);
    const double gap = std::abs(a.pi[0].back() - b.pi[0].back());
    if (prev > 0.0) CHECK(gap < 0.7 * prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("stratonovich self-convergence under dt halving") {
  const ModelSpec g = ModelSpec({sigma_minus()}, Operator(Matrix(0.5 * pauli_x().matrix())));
  const auto scheme = MeasurementScheme::complete(1);
  const FilterModel model(g, scheme);
  const auto fine = generate_record(g, scheme, plus_state(), 1.0, 2.5e-4, 8);
  const std::vector<NamedObservable> obs{{"z", pauli_z().matrix()}};
  FilterOptions strat;
  strat.form = Calculus::kStratonovich;
  std::vector<double> end;
  for (std::size_t f : {4, 2, 1}) end.push_back(run_filter(fine.coarsen(f), model, plus_state(), obs, strat).sigma_i.back());
  const double d1 = std::abs(end[0] - end[1]);
  const double d2 = std::abs(end[1] - end[2]);
  const double order = std::log2(d1 / d2);
  CHECK(order > 0.4);
  CHECK(order < 1.6);
}
