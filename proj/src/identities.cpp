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

#include "estalg/identities.hpp"

#include <algorithm>
#include <cmath>

#include "estalg/error.hpp"
#include "estalg/qfilter.hpp"
#include "estalg/random_models.hpp"

namespace estalg {

double homomorphism_defect(const Operator& a, const Operator& b) {
  const SuperOperator lhs = sbracket(zeta(a), zeta(b)) + zeta(commutator(a, b));
  const double s = 1.0 + a.norm() * b.norm();
  return lhs.norm() / (s * s);
}

double dissipation_defect(const Operator& a, const Operator& x, const Operator& y) {
  const Matrix expected = -x.matrix() * (a.matrix() + a.matrix().adjoint()) * y.matrix();
  const Matrix diff = dissipation(zeta(a), x, y).matrix() - expected;
  return diff.norm() / (1.0 + a.norm() * x.norm() * y.norm());
}

double adjoint_defect(const Operator& a) {
  const SuperOperator z = zeta(a);
  return (adjoint(z) - zeta(dagger(a))).norm() / (1.0 + z.norm());
}

double composition_defect(const Operator& a, const Operator& x) {
  const SuperOperator z = zeta(a);
  const Matrix& am = a.matrix();
  const Matrix& xm = x.matrix();
  const Matrix ad = am.adjoint();
  const Matrix expected = 2.0 * ad * xm * am + xm * am * am + ad * ad * xm;
  const Matrix diff = (z * z).apply(xm) - expected;
  return diff.norm() / (1.0 + a.norm() * a.norm() * x.norm());
}

double star_map_defect(const Operator& a, const Operator& x) {
  const SuperOperator z = zeta(a);
  const Matrix diff = z.apply(Matrix(x.matrix().adjoint())) - z.apply(x.matrix()).adjoint();
  return diff.norm() / (1.0 + a.norm() * x.norm());
}

double kernel_defect(const Operator& a, double c) {
  const int d = a.dim();
  const Complex tr = a.matrix().trace();
  const Matrix traceless = a.matrix() - (tr / static_cast<double>(d)) * Matrix::Identity(d, d);
  const double zn = zeta(a).norm();
  const double predicted = 2.0 * d * traceless.squaredNorm() + 4.0 * tr.real() * tr.real();
  const double formula = std::abs(zn * zn - predicted) / (1.0 + 2.0 * d * a.norm() * a.norm());
  const Operator scalar(Complex(0.0, c) * Matrix::Identity(d, d));
  const double kernel = zeta(scalar).norm() / (1.0 + std::abs(c));
  return std::max(formula, kernel);
}

double lindblad_forms_defect(const ModelSpec& g) {
  const SuperOperator direct = lindblad(g, LindbladForm::kDirect);
  const SuperOperator split = lindblad(g, LindbladForm::kZetaSplit);
  const SuperOperator squares = lindblad(g, LindbladForm::kZetaSquares);
  const double scale = 1.0 + direct.norm();
  return std::max({(direct - split).norm(), (direct - squares).norm(), (split - squares).norm()}) /
         scale;
}

double strat_split_defect(const ModelSpec& g, const MeasurementScheme& scheme, KForm form) {
  const SuperOperator s = strat_generator(g, scheme);
  const SuperOperator split = zeta(k_strat(g, scheme, form)) + l_unobs(g, scheme);
  return (s - split).norm() / (1.0 + s.norm());
}

std::vector<IdentityResult> run_identity_suite(const IdentitySuiteOptions& options) {
  if (options.seeds == 0) throw InputError("identity suite: seeds must be positive");
  std::vector<IdentityResult> results{
      {"homomorphism", 0, 0.0, options.tol, true},  {"dissipation", 0, 0.0, options.tol, true},
      {"adjoint", 0, 0.0, options.tol, true},       {"composition", 0, 0.0, options.tol, true},
      {"star_map", 0, 0.0, options.tol, true},      {"kernel", 0, 0.0, options.tol, true},
      {"lindblad_forms", 0, 0.0, options.tol, true}, {"strat_split", 0, 0.0, options.tol, true},
  };
  auto record = [&](std::size_t i, double defect) {
    auto& r = results[i];
    ++r.cases;
    r.max_defect = std::max(r.max_defect, defect);
    if (!(defect <= r.threshold)) r.pass = false;
  };

  for (int d : options.dims) {
    if (d < 1 || d > kMaxDim) throw InputError("identity suite: dimension out of range");
    for (std::size_t s = 0; s < options.seeds; ++s) {
      Rng rng = make_rng(trajectory_seed(options.seed, static_cast<std::uint64_t>(d) * 1000003u + s));
      const Operator a = random_operator(rng, d);
      const Operator b = random_operator(rng, d);
      const Operator x = random_operator(rng, d);
      const Operator y = random_operator(rng, d);
      record(0, homomorphism_defect(a, b));
      record(1, dissipation_defect(a, x, y));
      record(2, adjoint_defect(a));
      record(3, composition_defect(a, x));
      record(4, star_map_defect(a, x));
      std::uniform_real_distribution<double> cdist(-2.0, 2.0);
      record(5, kernel_defect(a, cdist(rng)));

      const std::size_t channels = 1 + s % 3;
      const ModelSpec g = random_model(rng, d, channels);
      record(6, lindblad_forms_defect(g));
      // Every observed-subset size from none to complete.
      for (std::size_t observed = 0; observed <= channels; ++observed) {
        record(7, strat_split_defect(g, random_scheme(rng, channels, observed), options.k_form));
      }
    }
  }
  return results;
}

}  // namespace estalg
