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
#include <cstdint>
#include <string>
#include <vector>

#include "estalg/operators.hpp"
#include "estalg/superops.hpp"

namespace estalg {

// Relative defects of the zeta-calculus identities. Each is a Frobenius
// norm of (lhs - rhs) divided by the natural scale of the inputs.

/// ||[zeta_A, zeta_B] + zeta_[A,B]|| / (1 + ||A|| ||B||)^2.
double homomorphism_defect(const Operator& a, const Operator& b);
/// ||D_{zeta_A}(X, Y) + X (A + A*) Y|| / (1 + ||A|| ||X|| ||Y||).
double dissipation_defect(const Operator& a, const Operator& x, const Operator& y);
/// ||adjoint(zeta_A) - zeta_{A*}|| / (1 + ||zeta_A||).
double adjoint_defect(const Operator& a);
/// ||zeta_A o zeta_A (X) - (2 A* X A + X A^2 + A*^2 X)|| / (1 + ||A||^2 ||X||).
double composition_defect(const Operator& a, const Operator& x);
/// ||zeta_A(X*) - zeta_A(X)*|| / (1 + ||A|| ||X||).
double star_map_defect(const Operator& a, const Operator& x);
/// Kernel characterization: ||zeta_A||^2 = 2d ||A_0||^2 + 4 (Re tr A)^2 with
/// A_0 the traceless part, so zeta_A = 0 iff A is in iR I. Relative defect of
/// that equality, combined with ||zeta_{icI}|| / (1 + |c|) for the supplied c.
double kernel_defect(const Operator& a, double c);
/// Largest pairwise difference of the three Lindblad forms over (1 + ||L_G||).
double lindblad_forms_defect(const ModelSpec& g);
/// ||strat_generator - zeta_{k_strat} - l_unobs|| / (1 + ||strat_generator||).
double strat_split_defect(const ModelSpec& g, const MeasurementScheme& scheme,
                          KForm form = KForm::kDerived);

struct IdentityResult {
  std::string name;
  std::size_t cases = 0;
  double max_defect = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct IdentitySuiteOptions {
  std::vector<int> dims{2, 3, 4};
  std::size_t seeds = 10;
  std::uint64_t seed = 0;
  KForm k_form = KForm::kDerived;
  double tol = 1e-12;
};

/// Runs every identity over seeded random models for each dimension and seed.
std::vector<IdentityResult> run_identity_suite(const IdentitySuiteOptions& options);

}  // namespace estalg
