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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace testing {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Test-local generator, kept apart from the library's model sampler.
inline Matrix gaussian(std::mt19937_64& rng, int rows, int cols = -1) {
  if (cols < 0) cols = rows;
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline Matrix hermitian(std::mt19937_64& rng, int d) {
  const Matrix a = gaussian(rng, d);
  return 0.5 * (a + a.adjoint());
}

inline Matrix density(std::mt19937_64& rng, int d) {
  const Matrix a = gaussian(rng, d);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace testing
