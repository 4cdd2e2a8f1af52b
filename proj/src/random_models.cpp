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

#include "estalg/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace estalg {

Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

Operator random_operator(Rng& rng, int dim, double scale) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(dim, dim);
  // Column-major fill, real part before imaginary part.
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = scale * Complex(re, im);
    }
  return Operator(std::move(m));
}

Operator random_hermitian(Rng& rng, int dim, double scale) {
  const Matrix a = random_operator(rng, dim, scale).matrix();
  return Operator(0.5 * (a + a.adjoint()));
}

ModelSpec random_model(Rng& rng, int dim, std::size_t channels) {
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<Operator> l;
  for (std::size_t k = 0; k < channels; ++k) l.push_back(random_operator(rng, dim, s));
  Operator h = random_hermitian(rng, dim, s);
  return ModelSpec(std::move(l), std::move(h));
}

MeasurementScheme random_scheme(Rng& rng, std::size_t channels, std::size_t observed) {
  std::vector<int> all(channels);
  std::iota(all.begin(), all.end(), 0);
  // Partial Fisher-Yates with explicit draws for portability.
  for (std::size_t i = 0; i < observed && i < channels; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, channels - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  std::vector<int> chosen(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(observed, channels)));
  std::sort(chosen.begin(), chosen.end());
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> theta;
  for (std::size_t i = 0; i < chosen.size(); ++i) theta.push_back(phase(rng));
  return MeasurementScheme(std::move(chosen), std::move(theta));
}

MeasurementScheme random_complete_scheme(Rng& rng, std::size_t channels) {
  return random_scheme(rng, channels, channels);
}

}  // namespace estalg
