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
#include <random>

#include "estalg/operators.hpp"
#include "estalg/superops.hpp"

namespace estalg {

using Rng = std::mt19937_64;

/// Rng seeded portably from a 64-bit seed.
Rng make_rng(std::uint64_t seed);

/// Entries with independent standard complex Gaussian real and imaginary parts
/// of variance 1/2, times `scale`.
Operator random_operator(Rng& rng, int dim, double scale = 1.0);
Operator random_hermitian(Rng& rng, int dim, double scale = 1.0);
/// Random couplings and Hamiltonian, entries scaled by 1/sqrt(dim).
ModelSpec random_model(Rng& rng, int dim, std::size_t channels);
/// Observes `observed` randomly chosen channels (in increasing order) with
/// phases uniform in [0, 2 pi).
MeasurementScheme random_scheme(Rng& rng, std::size_t channels, std::size_t observed);
MeasurementScheme random_complete_scheme(Rng& rng, std::size_t channels);

}  // namespace estalg
