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
#include <span>
#include <string>
#include <vector>

#include "estalg/operators.hpp"
#include "estalg/superops.hpp"

namespace estalg {

/// Homodyne measurement record on a uniform grid.
///
/// Step n covers [n dt, (n+1) dt); `dy[a][n]` and `dw[a][n]` are the
/// increments of observed channel `a` (scheme order) over that step.
struct TrajectoryRecord {
  double dt = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> dy;
  std::vector<std::vector<double>> dw;

  std::size_t channels() const noexcept { return dy.size(); }
  double horizon() const noexcept { return dt * static_cast<double>(steps); }
  double time(std::size_t n) const noexcept { return dt * static_cast<double>(n); }

  /// Sums increments over consecutive blocks of `factor` steps.
  TrajectoryRecord coarsen(std::size_t factor) const;
};

enum class Picture { kDensity, kPure };
enum class Calculus { kIto, kStratonovich };
enum class ItoScheme {
  kEulerMaruyama,
  kMilstein,
  /// Milstein step in factored form M rho M* + sum_unobserved L rho L* dt with
  /// M = I + K dt + sum L dY + 1/2 sum L_a L_b (dY_a dY_b - delta_ab dt).
  /// Agrees with kMilstein to O(dt^{3/2}) per step and is positive by construction.
  kKraus,
};

/// Unnormalized conditional state: a density matrix or a state vector.
struct FilterState {
  Picture picture = Picture::kDensity;
  Matrix density;
  Vector vector;

  static FilterState from_density(Matrix rho);
  static FilterState from_vector(Vector chi);
  int dim() const;
};

/// Everything the integrators need, precomputed from (G, scheme).
///
/// Super-operators are stored in the Schroedinger (predual) picture, acting
/// on vec(rho).
class FilterModel {
 public:
  FilterModel(const ModelSpec& g, const MeasurementScheme& scheme);

  int dim() const noexcept { return dim_; }
  std::size_t channels() const noexcept { return couplings_.size(); }
  bool complete() const noexcept { return complete_; }

  /// e^{i theta_alpha} L_alpha in scheme order.
  const std::vector<Matrix>& couplings() const noexcept { return couplings_; }
  /// Couplings of the channels the scheme does not observe.
  const std::vector<Matrix>& unobserved() const noexcept { return unobserved_; }
  const Matrix& k_ito() const noexcept { return k_ito_; }
  const Matrix& k_strat() const noexcept { return k_strat_; }

  /// adjoint(lindblad(G)).
  const Matrix& ito_drift() const noexcept { return ito_drift_; }
  /// adjoint(zeta_{K(G,Theta)}) + adjoint(l_unobs); the second term is absent
  /// (not just zero) under complete homodyne detection.
  const Matrix& strat_drift() const noexcept { return strat_drift_; }
  bool has_unobserved_term() const noexcept { return has_unobs_; }

  /// rho -> e^{i theta} L rho + rho e^{-i theta} L^dagger.
  Matrix diffusion(std::size_t channel, const Matrix& rho) const;
  Matrix ito_drift(const Matrix& rho) const;
  Matrix strat_drift(const Matrix& rho) const;

 private:
  int dim_;
  bool complete_;
  bool has_unobs_;
  std::vector<Matrix> couplings_;
  std::vector<Matrix> unobserved_;
  Matrix k_ito_;
  Matrix k_strat_;
  Matrix ito_drift_;
  Matrix strat_drift_;
};

/// Euler-Maruyama (or Milstein) step of the Ito Belavkin-Zakai equation in the
/// density picture.
FilterState zakai_step_ito(const FilterState& state, const FilterModel& model,
                           std::span<const double> dy, double dt,
                           ItoScheme scheme = ItoScheme::kEulerMaruyama);

/// Stochastic Heun step of the Stratonovich Belavkin-Zakai equation.
FilterState zakai_step_strat(const FilterState& state, const FilterModel& model,
                             std::span<const double> dy, double dt);

/// Step of the unnormalized state-vector equation. The Stratonovich form
/// (drift K(G, Theta), Heun) requires complete homodyne detection.
FilterState pure_step(const FilterState& state, const FilterModel& model,
                      std::span<const double> dy, double dt, Calculus form,
                      ItoScheme scheme = ItoScheme::kEulerMaruyama);

/// Normalized filter pi_t(X) = sigma_t(X) / sigma_t(I).
class NormalizedFilter {
 public:
  /// Throws FilterDegeneracy if sigma_t(I) < 1e-300.
  explicit NormalizedFilter(const FilterState& state, std::size_t step = 0);

  /// sigma_t(I).
  double norm() const noexcept { return norm_; }
  Complex sigma(const Matrix& x) const;
  Complex pi(const Matrix& x) const { return sigma(x) / norm_; }
  /// rho = rho_check / sigma_t(I) (or |chi><chi| / <chi|chi>).
  Matrix density() const;

 private:
  FilterState state_;
  double norm_;
};

inline NormalizedFilter normalize(const FilterState& state, std::size_t step = 0) {
  return NormalizedFilter(state, step);
}

struct PositivityStats {
  std::size_t repairs = 0;
  /// Most negative eigenvalue of the normalized state before repair.
  double min_eigenvalue_raw = 0.0;
  /// Most negative eigenvalue of a reported (post-repair) normalized state.
  double min_eigenvalue = 0.0;
};

/// Clips eigenvalues below -1e-10 tr(rho) and rescales to the original
/// trace. Returns true if the state was modified. Updates `stats`.
bool repair_positivity(Matrix& rho, PositivityStats& stats);

/// Throws InputError unless rho is a density matrix within 1e-10.
void check_density(const Matrix& rho, int dim);

/// Synthesizes a homodyne record from the normalized stochastic master
/// equation driven by Wiener innovations. Deterministic in `seed`.
TrajectoryRecord generate_record(const ModelSpec& g, const MeasurementScheme& scheme,
                                 const Matrix& rho0, double horizon, double dt,
                                 std::uint64_t seed);

struct NamedObservable {
  std::string name;
  Matrix matrix;
};

struct FilterOptions {
  Picture picture = Picture::kDensity;
  Calculus form = Calculus::kIto;
  ItoScheme ito_scheme = ItoScheme::kKraus;
};

struct FilterTable {
  std::vector<double> t;
  std::vector<double> sigma_i;
  /// pi[j][n] = pi_{t_n}(X_j).
  std::vector<std::vector<Complex>> pi;
  PositivityStats positivity;
};

/// Integrates the filter along a record, emitting pi_t(X_j) and sigma_t(I) at
/// every grid point t_0 .. t_steps.
FilterTable run_filter(const TrajectoryRecord& record, const FilterModel& model,
                       const Matrix& rho0, std::span<const NamedObservable> observables,
                       const FilterOptions& options = {});

/// tr(e^{t L*} rho0 X) from the unconditional Lindblad evolution.
Complex unconditional_expectation(const ModelSpec& g, const Matrix& rho0, const Matrix& x,
                                  double t);

struct EnsembleSummary {
  std::vector<double> t;
  /// mean[j][n] and standard error of Re pi_{t_n}(X_j) across trajectories.
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> std_error;
  std::size_t trajectories = 0;
};

/// Seed of trajectory `index` in an ensemble rooted at `seed`.
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index);

/// Generates `trajectories` records with independent seeds, filters each, and
/// aggregates Re pi_t(X_j) in trajectory order. `threads` = 0 uses the
/// hardware concurrency.
EnsembleSummary run_ensemble(const ModelSpec& g, const MeasurementScheme& scheme,
                             const Matrix& rho0, std::span<const NamedObservable> observables,
                             double horizon, double dt, std::uint64_t seed,
                             std::size_t trajectories, const FilterOptions& options = {},
                             unsigned threads = 1);

}  // namespace estalg
