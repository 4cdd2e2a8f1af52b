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

#include "estalg/qfilter.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "estalg/error.hpp"

namespace estalg {

namespace {

constexpr double kDegeneracyFloor = 1e-300;
constexpr double kPositivityClip = 1e-10;

Matrix apply_vec(const Matrix& super, const Matrix& rho) {
  const Eigen::Index d = rho.rows();
  Vector v = super * Eigen::Map<const Vector>(rho.data(), rho.size());
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

void hermitize(Matrix& rho) { rho = (0.5 * (rho + rho.adjoint())).eval(); }

void require_channels(const FilterModel& model, std::span<const double> dy) {
  if (dy.size() != model.channels()) {
    throw InputError("increment count " + std::to_string(dy.size()) +
                     " does not match observed channels " + std::to_string(model.channels()));
  }
}

double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

TrajectoryRecord TrajectoryRecord::coarsen(std::size_t factor) const {
  if (factor == 0 || steps % factor != 0) {
    throw InputError("coarsen: factor must divide the number of steps");
  }
  TrajectoryRecord out;
  out.dt = dt * static_cast<double>(factor);
  out.steps = steps / factor;
  out.seed = seed;
  auto block_sum = [&](const std::vector<double>& xs) {
    std::vector<double> r(out.steps, 0.0);
    for (std::size_t n = 0; n < out.steps; ++n)
      for (std::size_t k = 0; k < factor; ++k) r[n] += xs[n * factor + k];
    return r;
  };
  for (const auto& c : dy) out.dy.push_back(block_sum(c));
  for (const auto& c : dw) out.dw.push_back(block_sum(c));
  return out;
}

FilterState FilterState::from_density(Matrix rho) {
  FilterState s;
  s.picture = Picture::kDensity;
  s.density = std::move(rho);
  return s;
}

FilterState FilterState::from_vector(Vector chi) {
  FilterState s;
  s.picture = Picture::kPure;
  s.vector = std::move(chi);
  return s;
}

int FilterState::dim() const {
  return static_cast<int>(picture == Picture::kDensity ? density.rows() : vector.size());
}

FilterModel::FilterModel(const ModelSpec& g, const MeasurementScheme& scheme)
    : dim_(g.dim()), complete_(scheme.is_complete(g.channels())) {
  scheme.check_against(g);
  has_unobs_ = scheme.size() < g.channels();
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    couplings_.push_back(measured_coupling(g, scheme, i).matrix());
  }
  for (std::size_t k = 0; k < g.channels(); ++k) {
    if (!scheme.observes(static_cast<int>(k))) unobserved_.push_back(g.coupling(k).matrix());
  }
  const Operator ks = estalg::k_strat(g, scheme);
  k_ito_ = estalg::k_ito(g).matrix();
  k_strat_ = ks.matrix();
  ito_drift_ = adjoint(lindblad(g)).matrix();
  strat_drift_ = adjoint(zeta(ks)).matrix();
  if (has_unobs_) strat_drift_ += adjoint(l_unobs(g, scheme)).matrix();
}

Matrix FilterModel::diffusion(std::size_t channel, const Matrix& rho) const {
  const Matrix& m = couplings_[channel];
  return m * rho + rho * m.adjoint();
}

Matrix FilterModel::ito_drift(const Matrix& rho) const { return apply_vec(ito_drift_, rho); }

Matrix FilterModel::strat_drift(const Matrix& rho) const { return apply_vec(strat_drift_, rho); }

FilterState zakai_step_ito(const FilterState& state, const FilterModel& model,
                           std::span<const double> dy, double dt, ItoScheme scheme) {
  if (state.picture != Picture::kDensity) throw InputError("zakai_step_ito: density state required");
  if (state.dim() != model.dim()) throw InputError("zakai_step_ito: dimension mismatch");
  require_channels(model, dy);
  const Matrix& rho = state.density;
  if (scheme == ItoScheme::kKraus) {
    const auto& m = model.couplings();
    Matrix kraus = Matrix::Identity(model.dim(), model.dim()) + model.k_ito() * dt;
    for (std::size_t a = 0; a < m.size(); ++a) {
      kraus += m[a] * dy[a];
      for (std::size_t b = 0; b < m.size(); ++b) {
        const double w = dy[a] * dy[b] - (a == b ? dt : 0.0);
        kraus += 0.5 * w * (m[a] * m[b]);
      }
    }
    Matrix next = kraus * rho * kraus.adjoint();
    for (const auto& l : model.unobserved()) next += l * rho * l.adjoint() * dt;
    hermitize(next);
    return FilterState::from_density(std::move(next));
  }
  Matrix next = rho + model.ito_drift(rho) * dt;
  std::vector<Matrix> first;
  for (std::size_t a = 0; a < model.channels(); ++a) {
    first.push_back(model.diffusion(a, rho));
    next += first.back() * dy[a];
  }
  if (scheme == ItoScheme::kMilstein) {
    for (std::size_t a = 0; a < model.channels(); ++a) {
      for (std::size_t b = 0; b < model.channels(); ++b) {
        const double w = dy[a] * dy[b] - (a == b ? dt : 0.0);
        next += 0.5 * w * model.diffusion(a, first[b]);
      }
    }
  }
  hermitize(next);
  return FilterState::from_density(std::move(next));
}

FilterState zakai_step_strat(const FilterState& state, const FilterModel& model,
                             std::span<const double> dy, double dt) {
  if (state.picture != Picture::kDensity) {
    throw InputError("zakai_step_strat: density state required");
  }
  if (state.dim() != model.dim()) throw InputError("zakai_step_strat: dimension mismatch");
  require_channels(model, dy);
  const Matrix& rho = state.density;
  auto increment = [&](const Matrix& r) {
    Matrix inc = model.strat_drift(r) * dt;
    for (std::size_t a = 0; a < model.channels(); ++a) inc += model.diffusion(a, r) * dy[a];
    return inc;
  };
  const Matrix k0 = increment(rho);
  const Matrix k1 = increment(rho + k0);
  Matrix next = rho + 0.5 * (k0 + k1);
  hermitize(next);
  return FilterState::from_density(std::move(next));
}

FilterState pure_step(const FilterState& state, const FilterModel& model,
                      std::span<const double> dy, double dt, Calculus form, ItoScheme scheme) {
  if (state.picture != Picture::kPure) throw InputError("pure_step: state vector required");
  if (state.dim() != model.dim()) throw InputError("pure_step: dimension mismatch");
  require_channels(model, dy);
  const Vector& chi = state.vector;
  const auto& m = model.couplings();
  if (form == Calculus::kIto) {
    Vector next = chi + model.k_ito() * chi * dt;
    std::vector<Vector> first;
    for (std::size_t a = 0; a < m.size(); ++a) {
      first.push_back(m[a] * chi);
      next += first.back() * dy[a];
    }
    if (scheme != ItoScheme::kEulerMaruyama) {
      for (std::size_t a = 0; a < m.size(); ++a) {
        for (std::size_t b = 0; b < m.size(); ++b) {
          const double w = dy[a] * dy[b] - (a == b ? dt : 0.0);
          next += 0.5 * w * (m[a] * first[b]);
        }
      }
    }
    return FilterState::from_vector(std::move(next));
  }
  if (!model.complete()) {
    throw InputError("Stratonovich state-vector form requires complete homodyne detection");
  }
  auto increment = [&](const Vector& v) {
    Vector inc = model.k_strat() * v * dt;
    for (std::size_t a = 0; a < m.size(); ++a) inc += (m[a] * v) * dy[a];
    return inc;
  };
  const Vector k0 = increment(chi);
  const Vector k1 = increment(chi + k0);
  return FilterState::from_vector(chi + 0.5 * (k0 + k1));
}

NormalizedFilter::NormalizedFilter(const FilterState& state, std::size_t step) : state_(state) {
  const int d = state_.dim();
  // Same arithmetic path as sigma(X) so that pi(I) is exactly one.
  norm_ = sigma(Matrix::Identity(d, d)).real();
  if (!(norm_ >= kDegeneracyFloor)) throw FilterDegeneracy(step, norm_);
}

Complex NormalizedFilter::sigma(const Matrix& x) const {
  if (state_.picture == Picture::kDensity) {
    if (x.rows() != state_.density.rows() || x.cols() != state_.density.cols()) {
      throw InputError("observable dimension mismatch");
    }
    return (state_.density * x).trace();
  }
  if (x.rows() != state_.vector.size() || x.cols() != state_.vector.size()) {
    throw InputError("observable dimension mismatch");
  }
  return state_.vector.dot(x * state_.vector);
}

Matrix NormalizedFilter::density() const {
  if (state_.picture == Picture::kDensity) return state_.density / norm_;
  return state_.vector * state_.vector.adjoint() / norm_;
}

bool repair_positivity(Matrix& rho, PositivityStats& stats) {
  const double tr = rho.trace().real();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double raw = lambda.minCoeff() / tr;
  stats.min_eigenvalue_raw = std::min(stats.min_eigenvalue_raw, raw);
  if (lambda.minCoeff() >= -kPositivityClip * tr) {
    stats.min_eigenvalue = std::min(stats.min_eigenvalue, raw);
    return false;
  }
  const Eigen::VectorXd clipped = lambda.cwiseMax(0.0);
  Matrix repaired = eig.eigenvectors() * clipped.cast<Complex>().asDiagonal() *
                    eig.eigenvectors().adjoint();
  repaired *= tr / clipped.sum();
  hermitize(repaired);
  rho = std::move(repaired);
  ++stats.repairs;
  stats.min_eigenvalue = std::min(stats.min_eigenvalue, 0.0);
  return true;
}

void check_density(const Matrix& rho, int dim) {
  if (rho.rows() != dim || rho.cols() != dim) throw InputError("rho0: dimension mismatch");
  if (!rho.allFinite()) throw InputError("rho0: non-finite entries");
  if ((rho - rho.adjoint()).norm() > 1e-10) throw InputError("rho0: not self-adjoint");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) throw InputError("rho0: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) throw InputError("rho0: not positive");
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl-sequence offset
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrajectoryRecord generate_record(const ModelSpec& g, const MeasurementScheme& scheme,
                                 const Matrix& rho0, double horizon, double dt,
                                 std::uint64_t seed) {
  if (!(dt > 0.0)) throw InputError("generate_record: dt must be positive");
  if (!(horizon >= dt)) throw InputError("generate_record: horizon must be at least dt");
  check_density(rho0, g.dim());
  const FilterModel model(g, scheme);

  TrajectoryRecord rec;
  rec.dt = dt;
  rec.seed = seed;
  rec.steps = static_cast<std::size_t>(std::llround(horizon / dt));
  rec.dy.assign(model.channels(), std::vector<double>(rec.steps));
  rec.dw.assign(model.channels(), std::vector<double>(rec.steps));

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));

  PositivityStats stats;
  Matrix rho = rho0;
  for (std::size_t n = 0; n < rec.steps; ++n) {
    Matrix next = rho + model.ito_drift(rho) * dt;
    for (std::size_t a = 0; a < model.channels(); ++a) {
      const double w = normal(engine);
      const Matrix b = model.diffusion(a, rho);
      const double mean = b.trace().real();
      rec.dw[a][n] = w;
      rec.dy[a][n] = w + mean * dt;
      next += (b - mean * rho) * w;
    }
    hermitize(next);
    if (!next.allFinite()) throw NumericalBlowUp(n + 1);
    repair_positivity(next, stats);
    rho = next / next.trace().real();
  }
  return rec;
}

FilterTable run_filter(const TrajectoryRecord& record, const FilterModel& model,
                       const Matrix& rho0, std::span<const NamedObservable> observables,
                       const FilterOptions& options) {
  if (record.channels() != model.channels()) {
    throw InputError("record has " + std::to_string(record.channels()) +
                     " channels, scheme observes " + std::to_string(model.channels()));
  }
  for (const auto& c : record.dy) {
    if (c.size() != record.steps) throw InputError("record channel length mismatch");
  }
  check_density(rho0, model.dim());
  for (const auto& o : observables) {
    if (o.matrix.rows() != model.dim() || o.matrix.cols() != model.dim()) {
      throw InputError("observable '" + o.name + "' has the wrong dimension");
    }
  }

  FilterState state;
  if (options.picture == Picture::kDensity) {
    state = FilterState::from_density(rho0);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho0);
    const Eigen::Index top = model.dim() - 1;
    if (std::abs(eig.eigenvalues()(top) - 1.0) > 1e-10) {
      throw InputError("pure picture requires a pure initial state");
    }
    state = FilterState::from_vector(eig.eigenvectors().col(top));
  }
  if (options.form == Calculus::kStratonovich && options.picture == Picture::kPure &&
      !model.complete()) {
    throw InputError("Stratonovich state-vector form requires complete homodyne detection");
  }

  FilterTable table;
  table.pi.assign(observables.size(), {});
  auto emit = [&](std::size_t n) {
    const NormalizedFilter f(state, n);
    table.t.push_back(record.time(n));
    table.sigma_i.push_back(f.norm());
    for (std::size_t j = 0; j < observables.size(); ++j) {
      table.pi[j].push_back(f.pi(observables[j].matrix));
    }
  };
  emit(0);

  std::vector<double> dy(model.channels());
  for (std::size_t n = 0; n < record.steps; ++n) {
    for (std::size_t a = 0; a < dy.size(); ++a) dy[a] = record.dy[a][n];
    if (options.picture == Picture::kDensity) {
      state = options.form == Calculus::kIto
                  ? zakai_step_ito(state, model, dy, record.dt, options.ito_scheme)
                  : zakai_step_strat(state, model, dy, record.dt);
      if (!state.density.allFinite()) throw NumericalBlowUp(n + 1);
      if (!(state.density.trace().real() >= kDegeneracyFloor)) {
        throw FilterDegeneracy(n + 1, state.density.trace().real());
      }
      repair_positivity(state.density, table.positivity);
    } else {
      state = pure_step(state, model, dy, record.dt, options.form, options.ito_scheme);
      if (!state.vector.allFinite()) throw NumericalBlowUp(n + 1);
    }
    emit(n + 1);
  }
  return table;
}

Complex unconditional_expectation(const ModelSpec& g, const Matrix& rho0, const Matrix& x,
                                  double t) {
  check_density(rho0, g.dim());
  const Matrix gen = adjoint(lindblad(g)).matrix();
  const Matrix rho_t = unvec(expm(Matrix(t * gen)) * vec(rho0), g.dim());
  return (rho_t * x).trace();
}

EnsembleSummary run_ensemble(const ModelSpec& g, const MeasurementScheme& scheme,
                             const Matrix& rho0, std::span<const NamedObservable> observables,
                             double horizon, double dt, std::uint64_t seed,
                             std::size_t trajectories, const FilterOptions& options,
                             unsigned threads) {
  if (trajectories == 0) throw InputError("ensemble size must be positive");
  const FilterModel model(g, scheme);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trajectories));

  // samples[i][j][n]: trajectory i, observable j, grid point n
  std::vector<std::vector<std::vector<double>>> samples(trajectories);
  std::vector<std::exception_ptr> errors(trajectories);
  auto worker = [&](unsigned w) {
    for (std::size_t i = w; i < trajectories; i += threads) {
      try {
        const TrajectoryRecord rec =
            generate_record(g, scheme, rho0, horizon, dt, trajectory_seed(seed, i));
        const FilterTable table = run_filter(rec, model, rho0, observables, options);
        auto& s = samples[i];
        s.resize(observables.size());
        for (std::size_t j = 0; j < observables.size(); ++j) {
          s[j].reserve(table.pi[j].size());
          for (const Complex& v : table.pi[j]) s[j].push_back(v.real());
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EnsembleSummary out;
  out.trajectories = trajectories;
  const std::size_t points = samples.front().empty() ? 0 : samples.front().front().size();
  for (std::size_t n = 0; n < points; ++n) out.t.push_back(dt * static_cast<double>(n));
  out.mean.assign(observables.size(), std::vector<double>(points));
  out.std_error.assign(observables.size(), std::vector<double>(points));
  std::vector<double> column(trajectories);
  for (std::size_t j = 0; j < observables.size(); ++j) {
    for (std::size_t n = 0; n < points; ++n) {
      for (std::size_t i = 0; i < trajectories; ++i) column[i] = samples[i][j][n];
      const double mean = kahan_sum(column) / static_cast<double>(trajectories);
      for (auto& c : column) c = (c - mean) * (c - mean);
      const double var = trajectories > 1
                             ? kahan_sum(column) / static_cast<double>(trajectories - 1)
                             : 0.0;
      out.mean[j][n] = mean;
      out.std_error[j][n] = std::sqrt(var / static_cast<double>(trajectories));
    }
  }
  return out;
}

}  // namespace estalg
