#include "ridk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "ridk/errors.hpp"
#include "ridk/specfun.hpp"

namespace ridk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fourier coefficients of d_l U for the cosine potential.
SpectralField potential_gradient(const TorusGrid& grid, const CosinePotential& cosine, int axis) {
  SpectralField u(grid);
  std::vector<int> k(static_cast<std::size_t>(grid.dim()), 0);
  for (int sign : {1, -1}) {
    k[static_cast<std::size_t>(axis)] = sign;
    u[grid.mode_index(k)] += 0.5 * cosine.u0;
  }
  return partial(u, axis);
}

bool all_finite(const SpectralPair& state) {
  auto finite = [](const SpectralField& f) {
    for (const auto& c : f.coefficients()) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
  };
  if (!finite(state.rho)) return false;
  return std::all_of(state.momentum.begin(), state.momentum.end(), finite);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(horizon >= dt)) throw ConfigError("horizon T must be at least dt");
  if (!(particles > 0.0)) throw ConfigError("particle count N must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(s >= 0.0)) throw ConfigError("Sobolev index s must be non-negative");
  if (!(radius > 0.0)) throw ConfigError("exit radius k must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
  if (smoothness < 0) throw ConfigError("smoothness order must be non-negative");
  if (!(resolution_tolerance > 0.0)) throw ConfigError("resolution tolerance must be positive");
}

std::size_t SolverConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

RegularisationSpec SolverConfig::regularisation(int dim) const {
  auto spec = RegularisationSpec::for_dimension(delta, dim);
  if (smoothness > 0) spec.order = smoothness;
  return spec;
}

SpectralPair drift_interaction(const SpectralPair& state, const Potential& potential, bool dealias) {
  const auto& grid = state.grid();
  SpectralPair out(grid);
  const auto* cosine = std::get_if<CosinePotential>(&potential);
  if (cosine == nullptr) return out;
  const auto rho = inverse_transform(state.rho);
  for (int l = 0; l < grid.dim(); ++l) {
    auto force = inverse_transform(convolve(potential_gradient(grid, *cosine, l), state.rho));
    for (std::size_t i = 0; i < grid.size(); ++i) force[i] *= -rho[i];
    auto tendency = transform(force);
    if (dealias) dealias_two_thirds(tendency);
    out.momentum[static_cast<std::size_t>(l)] = std::move(tendency);
  }
  return out;
}

const char* to_string(ExitStatus status) noexcept {
  switch (status) {
    case ExitStatus::inside:
      return "inside";
    case ExitStatus::rho_hit:
      return "rho-hit";
    case ExitStatus::norm_hit:
      return "norm-hit";
  }
  return "unknown";
}

ExitStatus monitor_exit(const SpectralPair& state, double delta, double radius, double s) {
  const auto rho = inverse_transform(state.rho);
  const auto values = rho.values();
  if (*std::min_element(values.begin(), values.end()) <= delta) return ExitStatus::rho_hit;
  if (pair_norm(state, s) >= radius) return ExitStatus::norm_hit;
  return ExitStatus::inside;
}

Diagnostics diagnose(const SpectralPair& state, const SolverConfig& config) {
  Diagnostics d;
  d.time = state.time;
  d.mass = state.rho[0].real() * std::pow(kTwoPi, state.grid().dim());
  d.pair_norm = pair_norm(state, config.s);
  const auto rho = inverse_transform(state.rho);
  const auto values = rho.values();
  d.min_rho = *std::min_element(values.begin(), values.end());
  const double c = config.wave().c;
  d.energy_norm = c > 0.0 ? energy_norm(state, c, config.s) : 0.0;
  d.exit = monitor_exit(state, config.delta, config.radius, config.s);
  return d;
}

void write_diagnostics_csv(std::ostream& out, std::span<const Diagnostics> rows) {
  out << "t,mass,pair_norm,min_rho,energy_norm,exit_status\n";
  const auto old = out.precision(17);
  for (const auto& r : rows) {
    out << r.time << ',' << r.mass << ',' << r.pair_norm << ',' << r.min_rho << ','
        << r.energy_norm << ',' << to_string(r.exit) << '\n';
  }
  out.precision(old);
}

RidkSolver::RidkSolver(const TorusGrid& grid, SolverConfig config)
    : grid_(grid), config_(std::move(config)), sqrt_(config_.regularisation(grid.dim())) {
  config_.validate();
  if (config_.noise && config_.sigma > 0.0) {
    sampler_.emplace(grid_, config_.eps, config_.resolution_tolerance);
  }
}

void RidkSolver::step(SpectralPair& state, Rng& rng) {
  if (sampler_) {
    const auto increment = sampler_->sample(config_.dt, rng);
    advance(state, increment, config_.dt);
  } else {
    advance(state, {}, config_.dt);
  }
}

void RidkSolver::step_with_increment(SpectralPair& state, std::span<const SpectralField> increment) {
  advance(state, increment, config_.dt);
}

void RidkSolver::step_with_increment(SpectralPair& state, std::span<const SpectralField> increment,
                                     double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  advance(state, increment, dt);
}

void RidkSolver::step_deterministic(SpectralPair& state) { advance(state, {}, config_.dt); }

void RidkSolver::advance(SpectralPair& state, std::span<const SpectralField> increment, double dt) {
  if (!(state.grid() == grid_)) throw SizeMismatchError("state grid differs from solver grid");
  const auto d = static_cast<std::size_t>(grid_.dim());
  if (!increment.empty() && increment.size() != d) {
    throw SizeMismatchError("noise increment needs one component per dimension");
  }

  const auto tendency = drift_interaction(state, config_.potential, config_.dealias);
  const bool interacting = std::holds_alternative<CosinePotential>(config_.potential);
  const bool noisy = !increment.empty() && config_.sigma > 0.0;

  if (noisy) {
    const auto rho = inverse_transform(state.rho);
    const auto amplitude = sqrt_.apply(rho);
    const double scale = config_.sigma / std::sqrt(config_.particles);
    for (std::size_t l = 0; l < d; ++l) {
      auto kick = inverse_transform(increment[l]);
      for (std::size_t i = 0; i < grid_.size(); ++i) kick[i] *= scale * amplitude[i];
      auto kick_hat = transform(kick);
      if (config_.dealias) dealias_two_thirds(kick_hat);
      state.momentum[l] += kick_hat;
    }
  }
  if (interacting) {
    for (std::size_t l = 0; l < d; ++l) {
      auto t = tendency.momentum[l];
      t *= Complex(dt, 0.0);
      state.momentum[l] += t;
    }
  }
  propagator_apply(state, dt, config_.wave());
  ++steps_;
  if (!all_finite(state)) {
    throw BlowUpError("non-finite state after step " + std::to_string(steps_), steps_);
  }
}

Trajectory solve_noise_free(const SpectralPair& initial, const SolverConfig& config,
                            std::size_t stride) {
  if (stride == 0) throw DomainError("stride must be positive");
  auto quiet = config;
  quiet.noise = false;
  RidkSolver solver(initial.grid(), quiet);
  Trajectory out;
  SpectralPair state = initial;
  out.states.push_back(state);
  out.diagnostics.push_back(diagnose(state, quiet));
  const std::size_t steps = quiet.steps();
  for (std::size_t n = 1; n <= steps; ++n) {
    solver.step_deterministic(state);
    if (n % stride == 0 || n == steps) {
      out.states.push_back(state);
      out.diagnostics.push_back(diagnose(state, quiet));
    }
  }
  return out;
}

SpectralPair smoothed_initial_state(const ScalarField& rho0, double eps) {
  const auto& grid = rho0.grid();
  auto rho_hat = transform(rho0);
  const auto ratios = specfun::bessel_ratio_table(grid.points() / 2, 1.0 / (eps * eps));
  std::vector<int> mode(static_cast<std::size_t>(grid.dim()));
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.is_nyquist(idx)) {
      rho_hat[idx] = 0.0;
      continue;
    }
    grid.mode(idx, mode);
    double w = 1.0;
    for (int k : mode) w *= ratios[static_cast<std::size_t>(std::abs(k))];
    rho_hat[idx] *= w;
  }
  SpectralPair state(grid);
  state.rho = std::move(rho_hat);
  return state;
}

}  // namespace ridk
