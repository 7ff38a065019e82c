#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ridk/fields.hpp"
#include "ridk/solver.hpp"

namespace ridk {

struct ConvergenceSettings {
  double theta = 3.0;
  std::vector<double> particle_counts{1e3, 1e4, 1e5};
  int replicas = 50;
  int dim = 1;
  int points = 256;
  double rho_amplitude = 0.3;   ///< rho0 = (2pi)^{-d} prod_l (1 + a cos x_l)
  double max_horizon = 1.0;     ///< upper limit for the trial choice of T
  SolverConfig solver;          ///< eps and particles are overwritten per N
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ConvergenceReplica {
  std::uint64_t seed = 0;
  double sup_error = 0.0;       ///< sup over steps up to exit of pair_norm(X - Z, s)
  ExitStatus exit = ExitStatus::inside;
  double exit_time = 0.0;
  bool blew_up = false;
};

struct ConvergenceRow {
  double particles = 0.0;
  double eps = 0.0;
  double mean_error = 0.0;
  double stderr_error = 0.0;
  double no_exit_fraction = 0.0;
  int blowups = 0;
  std::vector<ConvergenceReplica> replicas;
};

struct ConvergenceReport {
  double horizon = 0.0;          ///< T chosen on the noise-free run
  double fitted_slope = 0.0;
  double theoretical_slope = 0.0;
  std::vector<ConvergenceRow> rows;
};

/// -(1 - theta_c(s)/theta)/2
double theoretical_convergence_slope(double theta, double s, int dim);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Largest T <= max_horizon (a multiple of dt) on which the noise-free
/// solution keeps min rho > delta.
double choose_horizon(const SpectralPair& initial, const SolverConfig& config, double max_horizon);

/// Initial density of the experiment on a grid.
ScalarField convergence_initial_density(const TorusGrid& grid, double amplitude);

ConvergenceReport convergence_experiment(const ConvergenceSettings& settings);

}  // namespace ridk
