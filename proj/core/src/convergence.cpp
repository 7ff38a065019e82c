#include "ridk/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ridk/errors.hpp"
#include "ridk/parallel.hpp"
#include "ridk/spectrum.hpp"

namespace ridk {

double theoretical_convergence_slope(double theta, double s, int dim) {
  return -0.5 * (1.0 - theta_critical(s, dim) / theta);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw SizeMismatchError("slope fit needs >= 2 matched points");
  double mx = 0.0;
  double my = 0.0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double choose_horizon(const SpectralPair& initial, const SolverConfig& config, double max_horizon) {
  auto trial = config;
  trial.horizon = std::max(max_horizon, config.dt);
  const auto path = solve_noise_free(initial, trial);
  double horizon = 0.0;
  for (const auto& d : path.diagnostics) {
    if (d.min_rho <= config.delta) break;
    horizon = d.time;
  }
  if (horizon < config.dt) throw ConfigError("noise-free run leaves the admissible set immediately");
  return horizon;
}

ScalarField convergence_initial_density(const TorusGrid& grid, double amplitude) {
  const double base = std::pow(2.0 * std::numbers::pi, -grid.dim());
  return ScalarField::from_function(grid, [&](std::span<const double> x) {
    double p = base;
    for (double xl : x) p *= 1.0 + amplitude * std::cos(xl);
    return p;
  });
}

ConvergenceReport convergence_experiment(const ConvergenceSettings& settings) {
  if (!(settings.theta > 2.0 * settings.dim)) throw ConfigError("convergence needs theta > 2d");
  if (settings.replicas < 2) throw ConfigError("convergence needs at least two replicas");
  if (settings.particle_counts.size() < 2) throw ConfigError("convergence needs at least two N values");

  const TorusGrid grid(settings.dim, settings.points);
  const auto rho0 = convergence_initial_density(grid, settings.rho_amplitude);

  ConvergenceReport report;
  report.theoretical_slope = theoretical_convergence_slope(settings.theta, settings.solver.s, settings.dim);

  // T from the noise-free run at the smallest N (widest kernel).
  {
    auto config = settings.solver;
    config.eps = std::pow(settings.particle_counts.front(), -1.0 / settings.theta);
    const auto initial = smoothed_initial_state(rho0, config.eps);
    report.horizon = choose_horizon(initial, config, settings.max_horizon);
  }

  for (std::size_t n = 0; n < settings.particle_counts.size(); ++n) {
    auto config = settings.solver;
    config.particles = settings.particle_counts[n];
    config.eps = std::pow(config.particles, -1.0 / settings.theta);
    config.horizon = report.horizon;
    const auto initial = smoothed_initial_state(rho0, config.eps);
    const auto reference = solve_noise_free(initial, config);

    ConvergenceRow row;
    row.particles = config.particles;
    row.eps = config.eps;
    row.replicas.resize(static_cast<std::size_t>(settings.replicas));
    const std::uint64_t level_seed = replica_seed(settings.seed, n);

    parallel_for(row.replicas.size(), settings.threads, [&](std::size_t r) {
      ConvergenceReplica out;
      out.seed = replica_seed(level_seed, r);
      Rng rng(out.seed);
      RidkSolver solver(grid, config);
      SpectralPair state = initial;
      try {
        for (std::size_t step = 1; step < reference.states.size(); ++step) {
          solver.step(state, rng);
          auto diff = state;
          diff -= reference.states[step];
          out.sup_error = std::max(out.sup_error, pair_norm(diff, config.s));
          const auto status = monitor_exit(state, config.delta, config.radius, config.s);
          if (status != ExitStatus::inside) {
            out.exit = status;
            out.exit_time = state.time;
            break;
          }
        }
      } catch (const BlowUpError&) {
        out.blew_up = true;
      }
      row.replicas[r] = out;
    });

    double sum = 0.0;
    double sum2 = 0.0;
    int used = 0;
    int inside = 0;
    for (const auto& rep : row.replicas) {
      if (rep.blew_up) {
        ++row.blowups;
        continue;
      }
      sum += rep.sup_error;
      sum2 += rep.sup_error * rep.sup_error;
      ++used;
      if (rep.exit == ExitStatus::inside) ++inside;
    }
    if (used > 0) row.mean_error = sum / used;
    if (used > 1) {
      const double var = std::max(0.0, (sum2 - used * row.mean_error * row.mean_error) / (used - 1));
      row.stderr_error = std::sqrt(var / used);
    }
    row.no_exit_fraction = static_cast<double>(inside) / settings.replicas;
    report.rows.push_back(std::move(row));
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : report.rows) {
    xs.push_back(row.particles);
    ys.push_back(row.mean_error);
  }
  report.fitted_slope = loglog_slope(xs, ys);
  return report;
}

}  // namespace ridk
