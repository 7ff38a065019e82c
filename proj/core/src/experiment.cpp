#include "ridk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "ridk/combinatorics.hpp"
#include "ridk/convergence.hpp"
#include "ridk/errors.hpp"
#include "ridk/fields.hpp"
#include "ridk/noise.hpp"
#include "ridk/parallel.hpp"
#include "ridk/particles.hpp"
#include "ridk/regularisation.hpp"
#include "ridk/solver.hpp"
#include "ridk/specfun.hpp"
#include "ridk/spectrum.hpp"

namespace ridk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::map<std::string, ExperimentKind>& kind_names() {
  static const std::map<std::string, ExperimentKind> names{
      {"spectrum", ExperimentKind::spectrum},
      {"trace-scaling", ExperimentKind::trace_scaling},
      {"particles", ExperimentKind::particles},
      {"ridk", ExperimentKind::ridk},
      {"compare", ExperimentKind::compare},
      {"convergence", ExperimentKind::convergence},
      {"micro-scaling", ExperimentKind::micro_scaling},
      {"verify-appendix", ExperimentKind::verify_appendix},
  };
  return names;
}

Check make_check(std::string name, double value, std::string criterion, bool pass) {
  return Check{std::move(name), value, std::move(criterion), pass};
}

std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

bool power_of_two(int m) { return m >= 4 && (m & (m - 1)) == 0; }

double eps_for(const SimConfig& c, double particles) {
  return c.theta > 0.0 ? std::pow(particles, -1.0 / c.theta) : c.eps;
}

SolverConfig solver_config(const SimConfig& c, double particles, double eps) {
  SolverConfig s;
  s.dt = c.dt;
  s.horizon = c.horizon;
  s.dealias = c.dealias;
  s.particles = particles;
  s.eps = eps;
  s.s = c.s;
  s.radius = c.radius;
  s.delta = c.delta;
  s.gamma = c.gamma;
  s.sigma = c.sigma;
  s.potential = c.u0 == 0.0 ? Potential{ZeroPotential{}} : Potential{CosinePotential{c.u0}};
  s.resolution_tolerance = c.resolution_tolerance;
  return s;
}

void require_resolution(const SimConfig& c, double eps) {
  const double lambda = specfun::bessel_ratio(c.points / 2, 1.0 / (2.0 * eps * eps));
  if (!(lambda < c.resolution_tolerance)) {
    throw ConfigError("resolution rule violated: lambda_{M/2} = " + format_number(lambda) +
                      " >= " + format_number(c.resolution_tolerance) + " for M = " +
                      std::to_string(c.points) + ", eps = " + format_number(eps) +
                      "; suggested M = " +
                      std::to_string(suggest_grid_points(eps, c.resolution_tolerance)));
  }
}

std::string snapshot_bytes(std::span<const ScalarField> fields) {
  std::ostringstream out(std::ios::binary);
  write_fields_binary(out, fields);
  return out.str();
}

double density_deviation(const SpectralPair& a, const SpectralPair& b, double s) {
  auto diff = a.rho;
  diff -= b.rho;
  return hs_norm(diff, s);
}

double momentum_deviation(const SpectralPair& a, const SpectralPair& b, double s) {
  double sum = 0.0;
  for (std::size_t l = 0; l < a.momentum.size(); ++l) {
    auto diff = a.momentum[l];
    diff -= b.momentum[l];
    const double n = hs_norm(diff, s);
    sum += n * n;
  }
  return std::sqrt(sum);
}

AxisSampler initial_sampler(double amplitude) {
  return AxisSampler([amplitude](double x) { return 1.0 + amplitude * std::cos(x); });
}

// ------------------------------------------------------------------ spectrum

ExperimentReport run_spectrum(const SimConfig& c) {
  ExperimentReport report;
  const int jmax = c.jmax > 0 ? c.jmax : suggest_jmax(c.eps, c.s);
  const EigenSpectrum spectrum(c.eps, c.dim, jmax);
  Table table("spectrum", {"j", "lambda", "weight"});
  bool monotone = true;
  bool in_range = true;
  for (int j = 0; j <= jmax; ++j) {
    const double lambda = spectrum.axis(j);
    table.add(j, lambda, lambda * std::pow(1.0 + double(j) * j, c.s));
    if (lambda > 0.0) {
      in_range = in_range && lambda <= 1.0;
      if (j > 0) monotone = monotone && lambda < spectrum.axis(j - 1);
    }
  }
  report.tables.push_back(std::move(table));
  const double trace = sobolev_trace(c.s, c.eps, c.dim, jmax);
  report.fits["jmax"] = jmax;
  report.fits["trace"] = trace;
  report.fits["theta_critical"] = theta_critical(c.s, c.dim);
  report.checks.push_back(make_check("lambda_0_is_one", spectrum.axis(0), "== 1", spectrum.axis(0) == 1.0));
  report.checks.push_back(make_check("strictly_decreasing", monotone ? 1.0 : 0.0, "true", monotone));
  report.checks.push_back(make_check("eigenvalues_in_unit_interval", in_range ? 1.0 : 0.0, "true", in_range));
  report.figures.push_back({"spectrum", "spectrum", "j", "lambda", "", "j", "lambda_j", false, true, {}});
  return report;
}

// ------------------------------------------------------------- trace scaling

ExperimentReport run_trace_scaling(const SimConfig& c) {
  ExperimentReport report;
  Table table("trace_scaling", {"eps", "inverse_eps", "trace", "jmax"});
  std::vector<double> x;
  std::vector<double> y;
  for (double eps : c.eps_list) {
    const int jmax = suggest_jmax(eps, c.s);
    const double trace = sobolev_trace(c.s, eps, c.dim, jmax);
    table.add(eps, 1.0 / eps, trace, jmax);
    x.push_back(1.0 / eps);
    y.push_back(trace);
  }
  report.tables.push_back(std::move(table));
  const double slope = loglog_slope(x, y);
  const double target = theta_critical(c.s, c.dim);
  const auto best = grid_minimise_bound_exponent(c.s, c.dim);
  report.fits["slope"] = slope;
  report.fits["theta_critical"] = target;
  report.fits["argmin_alpha"] = best.alpha;
  report.fits["argmin_beta"] = best.beta;
  report.fits["min_exponent"] = best.exponent;
  const double rel = std::abs(slope - target) / target;
  report.checks.push_back(make_check("slope_within_5pct", rel, "< 0.05", rel < 0.05));
  const bool argmin = std::abs(best.alpha - 0.5) < 1e-9 && std::abs(best.beta - 0.5) < 1e-9;
  report.checks.push_back(make_check("bound_exponent_argmin_half_half", argmin ? 1.0 : 0.0, "true", argmin));
  const double gap = std::abs(best.exponent - target);
  report.checks.push_back(make_check("min_exponent_equals_theta_critical", gap, "< 1e-9", gap < 1e-9));
  Figure fig{"trace_scaling", "trace_scaling", "inverse_eps", "trace", "", "1/eps", "trace", true, true, {}};
  fig.reference = {{"kind", "power"}, {"slope", target}};
  report.figures.push_back(std::move(fig));
  return report;
}

// ----------------------------------------------------------------- particles

ExperimentReport run_particles(const SimConfig& c) {
  ExperimentReport report;
  const TorusGrid grid(c.dim, c.points);
  const double eps = eps_for(c, c.particles);
  const KernelSpec kernel(eps, c.dim);
  LangevinParams params{c.gamma, c.sigma, c.u0 == 0.0 ? Potential{ZeroPotential{}} : Potential{CosinePotential{c.u0}}};
  params.validate();

  const auto seed = replica_seed(c.seed, 0);
  Rng rng(seed);
  auto ensemble = sample_ensemble(static_cast<std::size_t>(c.particles), c.dim, initial_sampler(c.rho_amplitude),
                                  params.momentum_variance(), rng);
  const double uniform = std::pow(kTwoPi, -c.dim);

  Table table("particles", {"seed", "t", "mean_momentum", "momentum_variance", "density_fluctuation", "mass"});
  auto record = [&](double t) {
    const auto p = ensemble.momenta();
    double mean = 0.0;
    for (double v : p) mean += v;
    mean /= static_cast<double>(p.size());
    double var = 0.0;
    for (double v : p) var += (v - mean) * (v - mean);
    var /= static_cast<double>(p.size() - 1);
    auto fields = empirical_fields(ensemble, kernel, grid);
    const double mass = fields.rho[0].real() * std::pow(kTwoPi, c.dim);
    fields.rho[0] -= uniform;
    table.add(seed, t, mean, var, hs_norm(fields.rho, c.s), mass);
    return var;
  };

  record(0.0);
  const auto steps = static_cast<std::size_t>(std::llround(c.horizon / c.dt));
  double final_variance = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    step_langevin(ensemble, params, c.dt, rng);
    if (n % static_cast<std::size_t>(c.snapshot_stride) == 0 || n == steps) final_variance = record(n * c.dt);
  }
  report.tables.push_back(std::move(table));

  const auto fields = inverse_transform(empirical_fields(ensemble, kernel, grid));
  std::vector<ScalarField> snapshot{fields.rho};
  for (const auto& m : fields.momentum) snapshot.push_back(m);
  report.attachments.emplace_back("fields.bin", snapshot_bytes(snapshot));

  const double target = params.momentum_variance();
  const double samples = c.particles * c.dim;
  const double band = 5.0 * target * std::sqrt(2.0 / samples);
  report.fits["eps"] = eps;
  report.fits["stationary_variance"] = target;
  report.fits["final_variance"] = final_variance;
  report.checks.push_back(make_check("stationary_momentum_variance", std::abs(final_variance - target),
                                     "< 5 Monte Carlo standard errors", std::abs(final_variance - target) < band));
  report.figures.push_back({"momentum_variance", "particles", "t", "momentum_variance", "", "t",
                            "momentum variance", false, false, {{"kind", "constant"}, {"value", target}}});
  return report;
}

// ---------------------------------------------------------------------- ridk

ExperimentReport run_ridk(const SimConfig& c) {
  ExperimentReport report;
  const TorusGrid grid(c.dim, c.points);
  const double eps = eps_for(c, c.particles);
  const auto config = solver_config(c, c.particles, eps);
  RidkSolver solver(grid, config);
  auto state = smoothed_initial_state(convergence_initial_density(grid, c.rho_amplitude), eps);
  const Complex mass0 = state.rho[0];

  const auto seed = replica_seed(c.seed, 0);
  Rng rng(seed);
  std::vector<Diagnostics> rows{diagnose(state, config)};
  std::vector<ScalarField> snapshots{inverse_transform(state.rho)};
  bool blew_up = false;
  bool mass_identical = true;
  const auto steps = config.steps();
  try {
    for (std::size_t n = 1; n <= steps; ++n) {
      solver.step(state, rng);
      mass_identical = mass_identical && state.rho[0] == mass0;
      if (n % static_cast<std::size_t>(c.snapshot_stride) == 0 || n == steps) {
        rows.push_back(diagnose(state, config));
        snapshots.push_back(inverse_transform(state.rho));
      }
    }
  } catch (const BlowUpError& e) {
    blew_up = true;
    report.fits["blow_up_step"] = e.step();
  }

  Table table("diagnostics", {"seed", "t", "mass", "pair_norm", "min_rho", "energy_norm", "exit_status"});
  for (const auto& r : rows) {
    table.add(seed, r.time, r.mass, r.pair_norm, r.min_rho, r.energy_norm, std::string(to_string(r.exit)));
  }
  report.tables.push_back(std::move(table));
  report.attachments.emplace_back("trajectory.bin", snapshot_bytes(snapshots));
  report.fits["eps"] = eps;
  report.fits["steps"] = steps;
  report.checks.push_back(make_check("no_blow_up", blew_up ? 1.0 : 0.0, "false", !blew_up));
  report.checks.push_back(make_check("mass_bit_identical", mass_identical ? 1.0 : 0.0, "true", mass_identical));
  report.figures.push_back({"pair_norm", "diagnostics", "t", "pair_norm", "", "t", "pair norm", false, false, {}});
  return report;
}

// ------------------------------------------------------------------- compare

ExperimentReport run_compare(const SimConfig& c) {
  ExperimentReport report;
  const TorusGrid grid(c.dim, c.points);
  const double eps = eps_for(c, c.particles);
  const KernelSpec kernel(eps, c.dim);
  const auto config = solver_config(c, c.particles, eps);
  const LangevinParams params{c.gamma, c.sigma, config.potential};
  const auto initial = smoothed_initial_state(convergence_initial_density(grid, c.rho_amplitude), eps);
  const auto reference = solve_noise_free(initial, config);
  const auto steps = config.steps();
  const auto stride = static_cast<std::size_t>(c.snapshot_stride);

  std::vector<std::size_t> outputs{0};
  for (std::size_t n = stride; n < steps; n += stride) outputs.push_back(n);
  if (outputs.back() != steps) outputs.push_back(steps);
  const std::size_t slots = outputs.size();

  struct Sample {
    std::vector<double> particle_rho, particle_j, ridk_rho, ridk_j;
  };
  std::vector<Sample> samples(static_cast<std::size_t>(c.replicas));
  const auto sampler = initial_sampler(c.rho_amplitude);

  parallel_for(samples.size(), c.threads, [&](std::size_t r) {
    Sample out;
    const auto seed = replica_seed(c.seed, r);
    Rng particle_rng(replica_seed(seed, 0));
    Rng ridk_rng(replica_seed(seed, 1));
    auto ensemble = sample_ensemble(static_cast<std::size_t>(c.particles), c.dim, sampler,
                                    params.momentum_variance(), particle_rng);
    RidkSolver solver(grid, config);
    auto state = initial;
    std::size_t next = 0;
    for (std::size_t n = 0; n <= steps; ++n) {
      if (n > 0) {
        step_langevin(ensemble, params, c.dt, particle_rng);
        solver.step(state, ridk_rng);
      }
      if (next < slots && outputs[next] == n) {
        const auto fields = empirical_fields(ensemble, kernel, grid);
        out.particle_rho.push_back(density_deviation(fields, reference.states[n], c.s));
        out.particle_j.push_back(momentum_deviation(fields, reference.states[n], c.s));
        out.ridk_rho.push_back(density_deviation(state, reference.states[n], c.s));
        out.ridk_j.push_back(momentum_deviation(state, reference.states[n], c.s));
        ++next;
      }
    }
    samples[r] = std::move(out);
  });

  Table table("compare", {"t", "particle_density_deviation", "ridk_density_deviation",
                          "particle_momentum_deviation", "ridk_momentum_deviation"});
  auto mean_at = [&](auto member, std::size_t k) {
    double sum = 0.0;
    for (const auto& s : samples) sum += (s.*member)[k];
    return sum / static_cast<double>(samples.size());
  };
  for (std::size_t k = 0; k < slots; ++k) {
    table.add(outputs[k] * c.dt, mean_at(&Sample::particle_rho, k), mean_at(&Sample::ridk_rho, k),
              mean_at(&Sample::particle_j, k), mean_at(&Sample::ridk_j, k));
  }
  report.tables.push_back(std::move(table));

  Table per_replica("compare_replicas", {"replica", "seed", "t", "particle_density_deviation", "ridk_density_deviation",
                                         "particle_momentum_deviation", "ridk_momentum_deviation"});
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const auto& sm = samples[r];
    for (std::size_t k = 0; k < slots; ++k) {
      per_replica.add(r, replica_seed(c.seed, r), outputs[k] * c.dt, sm.particle_rho[k], sm.ridk_rho[k],
                      sm.particle_j[k], sm.ridk_j[k]);
    }
  }
  report.tables.push_back(std::move(per_replica));

  const double p_final = mean_at(&Sample::particle_j, slots - 1);
  const double r_final = mean_at(&Sample::ridk_j, slots - 1);
  const double ratio = r_final / p_final;
  report.fits["eps"] = eps;
  report.fits["final_momentum_deviation_ratio"] = ratio;
  report.fits["final_density_deviation_ratio"] =
      mean_at(&Sample::ridk_rho, slots - 1) / mean_at(&Sample::particle_rho, slots - 1);
  report.checks.push_back(make_check("finite_deviations", std::isfinite(ratio) ? 1.0 : 0.0, "true", std::isfinite(ratio)));
  report.figures.push_back({"compare_density", "compare", "t", "particle_density_deviation", "", "t",
                            "density deviation from noise-free", false, false, {}});
  report.figures.push_back({"compare_density_ridk", "compare", "t", "ridk_density_deviation", "", "t",
                            "density deviation from noise-free", false, false, {}});
  return report;
}

// --------------------------------------------------------------- convergence

ExperimentReport run_convergence(const SimConfig& c) {
  ExperimentReport report;
  ConvergenceSettings settings;
  settings.theta = c.theta;
  settings.particle_counts = c.particle_counts;
  settings.replicas = c.replicas;
  settings.dim = c.dim;
  settings.points = c.points;
  settings.rho_amplitude = c.rho_amplitude;
  settings.max_horizon = c.horizon;
  settings.solver = solver_config(c, c.particles, c.eps);
  settings.seed = c.seed;
  settings.threads = c.threads;
  const auto result = convergence_experiment(settings);

  Table rows("convergence", {"N", "eps", "mean_sup_error", "stderr", "no_exit_fraction", "blowups"});
  Table reps("convergence_replicas", {"N", "replica", "seed", "sup_error", "exit", "exit_time", "blew_up"});
  for (const auto& row : result.rows) {
    rows.add(row.particles, row.eps, row.mean_error, row.stderr_error, row.no_exit_fraction, row.blowups);
    for (std::size_t r = 0; r < row.replicas.size(); ++r) {
      const auto& rep = row.replicas[r];
      reps.add(row.particles, r, rep.seed, rep.sup_error, std::string(to_string(rep.exit)), rep.exit_time, rep.blew_up);
    }
  }
  report.tables.push_back(std::move(rows));
  report.tables.push_back(std::move(reps));
  report.fits["horizon"] = result.horizon;
  report.fits["fitted_slope"] = result.fitted_slope;
  report.fits["theoretical_slope"] = result.theoretical_slope;

  bool decreasing = true;
  bool exits_monotone = true;
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    decreasing = decreasing && result.rows[i].mean_error < result.rows[i - 1].mean_error;
    exits_monotone = exits_monotone && result.rows[i].no_exit_fraction >= result.rows[i - 1].no_exit_fraction;
  }
  const double gap = std::abs(result.fitted_slope - result.theoretical_slope);
  report.checks.push_back(make_check("error_strictly_decreasing", decreasing ? 1.0 : 0.0, "true", decreasing));
  report.checks.push_back(make_check("slope_within_0.1_of_theory", gap, "<= 0.1", gap <= 0.1));
  report.checks.push_back(make_check("no_exit_fraction_non_decreasing", exits_monotone ? 1.0 : 0.0, "true", exits_monotone));
  Figure fig{"convergence", "convergence", "N", "mean_sup_error", "stderr", "N", "E sup error", true, true, {}};
  fig.reference = {{"kind", "power"}, {"slope", result.theoretical_slope}};
  report.figures.push_back(std::move(fig));
  return report;
}

// ------------------------------------------------------------- micro scaling

ExperimentReport run_micro_scaling(const SimConfig& c) {
  ExperimentReport report;
  const double theta = c.theta > 0.0 ? c.theta : theta_critical(c.s, c.dim);

  Table rows("micro_scaling", {"N", "eps", "s", "S", "stderr", "S_exact", "S_uncentred", "S_mismatched_exact"});
  Table reps("micro_scaling_replicas", {"N", "eps", "s", "replica", "seed", "value"});
  auto add_replicas = [&](double n, double eps, const MicroScalingResult& r) {
    for (std::size_t i = 0; i < r.replicas.size(); ++i) reps.add(n, eps, c.s, i, r.seeds[i], r.replicas[i]);
  };

  // Oracle comparison at the configured (N, eps).
  const auto oracle_run = micro_scaling_statistic(static_cast<std::size_t>(c.particles), c.eps, c.s, c.dim,
                                                  c.replicas, replica_seed(c.seed, 0), c.threads);
  const double oracle = micro_scaling_exact(c.eps, c.s, c.dim);
  add_replicas(c.particles, c.eps, oracle_run);
  const double z = std::abs(oracle_run.centred - oracle) / oracle_run.centred_stderr;
  report.fits["oracle_N"] = c.particles;
  report.fits["oracle_eps"] = c.eps;
  report.fits["oracle_S"] = oracle_run.centred;
  report.fits["oracle_stderr"] = oracle_run.centred_stderr;
  report.fits["oracle_exact"] = oracle;
  report.checks.push_back(make_check("centred_statistic_matches_oracle", z, "< 3 standard errors", z < 3.0));

  // Along eps = N^{-1/theta}.
  std::vector<double> values;
  std::vector<double> mismatched;
  for (std::size_t k = 0; k < c.particle_counts.size(); ++k) {
    const double n = c.particle_counts[k];
    const double eps = std::pow(n, -1.0 / theta);
    const auto r = micro_scaling_statistic(static_cast<std::size_t>(n), eps, c.s, c.dim, c.replicas,
                                           replica_seed(c.seed, k + 1), c.threads);
    const double exact = micro_scaling_exact(eps, c.s, c.dim);
    // Prefactor of index s with the norm of index s + 1/2.
    const double shifted = micro_scaling_exact(eps, c.s + 0.5, c.dim) * std::pow(eps, -1.0);
    rows.add(n, eps, c.s, r.centred, r.centred_stderr, exact, r.uncentred, shifted);
    add_replicas(n, eps, r);
    values.push_back(r.centred);
    mismatched.push_back(shifted);
  }
  report.tables.push_back(std::move(rows));
  report.tables.push_back(std::move(reps));

  const double spread = *std::max_element(values.begin(), values.end()) /
                        *std::min_element(values.begin(), values.end());
  report.fits["theta"] = theta;
  report.fits["max_over_min"] = spread;
  report.checks.push_back(make_check("bounded_along_scaling", spread, "< 3", spread < 3.0));
  bool grows = true;
  for (std::size_t i = 1; i < mismatched.size(); ++i) grows = grows && mismatched[i] > mismatched[i - 1];
  report.checks.push_back(make_check("mismatched_index_grows", grows ? 1.0 : 0.0, "true", grows));
  Figure fig{"micro_scaling", "micro_scaling", "N", "S", "stderr", "N", "S", true, false, {}};
  fig.reference = {{"kind", "column"}, {"column", "S_exact"}};
  report.figures.push_back(std::move(fig));
  return report;
}

// ----------------------------------------------------------- verify appendix

ExperimentReport run_verify_appendix(const SimConfig& c) {
  ExperimentReport report;
  Table table("appendix", {"check", "max_residual", "tolerance", "pass"});
  auto add = [&](const std::string& name, double residual, double tolerance) {
    const bool pass = residual < tolerance;
    table.add(name, residual, tolerance, pass);
    report.checks.push_back(make_check(name, residual, "< " + brief(tolerance), pass));
  };

  Rng rng(replica_seed(c.seed, 0));
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_int_distribution<int> length(1, 8);
  double single = 0.0;
  double twofold = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(length(rng));
    std::vector<double> a(n), b(n), cc(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = coord(rng);
      b[i] = coord(rng);
      cc[i] = coord(rng);
      d[i] = coord(rng);
    }
    single = std::max(single, product_difference_expand(a, b).residual);
    twofold = std::max(twofold, double_difference_expand(a, b, cc, d).residual);
  }
  add("product_difference", single, 1e-12);
  add("double_difference", twofold, 1e-12);

  double bell_mismatch = 0.0;
  double block_identity = 0.0;
  for (int alpha = 1; alpha <= 8; ++alpha) {
    const auto parts = enumerate_partitions(alpha);
    bell_mismatch = std::max(bell_mismatch, std::abs(static_cast<double>(parts.size()) -
                                                     static_cast<double>(bell_number(alpha))));
    for (const auto& p : parts) {
      int total = 0;
      for (int j : p.occupied_sizes()) total += j * p.blocks_of_size(j);
      block_identity = std::max(block_identity, std::abs(double(total - alpha)));
    }
  }
  add("bell_numbers", bell_mismatch, 0.5);
  add("block_size_identity", block_identity, 0.5);

  // Composite derivative against nested central differences; the blend
  // threshold is placed inside the range of u so both pieces are exercised.
  {
    const TorusGrid grid(2, 32);
    const RegularisedSqrt h(RegularisationSpec::for_dimension(1.0, 2));
    auto u_of = [](double x, double y) { return 0.5 + 0.2 * std::cos(x) + 0.1 * std::sin(y); };
    const auto u = ScalarField::from_function(grid, [&](std::span<const double> x) { return u_of(x[0], x[1]); });
    const double step = 1e-3;
    const double junction = 0.5 * h.spec().delta;
    for (const auto& axes : {std::vector<int>{0}, std::vector<int>{0, 1}, std::vector<int>{0, 0}, std::vector<int>{1, 1}}) {
      const auto formula = faa_di_bruno_derivative(h, u, axes);
      double err = 0.0;
      double scale = 0.0;
      std::vector<double> x(2);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(std::abs(u[i]) - junction) < 10.0 * step) continue;
        grid.coordinates(i, x);
        auto f = [&](double dx, double dy) { return h(u_of(x[0] + dx, x[1] + dy)); };
        double fd = 0.0;
        if (axes.size() == 1) {
          fd = (f(step, 0) - f(-step, 0)) / (2 * step);
        } else if (axes[0] != axes[1]) {
          fd = (f(step, step) - f(step, -step) - f(-step, step) + f(-step, -step)) / (4 * step * step);
        } else if (axes[0] == 0) {
          fd = (f(step, 0) - 2 * f(0, 0) + f(-step, 0)) / (step * step);
        } else {
          fd = (f(0, step) - 2 * f(0, 0) + f(0, -step)) / (step * step);
        }
        err = std::max(err, std::abs(formula[i] - fd));
        scale = std::max(scale, std::abs(fd));
      }
      std::string name = "faa_di_bruno_";
      for (int a : axes) name += (a == 0 ? 'x' : 'y');
      add(name, err / scale, 1e-5);
    }
  }

  // Spectral integration by parts <-div v, u>_{H^s} = <v, grad u>_{H^s}.
  {
    const TorusGrid grid(2, 32);
    Rng field_rng(replica_seed(c.seed, 1));
    const auto u = transform(random_bandlimited_field(grid, 10, 1.0, field_rng));
    std::vector<SpectralField> v;
    for (int l = 0; l < 2; ++l) v.push_back(transform(random_bandlimited_field(grid, 10, 1.0, field_rng)));
    auto div = divergence(v);
    div *= Complex(-1.0, 0.0);
    const Complex lhs = hs_inner(div, u, c.s);
    Complex rhs = 0.0;
    for (int l = 0; l < 2; ++l) rhs += hs_inner(v[static_cast<std::size_t>(l)], partial(u, l), c.s);
    add("integration_by_parts", std::abs(lhs - rhs) / std::abs(rhs), 1e-10);
  }

  report.tables.push_back(std::move(table));
  return report;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [name, k] : kind_names()) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  const auto& names = kind_names();
  const auto it = names.find(name);
  if (it == names.end()) throw ConfigError("unknown experiment kind '" + name + "'");
  return it->second;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (dim < 1 || dim > 3) fail("dimension d must lie in [1, 3]");
  if (!(eps > 0.0)) fail("eps must be positive");
  if (!(s >= 0.0)) fail("Sobolev index s must be non-negative");
  if (!(gamma > 0.0)) fail("gamma must be positive");
  if (!(sigma >= 0.0)) fail("sigma must be non-negative");
  if (!(delta > 0.0)) fail("delta must be positive");
  if (!(radius > 0.0)) fail("exit radius k must be positive");
  if (!power_of_two(points)) fail("points M must be a power of two, at least 4");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(horizon >= dt)) fail("horizon T must be at least dt");
  if (replicas < 1) fail("replicas must be positive");
  if (jmax < 0) fail("jmax must be non-negative");
  if (snapshot_stride < 1) fail("snapshot stride must be positive");
  if (!(particles >= 1.0)) fail("particle count N must be at least 1");
  if (!(resolution_tolerance > 0.0)) fail("resolution tolerance must be positive");
  if (theta < 0.0) fail("theta must be non-negative (0 selects the default)");
  if (!(rho_amplitude >= 0.0 && rho_amplitude < 1.0)) fail("rho amplitude must lie in [0, 1)");
  for (double n : particle_counts) {
    if (!(n >= 1.0)) fail("particle counts must be at least 1");
  }
  for (double e : eps_list) {
    if (!(e > 0.0)) fail("eps list entries must be positive");
  }

  const bool embedding = kind == ExperimentKind::ridk || kind == ExperimentKind::compare ||
                         kind == ExperimentKind::convergence;
  if (embedding && !(s > 0.5 * dim)) fail("s > d/2 required for this experiment");

  switch (kind) {
    case ExperimentKind::trace_scaling:
      if (eps_list.size() < 2) fail("trace-scaling needs at least two eps values");
      break;
    case ExperimentKind::convergence: {
      if (!(theta > 2.0 * dim)) fail("convergence requires theta > 2d");
      if (replicas < 2) fail("convergence needs at least two replicas");
      if (particle_counts.size() < 2) fail("convergence needs at least two particle counts");
      const double largest = *std::max_element(particle_counts.begin(), particle_counts.end());
      require_resolution(*this, std::pow(largest, -1.0 / theta));
      break;
    }
    case ExperimentKind::micro_scaling:
      if (replicas < 2) fail("micro-scaling needs at least two replicas");
      if (particle_counts.size() < 2) fail("micro-scaling needs at least two particle counts");
      break;
    case ExperimentKind::ridk:
    case ExperimentKind::compare:
      require_resolution(*this, eps_for(*this, particles));
      if (kind == ExperimentKind::compare && replicas < 1) fail("compare needs replicas");
      break;
    default:
      break;
  }
}

nlohmann::ordered_json to_json(const SimConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(c.kind);
  j["d"] = c.dim;
  j["eps"] = c.eps;
  j["eps_list"] = c.eps_list;
  j["theta"] = c.theta;
  j["N"] = c.particles;
  j["N_list"] = c.particle_counts;
  j["s"] = c.s;
  j["gamma"] = c.gamma;
  j["sigma"] = c.sigma;
  j["delta"] = c.delta;
  j["k"] = c.radius;
  j["u0"] = c.u0;
  j["rho_amplitude"] = c.rho_amplitude;
  j["M"] = c.points;
  j["dt"] = c.dt;
  j["T"] = c.horizon;
  j["replicas"] = c.replicas;
  j["jmax"] = c.jmax;
  j["resolution_tolerance"] = c.resolution_tolerance;
  j["dealias"] = c.dealias;
  j["snapshot_stride"] = c.snapshot_stride;
  j["seed"] = c.seed;
  j["out"] = c.output_dir;
  j["threads"] = c.threads;
  return j;
}

SimConfig config_from_json(const nlohmann::json& j, SimConfig c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") c.kind = parse_experiment_kind(value.get<std::string>());
      else if (key == "d") c.dim = value.get<int>();
      else if (key == "eps") c.eps = value.get<double>();
      else if (key == "eps_list") c.eps_list = value.get<std::vector<double>>();
      else if (key == "theta") c.theta = value.get<double>();
      else if (key == "N") c.particles = value.get<double>();
      else if (key == "N_list") c.particle_counts = value.get<std::vector<double>>();
      else if (key == "s") c.s = value.get<double>();
      else if (key == "eta") c.s = 0.5 * c.dim + value.get<double>();
      else if (key == "gamma") c.gamma = value.get<double>();
      else if (key == "sigma") c.sigma = value.get<double>();
      else if (key == "delta") c.delta = value.get<double>();
      else if (key == "k") c.radius = value.get<double>();
      else if (key == "u0") c.u0 = value.get<double>();
      else if (key == "rho_amplitude") c.rho_amplitude = value.get<double>();
      else if (key == "M") c.points = value.get<int>();
      else if (key == "dt") c.dt = value.get<double>();
      else if (key == "T") c.horizon = value.get<double>();
      else if (key == "replicas") c.replicas = value.get<int>();
      else if (key == "jmax") c.jmax = value.get<int>();
      else if (key == "resolution_tolerance") c.resolution_tolerance = value.get<double>();
      else if (key == "dealias") c.dealias = value.get<bool>();
      else if (key == "snapshot_stride") c.snapshot_stride = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "out") c.output_dir = value.get<std::string>();
      else if (key == "threads") c.threads = value.get<int>();
      else throw ConfigError("unknown configuration key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
}

ExperimentReport run(const SimConfig& config) {
  config.validate();
  ExperimentReport report;
  switch (config.kind) {
    case ExperimentKind::spectrum: report = run_spectrum(config); break;
    case ExperimentKind::trace_scaling: report = run_trace_scaling(config); break;
    case ExperimentKind::particles: report = run_particles(config); break;
    case ExperimentKind::ridk: report = run_ridk(config); break;
    case ExperimentKind::compare: report = run_compare(config); break;
    case ExperimentKind::convergence: report = run_convergence(config); break;
    case ExperimentKind::micro_scaling: report = run_micro_scaling(config); break;
    case ExperimentKind::verify_appendix: report = run_verify_appendix(config); break;
  }
  report.experiment = to_string(config.kind);
  auto echo = to_json(config);
  echo.erase("out");
  echo.erase("threads");
  report.config = std::move(echo);
  return report;
}

ExperimentReport run_and_write(const SimConfig& config) {
  auto report = run(config);
  const std::filesystem::path dir(config.output_dir);
  write_report(report, dir);
  emit_plotdata(report, dir);
  return report;
}

}  // namespace ridk
