#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ridk/errors.hpp"
#include "ridk/experiment.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> replicas;
  std::optional<int> threads;
  std::optional<int> dim;
  std::vector<double> eps;
  std::vector<double> particles;
  std::optional<double> theta;
  std::optional<double> s;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<double> sigma;
  std::optional<double> delta;
  std::optional<double> radius;
  std::optional<double> u0;
  std::optional<double> amplitude;
  std::optional<int> points;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<int> jmax;
  std::optional<double> tolerance;
  std::optional<int> stride;
  bool no_dealias = false;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--replicas", o.replicas, "independent replicas");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_option("--d", o.dim, "spatial dimension");
  cmd->add_option("--eps", o.eps, "kernel width, or a comma-separated list")->delimiter(',');
  cmd->add_option("--N", o.particles, "particle count, or a comma-separated list")->delimiter(',');
  cmd->add_option("--theta", o.theta, "scaling exponent, eps = N^(-1/theta)");
  cmd->add_option("--s", o.s, "Sobolev index");
  cmd->add_option("--eta", o.eta, "Sobolev index offset, s = d/2 + eta");
  cmd->add_option("--gamma", o.gamma, "friction");
  cmd->add_option("--sigma", o.sigma, "noise amplitude");
  cmd->add_option("--delta", o.delta, "density floor");
  cmd->add_option("--k", o.radius, "exit radius");
  cmd->add_option("--u0", o.u0, "cosine interaction strength");
  cmd->add_option("--amplitude", o.amplitude, "initial density modulation");
  cmd->add_option("--M", o.points, "grid points per axis");
  cmd->add_option("--dt", o.dt, "time step");
  cmd->add_option("--T", o.horizon, "time horizon");
  cmd->add_option("--jmax", o.jmax, "mode truncation (0 = automatic)");
  cmd->add_option("--resolution-tolerance", o.tolerance, "bound on the last resolved noise eigenvalue");
  cmd->add_option("--stride", o.stride, "steps between snapshots");
  cmd->add_flag("--no-dealias", o.no_dealias, "disable the two-thirds rule");
}

ridk::SimConfig build_config(ridk::ExperimentKind kind, const Overrides& o) {
  ridk::SimConfig c;
  if (o.config) c = ridk::load_config(*o.config);
  c.kind = kind;
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.replicas) c.replicas = *o.replicas;
  if (o.threads) c.threads = *o.threads;
  if (o.dim) c.dim = *o.dim;
  if (!o.eps.empty()) {
    c.eps = o.eps.front();
    c.eps_list = o.eps;
  }
  if (!o.particles.empty()) {
    c.particles = o.particles.front();
    c.particle_counts = o.particles;
  }
  if (o.theta) c.theta = *o.theta;
  if (o.s) c.s = *o.s;
  if (o.eta) c.s = 0.5 * c.dim + *o.eta;
  if (o.gamma) c.gamma = *o.gamma;
  if (o.sigma) c.sigma = *o.sigma;
  if (o.delta) c.delta = *o.delta;
  if (o.radius) c.radius = *o.radius;
  if (o.u0) c.u0 = *o.u0;
  if (o.amplitude) c.rho_amplitude = *o.amplitude;
  if (o.points) c.points = *o.points;
  if (o.dt) c.dt = *o.dt;
  if (o.horizon) c.horizon = *o.horizon;
  if (o.jmax) c.jmax = *o.jmax;
  if (o.tolerance) c.resolution_tolerance = *o.tolerance;
  if (o.stride) c.snapshot_stride = *o.stride;
  if (o.no_dealias) c.dealias = false;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator for regularised inertial Dean-Kawasaki dynamics"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, ridk::ExperimentKind>> commands{
      {"spectrum", ridk::ExperimentKind::spectrum},
      {"trace-scaling", ridk::ExperimentKind::trace_scaling},
      {"simulate-particles", ridk::ExperimentKind::particles},
      {"simulate-ridk", ridk::ExperimentKind::ridk},
      {"compare", ridk::ExperimentKind::compare},
      {"convergence", ridk::ExperimentKind::convergence},
      {"micro-scaling", ridk::ExperimentKind::micro_scaling},
      {"verify-appendix", ridk::ExperimentKind::verify_appendix},
  };
  Overrides overrides;
  std::vector<std::pair<CLI::App*, ridk::ExperimentKind>> subs;
  for (const auto& [name, kind] : commands) {
    auto* cmd = app.add_subcommand(name, "run the " + ridk::to_string(kind) + " experiment");
    add_flags(cmd, overrides);
    subs.emplace_back(cmd, kind);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [cmd, kind] : subs) {
      if (!cmd->parsed()) continue;
      const auto config = build_config(kind, overrides);
      const auto report = ridk::run_and_write(config);
      for (const auto& check : report.checks) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name << "  value=" << ridk::format_number(check.value)
                  << "  criterion " << check.criterion << '\n';
      }
      for (const auto& [key, value] : report.fits.items()) std::cout << key << " = " << value.dump() << '\n';
      std::cout << "output: " << config.output_dir << '\n';
      return report.passed() ? 0 : 1;
    }
  } catch (const ridk::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
