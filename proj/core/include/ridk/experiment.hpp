#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ridk/report.hpp"

namespace ridk {

enum class ExperimentKind {
  spectrum,
  trace_scaling,
  particles,
  ridk,
  compare,
  convergence,
  micro_scaling,
  verify_appendix,
};

/// Canonical names: "spectrum", "trace-scaling", "particles", "ridk",
/// "compare", "convergence", "micro-scaling", "verify-appendix".
std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct SimConfig {
  ExperimentKind kind = ExperimentKind::spectrum;

  int dim = 1;
  double eps = 0.1;
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
  double theta = 0.0;  ///< eps = N^{-1/theta} where used; 0 selects theta_c(s)
  double particles = 1000.0;
  std::vector<double> particle_counts{1e3, 1e4, 1e5};
  double s = 0.55;
  double gamma = 1.0;
  double sigma = 1.4142135623730951;
  double delta = 0.05;
  double radius = 10.0;
  double u0 = 0.1;
  double rho_amplitude = 0.3;
  int points = 256;
  double dt = 0.01;
  double horizon = 1.0;
  int replicas = 50;
  int jmax = 0;
  double resolution_tolerance = 1e-8;
  bool dealias = true;
  int snapshot_stride = 10;

  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 0;  ///< 0 = one per hardware thread; never affects results

  /// Cross-field checks for the selected experiment.  Throws ConfigError
  /// naming the violated condition.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

nlohmann::ordered_json to_json(const SimConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
SimConfig config_from_json(const nlohmann::json& j, SimConfig base = {});
SimConfig load_config(const std::filesystem::path& path);

/// Runs the experiment.  Deterministic in (config minus threads/output_dir).
ExperimentReport run(const SimConfig& config);

/// run + write_report + emit_plotdata into config.output_dir.
ExperimentReport run_and_write(const SimConfig& config);

}  // namespace ridk
