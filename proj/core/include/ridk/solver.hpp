#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ridk/fields.hpp"
#include "ridk/noise.hpp"
#include "ridk/particles.hpp"
#include "ridk/propagator.hpp"
#include "ridk/regularisation.hpp"
#include "ridk/rng.hpp"

namespace ridk {

struct SolverConfig {
  double dt = 1e-2;
  double horizon = 1.0;
  bool dealias = true;
  double particles = 1000.0;  ///< N, entering the noise as N^{-1/2}
  double eps = 0.1;
  double s = 0.55;            ///< Sobolev index of the diagnostics
  double radius = 10.0;       ///< exit radius k for the pair norm
  double delta = 0.05;
  int smoothness = 0;         ///< order of h_delta; 0 means ceil(d/2) + 2
  double gamma = 1.0;
  double sigma = std::sqrt(2.0);
  Potential potential = ZeroPotential{};
  bool noise = true;
  double resolution_tolerance = kNoiseResolution;

  void validate() const;
  WaveParams wave() const noexcept { return {gamma, sigma * sigma / (2.0 * gamma)}; }
  std::size_t steps() const;
  RegularisationSpec regularisation(int dim) const;
};

/// Interaction tendency: zero density component, momentum components
/// -rho (d_l U * rho).  Convolution spectral, product pointwise.
SpectralPair drift_interaction(const SpectralPair& state, const Potential& potential,
                               bool dealias = true);

enum class ExitStatus { inside, rho_hit, norm_hit };

const char* to_string(ExitStatus status) noexcept;

/// rho_hit if min grid value of rho <= delta, else norm_hit if
/// pair_norm(state, s) >= radius, else inside.
ExitStatus monitor_exit(const SpectralPair& state, double delta, double radius, double s);

struct Diagnostics {
  double time = 0.0;
  double mass = 0.0;
  double pair_norm = 0.0;
  double min_rho = 0.0;
  double energy_norm = 0.0;
  ExitStatus exit = ExitStatus::inside;
};

Diagnostics diagnose(const SpectralPair& state, const SolverConfig& config);
void write_diagnostics_csv(std::ostream& out, std::span<const Diagnostics> rows);

/// Exponential Euler stepper X <- e^{A dt}[X + dt alpha_U(X) + B(X) dW].
class RidkSolver {
 public:
  RidkSolver(const TorusGrid& grid, SolverConfig config);

  const SolverConfig& config() const noexcept { return config_; }
  const TorusGrid& grid() const noexcept { return grid_; }
  /// Present only when the configuration has noise switched on with sigma > 0.
  const NoiseSampler* sampler() const noexcept { return sampler_ ? &*sampler_ : nullptr; }
  std::size_t steps_taken() const noexcept { return steps_; }

  void step(SpectralPair& state, Rng& rng);
  /// Step with a supplied increment (d spectral fields over config().dt).
  void step_with_increment(SpectralPair& state, std::span<const SpectralField> increment);
  void step_with_increment(SpectralPair& state, std::span<const SpectralField> increment, double dt);
  /// Deterministic step (no noise).
  void step_deterministic(SpectralPair& state);

 private:
  void advance(SpectralPair& state, std::span<const SpectralField> increment, double dt);

  TorusGrid grid_;
  SolverConfig config_;
  RegularisedSqrt sqrt_;
  std::optional<NoiseSampler> sampler_;
  std::size_t steps_ = 0;
};

struct Trajectory {
  std::vector<SpectralPair> states;
  std::vector<Diagnostics> diagnostics;
};

/// Noise-free reference run from X0 over config.horizon, keeping every
/// `stride`-th state (the initial and final state are always kept).
Trajectory solve_noise_free(const SpectralPair& initial, const SolverConfig& config,
                            std::size_t stride = 1);

/// rho0 * w_eps on the grid with zero momentum.
SpectralPair smoothed_initial_state(const ScalarField& rho0, double eps);

}  // namespace ridk
