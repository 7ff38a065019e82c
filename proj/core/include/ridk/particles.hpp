#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "ridk/fields.hpp"
#include "ridk/kernel.hpp"
#include "ridk/rng.hpp"

namespace ridk {

struct ZeroPotential {};

/// U(x) = u0 * sum_l cos(x_l).
struct CosinePotential {
  double u0 = 0.0;
};

using Potential = std::variant<ZeroPotential, CosinePotential>;

struct LangevinParams {
  double gamma = 1.0;
  double sigma = 1.0;
  Potential potential = ZeroPotential{};

  /// sigma^2 / (2 gamma): stationary momentum variance per component.
  double momentum_variance() const noexcept { return sigma * sigma / (2.0 * gamma); }
  void validate() const;
};

/// N particles on [0, 2pi)^d.  Positions and momenta are stored row-major
/// (particle i, axis l at i*d + l).
class ParticleEnsemble {
 public:
  ParticleEnsemble(int dim, std::vector<double> positions, std::vector<double> momenta);
  ParticleEnsemble(int dim, std::size_t count);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return q_.size() / static_cast<std::size_t>(dim_); }

  std::span<double> positions() noexcept { return q_; }
  std::span<const double> positions() const noexcept { return q_; }
  std::span<double> momenta() noexcept { return p_; }
  std::span<const double> momenta() const noexcept { return p_; }

  double q(std::size_t i, int l) const noexcept { return q_[i * dim_ + l]; }
  double p(std::size_t i, int l) const noexcept { return p_[i * dim_ + l]; }

  /// Reduce every position into [0, 2pi).
  void wrap() noexcept;

 private:
  int dim_;
  std::vector<double> q_;
  std::vector<double> p_;
};

/// Reduce x into [0, 2pi).
double wrap_angle(double x) noexcept;

/// Mean-field force -N^{-1} sum_j grad U(q_i - q_j), row-major N x d.  The
/// cosine potential is evaluated in O(N) from per-axis sin/cos aggregates.
std::vector<double> interaction_force(const ParticleEnsemble& ensemble, const Potential& potential);

/// One Strang step: half kick, half drift, exact Ornstein-Uhlenbeck momentum
/// update, half drift, half kick.  Positions are wrapped afterwards.
void step_langevin(ParticleEnsemble& ensemble, const LangevinParams& params, double dt, Rng& rng);

/// Inverse-CDF sampler for a density on [0, 2pi) given up to normalisation.
class AxisSampler {
 public:
  explicit AxisSampler(std::function<double(double)> density, int table_points = 4096);
  /// Uniform density.
  AxisSampler();

  double operator()(Rng& rng) const;
  double quantile(double u) const;

 private:
  std::vector<double> cdf_;
};

/// Positions i.i.d. with the separable density prod_l axis(x_l), momenta
/// i.i.d. Normal(0, momentum_variance).  Draw order: per particle, all
/// position components then all momentum components.
ParticleEnsemble sample_ensemble(std::size_t count, int dim, const AxisSampler& axis,
                                 double momentum_variance, Rng& rng);

/// Empirical density/momentum of the ensemble smoothed by w_eps, evaluated
/// spectrally on the grid's modes:
///   rho(j) = w(j) N^{-1} sum_i e^{-ij.q_i},  j_l(j) = w(j) N^{-1} sum_i p_il e^{-ij.q_i}.
/// Nyquist modes are set to zero so the fields are real.
SpectralPair empirical_fields(const ParticleEnsemble& ensemble, const KernelSpec& spec,
                              const TorusGrid& grid);

/// The same fields by direct summation of w_eps(x - q_i) at grid points.
PairState empirical_fields_direct(const ParticleEnsemble& ensemble, const KernelSpec& spec,
                                  const TorusGrid& grid);

struct MicroScalingResult {
  double centred = 0.0;           ///< replica mean of the centred statistic
  double centred_stderr = 0.0;
  double uncentred = 0.0;         ///< centred + N eps^{2s+d} (2pi)^{-2d}
  std::vector<double> replicas;   ///< centred value per replica, in replica order
  std::vector<std::uint64_t> seeds;
  int mode_cutoff = 0;            ///< per-axis |j| cutoff of the summed modes
};

/// Per-axis cutoff J at which w(J)^2 (1+J^2)^s drops below 1e-14 of the
/// one-dimensional weighted sum.
int micro_mode_cutoff(double eps, double s);

/// S = N eps^{2s+d} E||rho_eps - (2pi)^{-d}||^2_{H^s} for N uniform i.i.d.
/// particles, estimated over replicas; replica r uses replica_seed(seed, r).
MicroScalingResult micro_scaling_statistic(std::size_t count, double eps, double s, int dim,
                                           int replicas, std::uint64_t seed, int threads = 1);

/// eps^{2s+d} sum_{j != 0} (1+|j|^2)^s |w(j)|^2, the exact value of the centred statistic.
double micro_scaling_exact(double eps, double s, int dim);

}  // namespace ridk
