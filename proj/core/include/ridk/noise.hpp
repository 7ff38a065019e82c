#pragma once

#include <vector>

#include "ridk/fields.hpp"
#include "ridk/rng.hpp"

namespace ridk {

/// Default resolution requirement: the noise eigenvalue at the grid Nyquist
/// order must fall below this.
inline constexpr double kNoiseResolution = 1e-8;

/// Smallest power-of-two M with lambda_{M/2}(eps) < tolerance.
int suggest_grid_points(double eps, double tolerance = kNoiseResolution);

/// d independent increments of the Q-Wiener process with covariance
/// operator P_{sqrt2 eps}, i.e. Delta t * w_{sqrt2 eps}(x - y) in space.
/// Coefficient of mode k: complex Gaussian with E|c_k|^2 = dt lambda_k (2pi)^{-d},
/// Hermitian across k and -k, real at k = 0, zero on Nyquist modes.
class NoiseSampler {
 public:
  /// Throws ResolutionError if lambda_{M/2}(eps) >= resolution_tolerance.
  NoiseSampler(const TorusGrid& grid, double eps, double resolution_tolerance = kNoiseResolution);

  const TorusGrid& grid() const noexcept { return grid_; }
  double eps() const noexcept { return eps_; }

  /// Per-mode coefficient variance for unit dt.
  std::span<const double> mode_variance() const noexcept { return variance_; }

  /// One increment over dt: d spectral fields.  Draw order: component by
  /// component, modes in flat order, one complex pair per conjugate pair.
  std::vector<SpectralField> sample(double dt, Rng& rng) const;
  std::vector<ScalarField> sample_physical(double dt, Rng& rng) const;

 private:
  TorusGrid grid_;
  double eps_;
  std::vector<double> variance_;
};

/// Free-function form; the diagnostic index s is accepted for symmetry with
/// the basis expansion but does not enter: the weights (1+|j|^2)^s of the
/// eigenvalues cancel against the normalisation of the H^s basis.
std::vector<SpectralField> sample_noise_increment(double eps, double dt, const TorusGrid& grid,
                                                  Rng& rng, double s = 0.0,
                                                  double resolution_tolerance = kNoiseResolution);

}  // namespace ridk
