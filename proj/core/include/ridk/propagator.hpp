#pragma once

#include <span>

#include "ridk/fields.hpp"

namespace ridk {

/// Linear damped-wave operator A(rho, j) = (-div j, -c grad rho - gamma j).
struct WaveParams {
  double gamma = 1.0;
  double c = 1.0;  ///< sigma^2 / (2 gamma)

  void validate() const;
};

/// Relative discriminant below which a mode is treated as a double root.
inline constexpr double kDoubleRootTolerance = 1e-10;

/// Exact e^{At} for a single Fourier mode with wave vector k.  `momentum`
/// holds the d momentum coefficients and is updated in place with rho.
void propagate_mode(Complex& rho, std::span<Complex> momentum, std::span<const double> k,
                    double t, const WaveParams& params);

/// e^{At} applied to every mode of the state.  Grid Nyquist components of a
/// wave vector are treated as zero, matching the spectral derivative.
void propagator_apply(SpectralPair& state, double t, const WaveParams& params);
SpectralPair propagate(SpectralPair state, double t, const WaveParams& params);

}  // namespace ridk
