#include "ridk/propagator.hpp"

#include <cmath>
#include <vector>

#include "ridk/errors.hpp"

namespace ridk {

void WaveParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("wave weight c must be non-negative");
}

void propagate_mode(Complex& rho, std::span<Complex> momentum, std::span<const double> k,
                    double t, const WaveParams& params) {
  if (!(t >= 0.0)) throw DomainError("propagation time must be non-negative");
  if (momentum.size() != k.size()) throw SizeMismatchError("momentum and wave vector sizes differ");
  if (t == 0.0) return;
  const double g = params.gamma;
  const double damp = std::exp(-g * t);

  double k2 = 0.0;
  for (double kl : k) k2 += kl * kl;
  if (k2 == 0.0) {
    for (auto& m : momentum) m *= damp;
    return;
  }
  const double kn = std::sqrt(k2);

  // Longitudinal part a = khat . j; the transverse remainder only decays.
  Complex a = 0.0;
  for (std::size_t l = 0; l < k.size(); ++l) a += (k[l] / kn) * momentum[l];

  // e^{Mt} = e^{-gt/2} [C I + S (M + g/2 I)] for M = [[0, -i|k|], [-ic|k|, -g]],
  // with C = cosh(qt), S = sinh(qt)/q and q^2 = g^2/4 - c|k|^2.
  const double disc = g * g - 4.0 * params.c * k2;
  double ec = 0.0;  // e^{-gt/2} C
  double es = 0.0;  // e^{-gt/2} S
  if (std::abs(disc) < kDoubleRootTolerance * g * g) {
    const double e = std::exp(-0.5 * g * t);
    ec = e;
    es = e * t;
  } else if (disc > 0.0) {
    const double q = 0.5 * std::sqrt(disc);
    const double up = std::exp((q - 0.5 * g) * t);
    const double down = std::exp((-q - 0.5 * g) * t);
    ec = 0.5 * (up + down);
    es = 0.5 * (up - down) / q;
  } else {
    const double w = 0.5 * std::sqrt(-disc);
    const double e = std::exp(-0.5 * g * t);
    ec = e * std::cos(w * t);
    es = e * std::sin(w * t) / w;
  }

  const Complex i(0.0, 1.0);
  const Complex rho_new = (ec + 0.5 * g * es) * rho - i * kn * es * a;
  const Complex a_new = -i * params.c * kn * es * rho + (ec - 0.5 * g * es) * a;

  for (std::size_t l = 0; l < k.size(); ++l) {
    const double khat = k[l] / kn;
    const Complex transverse = momentum[l] - khat * a;
    momentum[l] = damp * transverse + khat * a_new;
  }
  rho = rho_new;
}

void propagator_apply(SpectralPair& state, double t, const WaveParams& params) {
  params.validate();
  if (!(t >= 0.0)) throw DomainError("propagation time must be non-negative");
  if (t == 0.0) return;
  const auto& grid = state.grid();
  const auto d = static_cast<std::size_t>(grid.dim());
  std::vector<int> mode(d);
  std::vector<double> k(d);
  std::vector<Complex> j(d);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    grid.mode(idx, mode);
    for (std::size_t l = 0; l < d; ++l) {
      k[l] = mode[l] == -grid.points() / 2 ? 0.0 : static_cast<double>(mode[l]);
      j[l] = state.momentum[l][idx];
    }
    Complex rho = state.rho[idx];
    propagate_mode(rho, j, k, t, params);
    if (idx != 0) state.rho[idx] = rho;
    for (std::size_t l = 0; l < d; ++l) state.momentum[l][idx] = j[l];
  }
  state.time += t;
}

SpectralPair propagate(SpectralPair state, double t, const WaveParams& params) {
  propagator_apply(state, t, params);
  return state;
}

}  // namespace ridk
