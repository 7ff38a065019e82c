#include "ridk/noise_norms.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "ridk/errors.hpp"
#include "ridk/specfun.hpp"
#include "ridk/spectrum.hpp"

namespace ridk {

namespace {

void validate(const NoiseNormParams& p) {
  if (!(p.particles > 0.0)) throw DomainError("particle count must be positive");
  if (!(p.eps > 0.0)) throw DomainError("eps must be positive");
  if (!(p.s >= 0.0)) throw DomainError("Sobolev index must be non-negative");
  if (!(p.sigma >= 0.0)) throw DomainError("sigma must be non-negative");
  if (p.jmax < 0) throw DomainError("jmax must be non-negative");
}

int truncation(const NoiseNormParams& p) {
  if (p.jmax == 0) return suggest_jmax(p.eps, p.s);
  // Reuse the trace routine's tail check, which throws with a suggestion.
  (void)sobolev_trace(p.s, p.eps, 1, p.jmax);
  return p.jmax;
}

}  // namespace

double noise_operator_norm2(const SpectralField& v, const NoiseNormParams& params) {
  validate(params);
  const auto& grid = v.grid();
  const int d = grid.dim();
  const int jmax = truncation(params);
  const auto lambda = specfun::bessel_ratio_table(jmax, 1.0 / (2.0 * params.eps * params.eps));

  const auto side = static_cast<std::size_t>(2 * jmax + 1);
  std::size_t box = 1;
  for (int l = 0; l < d; ++l) box *= side;

  std::vector<int> k(static_cast<std::size_t>(d));
  std::vector<int> j(static_cast<std::size_t>(d));
  double total = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double weight = std::norm(v[idx]);
    if (weight == 0.0) continue;
    grid.mode(idx, k);
    double inner = 0.0;
    for (std::size_t b = 0; b < box; ++b) {
      std::size_t rest = b;
      double lam = 1.0;
      double norm2 = 0.0;
      for (int l = d - 1; l >= 0; --l) {
        const int jl = static_cast<int>(rest % side) - jmax;
        rest /= side;
        lam *= lambda[static_cast<std::size_t>(std::abs(jl))];
        const double kj = static_cast<double>(k[static_cast<std::size_t>(l)] + jl);
        norm2 += kj * kj;
      }
      if (lam == 0.0) continue;
      inner += lam * std::pow(1.0 + norm2, params.s);
    }
    total += weight * inner;
  }
  return d * params.sigma * params.sigma / params.particles * total;
}

double noise_hs_norm(const ScalarField& rho, const RegularisedSqrt& h, const NoiseNormParams& params) {
  return noise_operator_norm2(transform(h.apply(rho)), params);
}

double noise_lipschitz_probe(const ScalarField& u1, const ScalarField& u2, const RegularisedSqrt& h,
                             const NoiseNormParams& params) {
  if (!(u1.grid() == u2.grid())) throw SizeMismatchError("probe inputs live on different grids");
  const double denom = hs_norm(u1 - u2, params.s);
  if (denom == 0.0) throw DomainError("Lipschitz probe needs distinct inputs");
  const auto diff = h.apply(u1) - h.apply(u2);
  return std::sqrt(noise_operator_norm2(transform(diff), params)) / denom;
}

}  // namespace ridk
