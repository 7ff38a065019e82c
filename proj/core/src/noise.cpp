#include "ridk/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ridk/errors.hpp"
#include "ridk/specfun.hpp"

namespace ridk {

namespace {

double noise_argument(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
  return 1.0 / (2.0 * eps * eps);
}

}  // namespace

int suggest_grid_points(double eps, double tolerance) {
  const double x = noise_argument(eps);
  for (int m = 4; m <= (1 << 24); m *= 2) {
    if (specfun::bessel_ratio(m / 2, x) < tolerance) return m;
  }
  throw ResolutionError("no feasible grid size", 1 << 24);
}

NoiseSampler::NoiseSampler(const TorusGrid& grid, double eps, double resolution_tolerance)
    : grid_(grid), eps_(eps), variance_(grid.size(), 0.0) {
  const double x = noise_argument(eps);
  const auto ratios = specfun::bessel_ratio_table(grid.points() / 2, x);
  if (!(ratios.back() < resolution_tolerance)) {
    const int suggested = suggest_grid_points(eps, resolution_tolerance);
    throw ResolutionError("grid with M=" + std::to_string(grid.points()) +
                              " under-resolves the noise; need M >= " + std::to_string(suggested),
                          suggested);
  }
  const double base = std::pow(2.0 * std::numbers::pi, -grid.dim());
  std::vector<int> mode(static_cast<std::size_t>(grid.dim()));
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.is_nyquist(idx)) continue;
    grid.mode(idx, mode);
    double lambda = base;
    for (int k : mode) lambda *= ratios[static_cast<std::size_t>(std::abs(k))];
    variance_[idx] = lambda;
  }
}

std::vector<SpectralField> NoiseSampler::sample(double dt, Rng& rng) const {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  std::normal_distribution<double> normal;
  std::vector<SpectralField> out;
  out.reserve(static_cast<std::size_t>(grid_.dim()));
  for (int l = 0; l < grid_.dim(); ++l) {
    SpectralField field(grid_);
    for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
      if (variance_[idx] == 0.0 && grid_.is_nyquist(idx)) continue;
      const std::size_t conj = grid_.conjugate_index(idx);
      if (conj < idx) continue;
      const double v = dt * variance_[idx];
      if (conj == idx) {
        field[idx] = std::sqrt(v) * normal(rng);
      } else {
        const double sd = std::sqrt(0.5 * v);
        const double re = normal(rng);
        const double im = normal(rng);
        field[idx] = Complex(sd * re, sd * im);
        field[conj] = Complex(sd * re, -sd * im);
      }
    }
    out.push_back(std::move(field));
  }
  return out;
}

std::vector<ScalarField> NoiseSampler::sample_physical(double dt, Rng& rng) const {
  std::vector<ScalarField> out;
  for (const auto& f : sample(dt, rng)) out.push_back(inverse_transform(f));
  return out;
}

std::vector<SpectralField> sample_noise_increment(double eps, double dt, const TorusGrid& grid,
                                                  Rng& rng, double s, double resolution_tolerance) {
  if (s < 0.0) throw DomainError("Sobolev index must be non-negative");
  return NoiseSampler(grid, eps, resolution_tolerance).sample(dt, rng);
}

}  // namespace ridk
