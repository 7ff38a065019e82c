#include "ridk/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ridk/errors.hpp"
#include "ridk/parallel.hpp"
#include "ridk/spectrum.hpp"
#include "ridk/specfun.hpp"

namespace ridk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void kick(ParticleEnsemble& ensemble, const Potential& potential, double h) {
  if (std::holds_alternative<ZeroPotential>(potential)) return;
  const auto force = interaction_force(ensemble, potential);
  auto p = ensemble.momenta();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += h * force[i];
}

void drift(ParticleEnsemble& ensemble, double h) {
  auto q = ensemble.positions();
  const auto p = ensemble.momenta();
  for (std::size_t i = 0; i < q.size(); ++i) q[i] += h * p[i];
}

}  // namespace

void LangevinParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be non-negative");
  if (const auto* c = std::get_if<CosinePotential>(&potential); c && !std::isfinite(c->u0)) {
    throw DomainError("potential amplitude must be finite");
  }
}

double wrap_angle(double x) noexcept {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

ParticleEnsemble::ParticleEnsemble(int dim, std::vector<double> positions,
                                   std::vector<double> momenta)
    : dim_(dim), q_(std::move(positions)), p_(std::move(momenta)) {
  if (dim < 1) throw DomainError("dimension must be at least 1");
  if (q_.size() != p_.size() || q_.size() % static_cast<std::size_t>(dim) != 0) {
    throw SizeMismatchError("positions and momenta must both be N x d");
  }
  wrap();
}

ParticleEnsemble::ParticleEnsemble(int dim, std::size_t count)
    : ParticleEnsemble(dim, std::vector<double>(count * static_cast<std::size_t>(std::max(dim, 1))),
                       std::vector<double>(count * static_cast<std::size_t>(std::max(dim, 1)))) {}

void ParticleEnsemble::wrap() noexcept {
  for (auto& x : q_) x = wrap_angle(x);
}

std::vector<double> interaction_force(const ParticleEnsemble& ensemble, const Potential& potential) {
  const std::size_t n = ensemble.size();
  const int d = ensemble.dim();
  std::vector<double> force(n * static_cast<std::size_t>(d), 0.0);
  const auto* cosine = std::get_if<CosinePotential>(&potential);
  if (cosine == nullptr || n == 0) return force;

  // -grad U(q_i - q_j) along l is u0 sin(q_il - q_jl).
  for (int l = 0; l < d; ++l) {
    double sin_sum = 0.0;
    double cos_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sin_sum += std::sin(ensemble.q(j, l));
      cos_sum += std::cos(ensemble.q(j, l));
    }
    const double sin_mean = sin_sum / static_cast<double>(n);
    const double cos_mean = cos_sum / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double qi = ensemble.q(i, l);
      force[i * d + l] = cosine->u0 * (std::sin(qi) * cos_mean - std::cos(qi) * sin_mean);
    }
  }
  return force;
}

void step_langevin(ParticleEnsemble& ensemble, const LangevinParams& params, double dt, Rng& rng) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
  params.validate();

  kick(ensemble, params.potential, 0.5 * dt);
  drift(ensemble, 0.5 * dt);

  const double decay = std::exp(-params.gamma * dt);
  const double spread =
      params.sigma * std::sqrt(-std::expm1(-2.0 * params.gamma * dt) / (2.0 * params.gamma));
  std::normal_distribution<double> normal;
  for (auto& p : ensemble.momenta()) p = decay * p + spread * normal(rng);

  drift(ensemble, 0.5 * dt);
  ensemble.wrap();
  kick(ensemble, params.potential, 0.5 * dt);
}

AxisSampler::AxisSampler() : cdf_{0.0, 1.0} {}

AxisSampler::AxisSampler(std::function<double(double)> density, int table_points) {
  if (table_points < 2) throw DomainError("sampler table needs at least two points");
  const double h = kTwoPi / table_points;
  cdf_.assign(static_cast<std::size_t>(table_points) + 1, 0.0);
  double previous = density(0.0);
  if (previous < 0.0) throw DomainError("density must be non-negative");
  for (int n = 1; n <= table_points; ++n) {
    const double value = density(n * h);
    if (value < 0.0 || !std::isfinite(value)) throw DomainError("density must be non-negative");
    cdf_[static_cast<std::size_t>(n)] = cdf_[static_cast<std::size_t>(n) - 1] + 0.5 * h * (previous + value);
    previous = value;
  }
  const double total = cdf_.back();
  if (!(total > 0.0)) throw DomainError("density has zero mass");
  for (auto& c : cdf_) c /= total;
}

double AxisSampler::quantile(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return 0.0;
  if (it == cdf_.end()) return wrap_angle(kTwoPi);
  const auto n = static_cast<std::size_t>(it - cdf_.begin()) - 1;
  const double h = kTwoPi / static_cast<double>(cdf_.size() - 1);
  const double span = cdf_[n + 1] - cdf_[n];
  const double frac = span > 0.0 ? (u - cdf_[n]) / span : 0.0;
  return wrap_angle((static_cast<double>(n) + frac) * h);
}

double AxisSampler::operator()(Rng& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  return quantile(uniform(rng));
}

ParticleEnsemble sample_ensemble(std::size_t count, int dim, const AxisSampler& axis,
                                 double momentum_variance, Rng& rng) {
  if (momentum_variance < 0.0) throw DomainError("momentum variance must be non-negative");
  ParticleEnsemble ensemble(dim, count);
  const double sd = std::sqrt(momentum_variance);
  std::normal_distribution<double> normal;
  auto q = ensemble.positions();
  auto p = ensemble.momenta();
  const auto d = static_cast<std::size_t>(dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t l = 0; l < d; ++l) q[i * d + l] = axis(rng);
    for (std::size_t l = 0; l < d; ++l) p[i * d + l] = sd * normal(rng);
  }
  return ensemble;
}

SpectralPair empirical_fields(const ParticleEnsemble& ensemble, const KernelSpec& spec,
                              const TorusGrid& grid) {
  const int d = grid.dim();
  if (ensemble.dim() != d || spec.dim() != d) {
    throw SizeMismatchError("ensemble, kernel and grid dimensions differ");
  }
  const int m = grid.points();
  const auto mu = static_cast<std::size_t>(m);
  const std::size_t n = ensemble.size();
  if (n == 0) throw DomainError("empty ensemble");

  // Per-axis multipliers w(k) indexed by grid axis index (Nyquist zeroed).
  const auto ratios = specfun::bessel_ratio_table(m / 2, spec.bessel_argument());
  std::vector<double> axis_weight(mu);
  for (int a = 0; a < m; ++a) {
    const int k = grid.wavenumber(a);
    axis_weight[static_cast<std::size_t>(a)] = k == -m / 2 ? 0.0 : ratios[static_cast<std::size_t>(std::abs(k))];
  }

  SpectralPair out(grid);
  std::vector<Complex> phases(mu * static_cast<std::size_t>(d));
  std::vector<Complex> mode_phase(grid.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (int l = 0; l < d; ++l) {
      Complex* row = phases.data() + static_cast<std::size_t>(l) * mu;
      row[0] = 1.0;
      for (int k = 1; k < m / 2; ++k) {
        row[k] = std::polar(1.0, -k * ensemble.q(i, l));
        row[m - k] = std::conj(row[k]);
      }
      row[m / 2] = 0.0;
    }
    // Tensor product of the per-axis phases.
    std::size_t stride = 1;
    mode_phase[0] = 1.0;
    for (int l = d - 1; l >= 0; --l) {
      const Complex* row = phases.data() + static_cast<std::size_t>(l) * mu;
      for (std::size_t a = mu - 1; a + 1 > 0; --a) {
        for (std::size_t r = 0; r < stride; ++r) mode_phase[a * stride + r] = row[a] * mode_phase[r];
      }
      stride *= mu;
    }
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      out.rho[idx] += mode_phase[idx];
      for (int l = 0; l < d; ++l) out.momentum[static_cast<std::size_t>(l)][idx] += ensemble.p(i, l) * mode_phase[idx];
    }
  }

  const double scale = std::pow(kTwoPi, -d) / static_cast<double>(n);
  std::vector<int> axes(static_cast<std::size_t>(d));
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    grid.unflatten(idx, axes);
    double w = scale;
    for (int a : axes) w *= axis_weight[static_cast<std::size_t>(a)];
    out.rho[idx] *= w;
    for (auto& c : out.momentum) c[idx] *= w;
  }
  // The zero mode is exactly (2pi)^{-d}; set it without rounding.
  out.rho[0] = std::pow(kTwoPi, -d);
  return out;
}

PairState empirical_fields_direct(const ParticleEnsemble& ensemble, const KernelSpec& spec,
                                  const TorusGrid& grid) {
  const int d = grid.dim();
  if (ensemble.dim() != d || spec.dim() != d) {
    throw SizeMismatchError("ensemble, kernel and grid dimensions differ");
  }
  const std::size_t n = ensemble.size();
  PairState out(grid);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> diff(static_cast<std::size_t>(d));
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    grid.coordinates(idx, x);
    for (std::size_t i = 0; i < n; ++i) {
      for (int l = 0; l < d; ++l) diff[static_cast<std::size_t>(l)] = x[static_cast<std::size_t>(l)] - ensemble.q(i, l);
      const double w = evaluate_kernel(diff, spec);
      out.rho[idx] += w;
      for (int l = 0; l < d; ++l) out.momentum[static_cast<std::size_t>(l)][idx] += w * ensemble.p(i, l);
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  out.rho *= inv;
  for (auto& m : out.momentum) m *= inv;
  return out;
}

int micro_mode_cutoff(double eps, double s) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double x = 1.0 / (eps * eps);
  int cap = static_cast<int>(std::ceil(8.0 / eps)) + 16;
  for (int attempt = 0; attempt < 8; ++attempt, cap *= 2) {
    const auto r = specfun::bessel_ratio_table(cap, x);
    double running = 1.0;
    for (int j = 1; j <= cap; ++j) {
      const double rj = r[static_cast<std::size_t>(j)];
      const double term = rj * rj * std::pow(1.0 + double(j) * j, s);
      running += 2.0 * term;
      if (term < 1e-14 * running) return j;
    }
  }
  throw TruncationError("micro statistic: mode cutoff not found", cap);
}

double micro_scaling_exact(double eps, double s, int dim) {
  if (dim < 1) throw DomainError("dimension must be at least 1");
  const int cutoff = micro_mode_cutoff(eps, s);
  auto r = specfun::bessel_ratio_table(cutoff, 1.0 / (eps * eps));
  for (auto& v : r) v *= v;
  const double sum = lattice_weighted_sum(r, s, dim) - 1.0;
  return std::pow(eps, 2.0 * s + dim) * std::pow(kTwoPi, -2.0 * dim) * sum;
}

namespace {

// N eps^{2s+d} sum_{j != 0} (1+|j|^2)^s |w(j)|^2 |phi_N(j)|^2 for one sample.
double micro_replica(std::size_t count, int dim, int cutoff, std::span<const double> ratio2,
                     double s, double prefactor, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  std::vector<double> q(count * static_cast<std::size_t>(dim));
  for (auto& x : q) x = uniform(rng);

  if (dim == 1) {
    std::vector<Complex> phi(static_cast<std::size_t>(cutoff) + 1, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      const Complex z = std::polar(1.0, -q[i]);
      Complex w = z;
      for (int j = 1; j <= cutoff; ++j) {
        phi[static_cast<std::size_t>(j)] += w;
        w *= z;
      }
    }
    double sum = 0.0;
    const double inv_n2 = 1.0 / (static_cast<double>(count) * static_cast<double>(count));
    for (int j = 1; j <= cutoff; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      sum += 2.0 * std::pow(1.0 + double(j) * j, s) * ratio2[ju] * std::norm(phi[ju]) * inv_n2;
    }
    return prefactor * sum;
  }

  const auto side = static_cast<std::size_t>(2 * cutoff + 1);
  std::size_t box = 1;
  for (int l = 0; l < dim; ++l) box *= side;
  std::vector<Complex> phi(box, 0.0);
  std::vector<Complex> axis_phase(side * static_cast<std::size_t>(dim));
  std::vector<Complex> mode(box);
  for (std::size_t i = 0; i < count; ++i) {
    for (int l = 0; l < dim; ++l) {
      Complex* row = axis_phase.data() + static_cast<std::size_t>(l) * side;
      const double ql = q[i * dim + l];
      for (int j = -cutoff; j <= cutoff; ++j) row[j + cutoff] = std::polar(1.0, -j * ql);
    }
    std::size_t stride = 1;
    mode[0] = 1.0;
    for (int l = dim - 1; l >= 0; --l) {
      const Complex* row = axis_phase.data() + static_cast<std::size_t>(l) * side;
      for (std::size_t a = side - 1; a + 1 > 0; --a) {
        for (std::size_t r = 0; r < stride; ++r) mode[a * stride + r] = row[a] * mode[r];
      }
      stride *= side;
    }
    for (std::size_t idx = 0; idx < box; ++idx) phi[idx] += mode[idx];
  }
  double sum = 0.0;
  const double inv_n2 = 1.0 / (static_cast<double>(count) * static_cast<double>(count));
  const std::size_t centre = (box - 1) / 2;
  for (std::size_t idx = 0; idx < box; ++idx) {
    if (idx == centre) continue;
    std::size_t rest = idx;
    double norm2 = 0.0;
    double w2 = 1.0;
    for (int l = 0; l < dim; ++l) {
      const int j = static_cast<int>(rest % side) - cutoff;
      rest /= side;
      norm2 += double(j) * j;
      w2 *= ratio2[static_cast<std::size_t>(std::abs(j))];
    }
    if (w2 == 0.0) continue;
    sum += std::pow(1.0 + norm2, s) * w2 * std::norm(phi[idx]) * inv_n2;
  }
  return prefactor * sum;
}

}  // namespace

MicroScalingResult micro_scaling_statistic(std::size_t count, double eps, double s, int dim,
                                           int replicas, std::uint64_t seed, int threads) {
  if (replicas < 2) throw DomainError("micro statistic needs at least two replicas");
  if (count == 0) throw DomainError("particle count must be positive");
  if (dim < 1) throw DomainError("dimension must be at least 1");

  MicroScalingResult result;
  result.mode_cutoff = micro_mode_cutoff(eps, s);
  auto ratio2 = specfun::bessel_ratio_table(result.mode_cutoff, 1.0 / (eps * eps));
  for (auto& v : ratio2) v *= v;
  const double scale = static_cast<double>(count) * std::pow(eps, 2.0 * s + dim);
  const double prefactor = scale * std::pow(kTwoPi, -2.0 * dim);

  result.replicas.assign(static_cast<std::size_t>(replicas), 0.0);
  result.seeds.resize(static_cast<std::size_t>(replicas));
  for (int r = 0; r < replicas; ++r) {
    result.seeds[static_cast<std::size_t>(r)] = replica_seed(seed, static_cast<std::uint64_t>(r));
  }
  parallel_for(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
    Rng rng(result.seeds[r]);
    result.replicas[r] = micro_replica(count, dim, result.mode_cutoff, ratio2, s, prefactor, rng);
  });

  double mean = 0.0;
  for (double v : result.replicas) mean += v;
  mean /= replicas;
  double var = 0.0;
  for (double v : result.replicas) var += (v - mean) * (v - mean);
  var /= (replicas - 1);
  result.centred = mean;
  result.centred_stderr = std::sqrt(var / replicas);
  result.uncentred = mean + prefactor;
  return result;
}

}  // namespace ridk
