#include "ridk/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "ridk/errors.hpp"
#include "ridk/specfun.hpp"

namespace ridk {

namespace {

constexpr double kTailTolerance = 1e-12;

double noise_argument(double eps) {
  if (!std::isfinite(eps) || eps <= 0.0) throw DomainError("eps must be positive");
  return 1.0 / (2.0 * eps * eps);
}

// Index of the first J >= 1 at which lambda_J (1+J^2)^s < tol * sum_{|j|<=J}, or -1.
int first_negligible_order(const std::vector<double>& table, double s) {
  double running = table[0];
  for (std::size_t j = 1; j < table.size(); ++j) {
    const double term = table[j] * std::pow(1.0 + static_cast<double>(j * j), s);
    running += 2.0 * term;
    if (term < kTailTolerance * running) return static_cast<int>(j);
  }
  return -1;
}

}  // namespace

EigenSpectrum::EigenSpectrum(double eps, int dim, int jmax)
    : eps_(eps), dim_(dim), jmax_(jmax) {
  if (dim < 1) throw DomainError("dimension must be at least 1");
  if (jmax < 0) throw DomainError("jmax must be non-negative");
  table_ = specfun::bessel_ratio_table(jmax, noise_argument(eps));
}

double EigenSpectrum::axis(int j) const noexcept {
  const int a = std::abs(j);
  return a > jmax_ ? 0.0 : table_[static_cast<std::size_t>(a)];
}

double EigenSpectrum::operator()(std::span<const int> j) const {
  if (static_cast<int>(j.size()) != dim_) throw SizeMismatchError("lattice vector dimension");
  double value = 1.0;
  for (int jl : j) value *= axis(jl);
  return value;
}

double EigenSpectrum::weight(std::span<const int> j, double s) const {
  double norm2 = 0.0;
  for (int jl : j) norm2 += static_cast<double>(jl) * jl;
  return std::pow(1.0 + norm2, s) * (*this)(j);
}

double axis_eigenvalue(int j, double eps) {
  return specfun::bessel_ratio(std::abs(j), noise_argument(eps));
}

double eigenvalue(std::span<const int> j, double eps) {
  double value = 1.0;
  for (int jl : j) value *= axis_eigenvalue(jl, eps);
  return value;
}

double axis_basis(int j, double x) {
  constexpr double pi = std::numbers::pi;
  if (j > 0) return std::cos(j * x) / std::sqrt(pi);
  if (j < 0) return std::sin(j * x) / std::sqrt(pi);
  return 1.0 / std::sqrt(2.0 * pi);
}

double basis_normalisation(int dim) {
  return std::pow(2.0 * std::numbers::pi, 0.5 * dim);
}

double basis_function(std::span<const int> j, double s, std::span<const double> x) {
  if (j.size() != x.size()) throw SizeMismatchError("basis_function: dimension mismatch");
  double value = basis_normalisation(static_cast<int>(j.size()));
  double norm2 = 0.0;
  for (std::size_t l = 0; l < j.size(); ++l) {
    value *= axis_basis(j[l], x[l]);
    norm2 += static_cast<double>(j[l]) * j[l];
  }
  return value * std::pow(1.0 + norm2, -0.5 * s);
}

int suggest_jmax(double eps, double s) {
  const double x = noise_argument(eps);
  int cap = static_cast<int>(std::ceil(10.0 / eps)) + 64;
  for (int attempt = 0; attempt < 8; ++attempt, cap *= 2) {
    const auto table = specfun::bessel_ratio_table(cap, x);
    const int j = first_negligible_order(table, s);
    if (j > 0) return j;
  }
  throw TruncationError("could not find a negligible truncation order", cap);
}

double lattice_weighted_sum(std::span<const double> axis, double s, int dim) {
  if (axis.empty()) return 0.0;
  const std::size_t jmax = axis.size() - 1;
  std::vector<double> by_radius{1.0};
  for (int l = 0; l < dim; ++l) {
    std::vector<double> next(by_radius.size() + jmax * jmax, 0.0);
    for (std::size_t n = 0; n < by_radius.size(); ++n) {
      const double base = by_radius[n];
      if (base == 0.0) continue;
      for (std::size_t j = 0; j <= jmax; ++j) {
        if (axis[j] == 0.0) break;
        next[n + j * j] += base * axis[j] * (j == 0 ? 1.0 : 2.0);
      }
    }
    by_radius = std::move(next);
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < by_radius.size(); ++n) {
    if (by_radius[n] != 0.0) sum += by_radius[n] * std::pow(1.0 + static_cast<double>(n), s);
  }
  return sum;
}

double sobolev_trace(double s, double eps, int dim, int jmax) {
  if (dim < 1) throw DomainError("dimension must be at least 1");
  if (s < 0.0) throw DomainError("Sobolev index must be non-negative");
  if (jmax < 1) throw DomainError("jmax must be at least 1");
  const auto lambda = specfun::bessel_ratio_table(jmax, noise_argument(eps));

  double weighted_1d = lambda[0];
  for (int j = 1; j <= jmax; ++j) {
    weighted_1d += 2.0 * lambda[static_cast<std::size_t>(j)] * std::pow(1.0 + double(j) * j, s);
  }
  const double tail = lambda.back() * std::pow(1.0 + double(jmax) * jmax, s);
  if (tail >= kTailTolerance * weighted_1d) {
    const int suggested = suggest_jmax(eps, s);
    throw TruncationError("sobolev_trace: truncation jmax=" + std::to_string(jmax) +
                              " leaves a non-negligible tail; try jmax=" +
                              std::to_string(suggested),
                          suggested);
  }

  return lattice_weighted_sum(lambda, s, dim);
}

double sobolev_trace(double s, double eps, int dim) {
  return sobolev_trace(s, eps, dim, suggest_jmax(eps, s));
}

double factorised_trace_bound(double s, double eps, int dim, int jmax) {
  const double weighted = sobolev_trace(s, eps, 1, jmax);
  const double plain = sobolev_trace(0.0, eps, 1, jmax);
  return std::pow(static_cast<double>(dim), s + 1.0) * weighted * std::pow(plain, dim - 1);
}

double bound_exponent(double alpha, double beta, double s, int dim) {
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0) || alpha + beta < 1.0 - 1e-12) {
    throw DomainError("bound_exponent: need alpha, beta in (0,1) with alpha + beta >= 1");
  }
  const double a = 2.0 * beta * (2.0 * s + 1.0);
  const double b = 2.0 * alpha * (2.0 * s + 1.0);
  const double c = 2.0 * alpha + 4.0 * beta * s;
  return std::max({a, b, c}) + (dim - 1);
}

double theta_critical(double s, int dim) { return 2.0 * s + dim; }

ExponentMinimum grid_minimise_bound_exponent(double s, int dim, double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  ExponentMinimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  for (int ia = 1; ia < n; ++ia) {
    for (int ib = 1; ib < n; ++ib) {
      if (ia + ib < n) continue;
      const double a = ia * step;
      const double b = ib * step;
      const double e = bound_exponent(a, b, s, dim);
      if (e < best.exponent) best = {a, b, e};
    }
  }
  return best;
}

}  // namespace ridk
