#include "ridk/kernel.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "ridk/errors.hpp"
#include "ridk/specfun.hpp"

namespace ridk {

KernelSpec::KernelSpec(double eps, int dim) : eps_(eps), dim_(dim), z_(0.0) {
  if (!std::isfinite(eps) || eps <= 0.0) throw DomainError("kernel width must be positive");
  if (dim < 1) throw DomainError("kernel dimension must be at least 1");
  z_ = specfun::kernel_normalisation(eps);
}

double evaluate_kernel_1d(double x, const KernelSpec& spec) {
  const double s = std::sin(0.5 * x);
  const double e = spec.eps();
  return std::exp(-2.0 * s * s / (e * e)) / spec.normalisation();
}

double evaluate_kernel(std::span<const double> x, const KernelSpec& spec) {
  if (static_cast<int>(x.size()) != spec.dim()) {
    throw SizeMismatchError("point dimension does not match kernel dimension");
  }
  double exponent = 0.0;
  for (double xl : x) {
    const double s = std::sin(0.5 * xl);
    exponent += s * s;
  }
  const double e = spec.eps();
  return std::exp(-2.0 * exponent / (e * e)) * std::pow(spec.normalisation(), -spec.dim());
}

std::vector<double> kernel_axis_multipliers(int max_order, double eps) {
  return specfun::bessel_ratio_table(max_order, 1.0 / (eps * eps));
}

double kernel_fourier_coefficient(std::span<const int> j, const KernelSpec& spec) {
  if (static_cast<int>(j.size()) != spec.dim()) {
    throw SizeMismatchError("lattice vector dimension does not match kernel dimension");
  }
  double value = std::pow(2.0 * std::numbers::pi, -spec.dim());
  for (int jl : j) value *= specfun::bessel_ratio(std::abs(jl), spec.bessel_argument());
  return value;
}

double multiplication_rule_residual(std::span<const double> x1, std::span<const double> x2,
                                    std::span<const double> q, const KernelSpec& spec) {
  const auto d = static_cast<std::size_t>(spec.dim());
  if (x1.size() != d || x2.size() != d || q.size() != d) {
    throw SizeMismatchError("multiplication_rule_residual: dimension mismatch");
  }
  const KernelSpec wide(std::numbers::sqrt2 * spec.eps(), spec.dim());
  const KernelSpec narrow(spec.eps() / std::numbers::sqrt2, spec.dim());

  std::vector<double> a(d), b(d), diff(d), mid(d);
  for (std::size_t l = 0; l < d; ++l) {
    a[l] = x1[l] - q[l];
    b[l] = x2[l] - q[l];
    diff[l] = x1[l] - x2[l];
    mid[l] = 0.5 * (x1[l] + x2[l]) - q[l];
  }
  const double lhs = evaluate_kernel(a, spec) * evaluate_kernel(b, spec);
  const double rhs = evaluate_kernel(diff, wide) * evaluate_kernel(mid, narrow);
  return std::abs(lhs - rhs);
}

}  // namespace ridk
