#include "ridk/regularisation.hpp"

#include <cmath>

#include "ridk/errors.hpp"

namespace ridk {

namespace {

// binom(1/2, n)
double half_binomial(int n) {
  double c = 1.0;
  for (int i = 0; i < n; ++i) c *= (0.5 - i) / (i + 1);
  return c;
}

// Truncated product of two power series.
std::vector<double> series_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Power series of sqrt(q) given q with q[0] > 0.
std::vector<double> series_sqrt(const std::vector<double>& q) {
  std::vector<double> g(q.size(), 0.0);
  g[0] = std::sqrt(q[0]);
  for (std::size_t n = 1; n < q.size(); ++n) {
    double acc = q[n];
    for (std::size_t k = 1; k < n; ++k) acc -= g[k] * g[n - k];
    g[n] = acc / (2.0 * g[0]);
  }
  return g;
}

}  // namespace

RegularisationSpec RegularisationSpec::for_dimension(double delta, int dim) {
  if (dim < 1) throw DomainError("dimension must be at least 1");
  return {delta, (dim + 1) / 2 + 2};
}

void RegularisationSpec::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
  if (order < 1 || order > 16) throw DomainError("smoothness order must lie in [1, 16]");
}

RegularisedSqrt::RegularisedSqrt(RegularisationSpec spec) : spec_(spec) {
  spec_.validate();
  const int m = spec_.order;
  const double y0 = 0.25 * spec_.delta * spec_.delta;
  y_junction_ = y0;
  shifted_.assign(static_cast<std::size_t>(m) + 2, 0.0);
  double taylor_at_zero = 0.0;
  for (int n = 0; n <= m; ++n) {
    shifted_[static_cast<std::size_t>(n)] = half_binomial(n) * std::pow(y0, 0.5 - n);
    taylor_at_zero += shifted_[static_cast<std::size_t>(n)] * std::pow(-y0, n);
  }
  const double b = (0.25 * spec_.delta - taylor_at_zero) / std::pow(y0, m + 1);
  shifted_[static_cast<std::size_t>(m) + 1] = (m % 2 == 0 ? -b : b);
}

double RegularisedSqrt::operator()(double z) const noexcept {
  const double a = std::abs(z);
  if (a >= 0.5 * spec_.delta) return std::sqrt(a);
  const double u = z * z - y_junction_;
  double p = 0.0;
  for (auto it = shifted_.rbegin(); it != shifted_.rend(); ++it) p = p * u + *it;
  return std::sqrt(p);
}

std::vector<double> RegularisedSqrt::taylor(double z, int count) const {
  if (count < 1) throw DomainError("taylor: need at least one coefficient");
  const auto n = static_cast<std::size_t>(count);
  std::vector<double> out(n, 0.0);
  const double a = std::abs(z);
  if (a >= 0.5 * spec_.delta) {
    const double sign = z < 0.0 ? -1.0 : 1.0;
    for (int k = 0; k < count; ++k) {
      out[static_cast<std::size_t>(k)] = half_binomial(k) * std::pow(sign, k) * std::pow(a, 0.5 - k);
    }
    return out;
  }
  std::vector<double> u(n, 0.0);
  u[0] = z * z - y_junction_;
  if (n > 1) u[1] = 2.0 * z;
  if (n > 2) u[2] = 1.0;
  std::vector<double> p(n, 0.0);
  for (auto it = shifted_.rbegin(); it != shifted_.rend(); ++it) {
    p = series_mul(p, u);
    p[0] += *it;
  }
  return series_sqrt(p);
}

double RegularisedSqrt::derivative(double z, int k) const {
  if (k < 0) throw DomainError("derivative order must be non-negative");
  const auto t = taylor(z, k + 1);
  double factorial = 1.0;
  for (int i = 2; i <= k; ++i) factorial *= i;
  return factorial * t[static_cast<std::size_t>(k)];
}

ScalarField RegularisedSqrt::apply(const ScalarField& u) const {
  ScalarField out(u.grid());
  for (std::size_t i = 0; i < u.grid().size(); ++i) out[i] = (*this)(u[i]);
  return out;
}

double h_delta(double z, const RegularisationSpec& spec) { return RegularisedSqrt(spec)(z); }

}  // namespace ridk
