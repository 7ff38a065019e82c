#include "ridk/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ridk/errors.hpp"

namespace ridk::specfun {

namespace {

void require_positive_argument(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("Bessel ratio argument must be finite and positive, got " +
                      std::to_string(x));
  }
}

void require_order(int order) {
  if (order < 0) throw DomainError("Bessel order must be non-negative");
}

// Depth at which the backward sweep starts.  Each backward step multiplies the
// error of the starting value by r_k^2 ~ exp(-(2k+1)/x), so beyond sqrt(64 x)
// extra levels the starting guess is forgotten to far below rounding.
int sweep_depth(int top, double x) {
  return top + 32 + static_cast<int>(std::ceil(std::sqrt(64.0 * x)));
}

}  // namespace

std::vector<double> consecutive_ratio_table(int count, double x) {
  require_positive_argument(x);
  if (count <= 0) return {};

  const int top = count - 1;
  const int depth = sweep_depth(top, x);

  // Continued fraction r_k = 1 / (a + r_{k+1}), a = 2(k+1)/x, evaluated
  // bottom-up.  Near r = 1 (large x) it is carried in the complement
  // e = 1 - r, e_k = (a - e') / (1 + a - e'), which keeps full relative
  // precision there.  Starting value: the large-order asymptote
  // r = x / (n + sqrt(n^2 + x^2)).
  const double n = depth + 1.0;
  const double h = std::hypot(n, x);
  double r = x / (n + h);
  double e = (n + n * n / (h + x)) / (n + h);
  std::vector<double> ratios(static_cast<std::size_t>(count));
  for (int k = depth - 1; k >= 0; --k) {
    const double a = 2.0 * (k + 1) / x;
    if (r < 0.5) {
      r = 1.0 / (a + r);
      e = 1.0 - r;
    } else {
      const double gap = a - e;
      e = gap / (1.0 + gap);
      r = 1.0 - e;
    }
    if (k <= top) ratios[static_cast<std::size_t>(k)] = r;
  }
  return ratios;
}

std::vector<double> bessel_ratio_table(int max_order, double x) {
  require_order(max_order);
  require_positive_argument(x);
  std::vector<double> table(static_cast<std::size_t>(max_order) + 1, 0.0);
  table[0] = 1.0;
  if (max_order == 0) return table;

  const auto r = consecutive_ratio_table(max_order, x);
  double product = 1.0;
  for (int j = 1; j <= max_order; ++j) {
    product *= r[static_cast<std::size_t>(j - 1)];
    if (product < kRatioFlush) break;  // rest stays zero
    table[static_cast<std::size_t>(j)] = product;
  }
  return table;
}

double bessel_ratio(int order, double x) {
  require_order(order);
  require_positive_argument(x);
  if (order == 0) return 1.0;
  return bessel_ratio_table(order, x).back();
}

double consecutive_ratio(int order, double x) {
  require_order(order);
  require_positive_argument(x);
  if (x < 1.0) {
    throw RangeError("consecutive_ratio is only validated for x >= 1");
  }
  return consecutive_ratio_table(order + 1, x).back();
}

double scaled_bessel_i0(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("scaled_bessel_i0 needs finite x >= 0");
  }
  if (x < 50.0) {
    // Power series sum (x^2/4)^k / (k!)^2; all terms positive.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // Large-argument expansion; terms are all positive and decrease until
  // k ~ 2x, long after they fall below rounding for x >= 50.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd / (8.0 * k * x);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double kernel_normalisation(double eps) {
  if (!std::isfinite(eps) || eps <= 0.0) {
    throw DomainError("kernel width must be finite and positive");
  }
  return 2.0 * std::numbers::pi * scaled_bessel_i0(1.0 / (eps * eps));
}

}  // namespace ridk::specfun
