#pragma once

#include <vector>

/// Modified Bessel function ratios and the von Mises normalisation constant.
///
/// Only ratios of first-kind Bessel functions of integer order are ever
/// formed, so nothing here evaluates I_j(x) itself: the argument used by the
/// spectra, x = 1/(2 eps^2), overflows exp() long before eps gets small.
namespace ridk::specfun {

/// Ratios I_j/I_0 below this threshold are returned as exactly zero.
inline constexpr double kRatioFlush = 1e-300;

/// I_j(x) / I_0(x) for integer j >= 0 and finite x > 0.  Exactly 1 for j = 0.
/// Throws DomainError for bad arguments.
double bessel_ratio(int order, double x);

/// I_{j+1}(x) / I_j(x).  Validated for x >= 1 only (RangeError otherwise).
double consecutive_ratio(int order, double x);

/// Table of I_j(x)/I_0(x) for j = 0..max_order from a single backward sweep.
std::vector<double> bessel_ratio_table(int max_order, double x);

/// Table of I_{k+1}(x)/I_k(x) for k = 0..count-1, x > 0.
std::vector<double> consecutive_ratio_table(int count, double x);

/// exp(-x) I_0(x) for x >= 0.
double scaled_bessel_i0(double x);

/// Z_eps = integral over the circle of exp(-sin^2(y/2) / (eps^2/2)),
/// evaluated as 2 pi exp(-1/eps^2) I_0(1/eps^2).
double kernel_normalisation(double eps);

}  // namespace ridk::specfun
