#pragma once

#include <span>
#include <vector>

namespace ridk {

/// Width and dimension of the separable von Mises kernel
///   w_eps(x) = Z_eps^{-d} exp(-sum_l sin^2(x_l/2) / (eps^2/2))
/// on the torus [0, 2pi)^d.  The one-dimensional normalisation Z_eps is
/// computed once at construction.
class KernelSpec {
 public:
  KernelSpec(double eps, int dim);

  double eps() const noexcept { return eps_; }
  int dim() const noexcept { return dim_; }
  double normalisation() const noexcept { return z_; }

  /// Argument of the Bessel ratios giving the Fourier coefficients: 1/eps^2.
  double bessel_argument() const noexcept { return 1.0 / (eps_ * eps_); }

 private:
  double eps_;
  int dim_;
  double z_;
};

/// One axis factor Z_eps^{-1} exp(-sin^2(x/2)/(eps^2/2)).
double evaluate_kernel_1d(double x, const KernelSpec& spec);

/// w_eps(x); x must have spec.dim() components.
double evaluate_kernel(std::span<const double> x, const KernelSpec& spec);

/// (2pi)^{-d} int w_eps(x) e^{-i j.x} dx = (2pi)^{-d} prod_l I_{|j_l|}(1/eps^2)/I_0(1/eps^2).
double kernel_fourier_coefficient(std::span<const int> j, const KernelSpec& spec);

/// Per-axis factors I_j(1/eps^2)/I_0(1/eps^2) for j = 0..max_order.  The full
/// coefficient is (2pi)^{-d} times the product of these over the axes.
std::vector<double> kernel_axis_multipliers(int max_order, double eps);

/// |w_eps(x1-q) w_eps(x2-q) - w_{sqrt2 eps}(x1-x2) w_{eps/sqrt2}((x1+x2)/2 - q)|.
double multiplication_rule_residual(std::span<const double> x1, std::span<const double> x2,
                                    std::span<const double> q, const KernelSpec& spec);

}  // namespace ridk
