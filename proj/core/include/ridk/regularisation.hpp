#pragma once

#include <vector>

#include "ridk/fields.hpp"

namespace ridk {

struct RegularisationSpec {
  double delta = 0.1;
  int order = 3;  ///< number of continuous derivatives, ceil(d/2) + 2

  static RegularisationSpec for_dimension(double delta, int dim);
  void validate() const;
};

/// Smooth, even, strictly positive replacement for sqrt|z|.
///
/// For |z| >= delta/2 it is sqrt|z|.  Inside, with y = z^2 and Y = (delta/2)^2,
/// it is sqrt(P(y)) where P is the degree-(m+1) polynomial
///   P(y) = sum_{n<=m} t_n (y - Y)^n + b (Y - y)^{m+1},
/// t_n the Taylor coefficients of sqrt(y) at Y, and b chosen so P(0) = delta/4.
/// P matches sqrt(y) to m derivatives at Y, which makes the blend C^m in z.
class RegularisedSqrt {
 public:
  explicit RegularisedSqrt(RegularisationSpec spec);

  const RegularisationSpec& spec() const noexcept { return spec_; }
  double operator()(double z) const noexcept;
  /// k-th derivative at z (k >= 0), analytic on each piece.
  double derivative(double z, int k) const;
  /// Taylor coefficients h^{(n)}(z)/n! for n = 0..count-1.
  std::vector<double> taylor(double z, int count) const;

  ScalarField apply(const ScalarField& u) const;

 private:
  RegularisationSpec spec_;
  double y_junction_;
  std::vector<double> shifted_;  // coefficients of P in powers of (y - Y)
};

double h_delta(double z, const RegularisationSpec& spec);

}  // namespace ridk
