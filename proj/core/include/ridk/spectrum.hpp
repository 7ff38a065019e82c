#pragma once

#include <span>
#include <vector>

/// Eigenstructure of the noise covariance P_{sqrt2 eps} on the torus and the
/// Sobolev-weighted trace sums built from it.
///
/// Along one axis the eigenvalues are lambda_j = I_j(x)/I_0(x) with
/// x = 1/(2 eps^2); in d dimensions they multiply across axes.  The
/// eigenfunctions are products of the real trigonometric system
///   e_0 = (2pi)^{-1/2},  e_j = pi^{-1/2} cos(jx) (j>0),  e_j = pi^{-1/2} sin(jx) (j<0).
namespace ridk {

/// Regularity index s, optionally written as s = d/2 + eta.
struct SobolevIndex {
  double s = 0.0;

  static SobolevIndex from_eta(int dim, double eta) { return {0.5 * dim + eta}; }
  double eta(int dim) const noexcept { return s - 0.5 * dim; }
};

/// Per-axis eigenvalue table of P_{sqrt2 eps} truncated at jmax.
class EigenSpectrum {
 public:
  EigenSpectrum(double eps, int dim, int jmax);

  double eps() const noexcept { return eps_; }
  int dim() const noexcept { return dim_; }
  int jmax() const noexcept { return jmax_; }

  /// lambda_{|j|}; zero beyond the truncation.
  double axis(int j) const noexcept;
  std::span<const double> axis_table() const noexcept { return table_; }

  /// lambda_j = prod_l lambda_{j_l}.
  double operator()(std::span<const int> j) const;

  /// alpha_{j,s} = (1+|j|^2)^s lambda_j.
  double weight(std::span<const int> j, double s) const;

 private:
  double eps_;
  int dim_;
  int jmax_;
  std::vector<double> table_;
};

/// One-dimensional eigenvalue I_{|j|}(1/(2eps^2)) / I_0(1/(2eps^2)).
double axis_eigenvalue(int j, double eps);

/// prod_l axis_eigenvalue(j_l, eps).
double eigenvalue(std::span<const int> j, double eps);

/// e_j(x) of the real trigonometric system (L^2-orthonormal on the circle).
double axis_basis(int j, double x);

/// Normalisation making the product basis H^s-orthonormal under the
/// coefficient convention u_j = (2pi)^{-d} int u e^{-ij.x}: (2pi)^{d/2}.
double basis_normalisation(int dim);

/// f_{j,s}(x) = (2pi)^{d/2} prod_l e_{j_l}(x_l) (1+|j|^2)^{-s/2}.
double basis_function(std::span<const int> j, double s, std::span<const double> x);

/// Smallest per-axis truncation order at which the 1-d weighted tail
/// lambda_J (1+J^2)^s drops below 1e-12 of the running weighted sum.
int suggest_jmax(double eps, double s);

/// sum over j in {-J..J}^d of prod_l axis[|j_l|] (1+|j|^2)^s, with J = axis.size()-1,
/// accumulated by squared radius so the weight is evaluated once per radius.
double lattice_weighted_sum(std::span<const double> axis, double s, int dim);

/// sum over |j|_inf <= jmax of lambda_j (1+|j|^2)^s.  Throws TruncationError
/// if the truncation tail is not negligible.
double sobolev_trace(double s, double eps, int dim, int jmax);

/// sobolev_trace with jmax from suggest_jmax.
double sobolev_trace(double s, double eps, int dim);

/// d^{s+1} T_s T_0^{d-1}, with T_s the 1-d weighted trace; an upper bound for
/// the d-dimensional trace built from one-dimensional sums only.
double factorised_trace_bound(double s, double eps, int dim, int jmax);

/// Exponent of eps^{-1} on the right of the trace bound for an admissible
/// pair (alpha, beta): max{2b(2s+1), 2a(2s+1), 2a+4bs} + d - 1.
double bound_exponent(double alpha, double beta, double s, int dim);

/// theta_c(s) = 2s + d.
double theta_critical(double s, int dim);

struct ExponentMinimum {
  double alpha;
  double beta;
  double exponent;
};

/// Exhaustive search of bound_exponent over the admissible grid
/// {step, 2 step, ...} in (0,1)^2 with alpha + beta >= 1.
ExponentMinimum grid_minimise_bound_exponent(double s, int dim, double step = 0.01);

}  // namespace ridk
