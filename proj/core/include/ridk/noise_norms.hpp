#pragma once

#include "ridk/fields.hpp"
#include "ridk/regularisation.hpp"

namespace ridk {

struct NoiseNormParams {
  double particles = 1000.0;  ///< N
  double eps = 0.1;
  double s = 0.55;
  double sigma = 1.0;
  int jmax = 0;  ///< per-axis truncation; 0 selects it from the tail policy
};

/// Squared Hilbert-Schmidt norm of the multiplication-by-v noise operator,
///   d sigma^2 / N * sum_j alpha_{j,s} ||v f_{j,s}||^2_{H^s}
/// = d sigma^2 / N * sum_k |v_k|^2 sum_j lambda_j (1 + |k+j|^2)^s,
/// where v is a field on the grid.  Throws TruncationError if jmax is
/// supplied and leaves a non-negligible tail.
double noise_operator_norm2(const SpectralField& v, const NoiseNormParams& params);

/// noise_operator_norm2 with v = h_delta(rho).
double noise_hs_norm(const ScalarField& rho, const RegularisedSqrt& h, const NoiseNormParams& params);

/// ||B(u1) - B(u2)||_{L2^0(W^s)} / ||u1 - u2||_{H^s}.  Throws DomainError if
/// the inputs coincide.
double noise_lipschitz_probe(const ScalarField& u1, const ScalarField& u2, const RegularisedSqrt& h,
                             const NoiseNormParams& params);

}  // namespace ridk
