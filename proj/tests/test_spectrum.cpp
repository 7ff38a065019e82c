#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ridk/errors.hpp"
#include "ridk/fields.hpp"
#include "ridk/kernel.hpp"
#include "ridk/spectrum.hpp"

using namespace ridk;
using oracle::kPi;

namespace {

std::vector<long double> oracle_axis(double eps, int jmax) {
  std::vector<long double> axis;
  for (int j = 0; j <= jmax; ++j) axis.push_back(oracle::boost_bessel_ratio(j, 1.0 / (2 * eps * eps)));
  return axis;
}

}  // namespace

TEST(Eigenvalue, ZeroModeIsOne) {
  for (int d : {1, 2, 3}) {
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    EXPECT_EQ(eigenvalue(zero, 0.05), 1.0);
  }
}

TEST(Eigenvalue, TwoDimensionalExample) {
  const std::array<int, 2> j{1, 1};
  EXPECT_NEAR(eigenvalue(j, 0.5), 0.486889, 1e-6);
  const double one_d = static_cast<double>(oracle::boost_bessel_ratio(1, 2.0));
  EXPECT_NEAR(eigenvalue(j, 0.5), one_d * one_d, 1e-15);
}

TEST(Eigenvalue, PaddingWithZerosAndSignSymmetry) {
  const std::array<int, 1> j1{4};
  const std::array<int, 3> j3{4, 0, 0};
  const std::array<int, 3> flipped{-4, 0, 0};
  EXPECT_EQ(eigenvalue(j1, 0.3), eigenvalue(j3, 0.3));
  EXPECT_EQ(eigenvalue(j3, 0.3), eigenvalue(flipped, 0.3));
  const std::array<int, 3> mixed{3, -2, 5};
  const std::array<int, 3> mixed_flip{-3, 2, -5};
  EXPECT_EQ(eigenvalue(mixed, 0.3), eigenvalue(mixed_flip, 0.3));
}

TEST(EigenSpectrum, TableInvariants) {
  const EigenSpectrum spec(0.1, 2, 80);
  EXPECT_EQ(spec.axis(0), 1.0);
  for (int j = 1; j <= 80; ++j) {
    EXPECT_GT(spec.axis(j), 0.0);
    EXPECT_LT(spec.axis(j), spec.axis(j - 1));
    EXPECT_EQ(spec.axis(-j), spec.axis(j));
  }
  EXPECT_EQ(spec.axis(81), 0.0);
  const std::array<int, 2> j{3, -4};
  EXPECT_DOUBLE_EQ(spec(j), spec.axis(3) * spec.axis(4));
  EXPECT_DOUBLE_EQ(spec.weight(j, 0.7), spec(j) * std::pow(26.0, 0.7));
}

TEST(BasisFunction, ConstantMode) {
  for (int d : {1, 2}) {
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    const std::vector<double> x(static_cast<std::size_t>(d), 1.3);
    EXPECT_NEAR(basis_function(zero, 0.55, x), 1.0, 1e-15);
  }
}

TEST(BasisFunction, UnitSobolevNorm) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(-12, 12);
  for (int d : {1, 2}) {
    const TorusGrid grid(d, 32);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<int> j(static_cast<std::size_t>(d));
      for (auto& v : j) v = pick(rng);
      for (double s : {0.0, 0.55, 1.3}) {
        const auto f = ScalarField::from_function(grid, [&](std::span<const double> x) { return basis_function(j, s, x); });
        EXPECT_NEAR(hs_norm(f, s), 1.0, 1e-8);
      }
    }
  }
}

TEST(BasisFunction, OrthogonalDistinctModes) {
  const TorusGrid grid(1, 32);
  const std::array<int, 1> a{3};
  const std::array<int, 1> b{-3};
  const auto fa = transform(ScalarField::from_function(grid, [&](std::span<const double> x) { return basis_function(a, 0.5, x); }));
  const auto fb = transform(ScalarField::from_function(grid, [&](std::span<const double> x) { return basis_function(b, 0.5, x); }));
  EXPECT_NEAR(std::abs(hs_inner(fa, fb, 0.5)), 0.0, 1e-14);
}

TEST(BasisFunction, EigenfunctionOfNoiseCovariance) {
  const double eps = 0.2;
  for (int d : {1, 2}) {
    const TorusGrid grid(d, 128 / d);
    const KernelSpec wide(std::sqrt(2.0) * eps, d);
    const auto kernel = ScalarField::from_function(grid, [&](std::span<const double> x) { return evaluate_kernel(x, wide); });
    const std::vector<int> j = d == 1 ? std::vector<int>{3} : std::vector<int>{2, -1};
    const auto f = ScalarField::from_function(grid, [&](std::span<const double> x) { return basis_function(j, 0.55, x); });
    const auto image = convolve(kernel, f);
    const double lambda = eigenvalue(j, eps);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(image[i] - lambda * f[i]));
    EXPECT_LT(err / c0_norm(f), 1e-6);
  }
}

TEST(SobolevTrace, GaussianSumExample) {
  EXPECT_NEAR(sobolev_trace(0.0, 0.05, 1) / (std::sqrt(kPi) / 0.05), 1.0, 0.02);
}

TEST(SobolevTrace, MatchesBruteForceLattice) {
  const std::array<std::tuple<int, double, double>, 5> cases{{{1, 0.55, 0.05}, {1, 1.3, 0.2}, {2, 1.05, 0.1}, {2, 0.0, 0.3}, {3, 1.55, 0.3}}};
  for (const auto& [d, s, eps] : cases) {
    const int jmax = suggest_jmax(eps, s);
    const double want = oracle::brute_lattice_sum(oracle_axis(eps, jmax), s, d);
    EXPECT_NEAR(sobolev_trace(s, eps, d, jmax) / want, 1.0, 1e-10) << d << " " << s << " " << eps;
  }
}

TEST(SobolevTrace, LatticeWeightedSumMatchesBruteForce) {
  const std::vector<double> axis{1.0, 0.6, 0.2, 0.05};
  const std::vector<long double> laxis(axis.begin(), axis.end());
  for (int d : {1, 2, 3}) {
    EXPECT_NEAR(lattice_weighted_sum(axis, 0.8, d) / oracle::brute_lattice_sum(laxis, 0.8, d), 1.0, 1e-13);
  }
}

TEST(SobolevTrace, IncreasingInIndex) {
  double prev = 0.0;
  for (double s : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const double t = sobolev_trace(s, 0.1, 2);
    EXPECT_GT(t, prev);
    prev = t;
  }
}

TEST(SobolevTrace, RejectsShortTruncation) {
  try {
    sobolev_trace(0.55, 0.05, 1, 10);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.suggested_jmax(), 10);
    EXPECT_NO_THROW(sobolev_trace(0.55, 0.05, 1, e.suggested_jmax()));
  }
}

TEST(SobolevTrace, ScalingSlope) {
  for (const auto& [d, s] : {std::pair{1, 0.55}, std::pair{2, 1.05}}) {
    std::vector<double> x, y;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      x.push_back(1.0 / eps);
      y.push_back(sobolev_trace(s, eps, d));
    }
    const double slope = oracle::log_slope(x, y);
    EXPECT_NEAR(slope / theta_critical(s, d), 1.0, 0.05) << d;
  }
}

TEST(SobolevTrace, FactorisedBoundDominates) {
  for (int d : {2, 3}) {
    for (double eps : {0.3, 0.1}) {
      const int jmax = suggest_jmax(eps, 1.0);
      EXPECT_GE(factorised_trace_bound(1.0, eps, d, jmax), sobolev_trace(1.0, eps, d, jmax));
    }
  }
}

TEST(BoundExponent, Examples) {
  EXPECT_DOUBLE_EQ(bound_exponent(0.5, 0.5, 0.55, 1), 2.1);
  EXPECT_DOUBLE_EQ(bound_exponent(0.5, 0.5, 1.05, 2), 4.1);
  EXPECT_NEAR(bound_exponent(0.6, 0.6, 1.0, 1), 3.6, 1e-14);
  EXPECT_THROW(bound_exponent(0.3, 0.3, 1.0, 1), DomainError);
  EXPECT_THROW(bound_exponent(0.0, 1.0, 1.0, 1), DomainError);
  EXPECT_THROW(bound_exponent(1.0, 0.5, 1.0, 1), DomainError);
}

TEST(BoundExponent, GridMinimumAtHalfHalf) {
  for (const auto& [s, d] : {std::pair{0.55, 1}, std::pair{1.05, 2}, std::pair{2.0, 3}}) {
    const auto best = grid_minimise_bound_exponent(s, d);
    EXPECT_NEAR(best.alpha, 0.5, 1e-12);
    EXPECT_NEAR(best.beta, 0.5, 1e-12);
    EXPECT_NEAR(best.exponent, theta_critical(s, d), 1e-12);
    // Independent sweep.
    double lowest = std::numeric_limits<double>::infinity();
    for (int a = 1; a < 100; ++a) {
      for (int b = 1; b < 100; ++b) {
        if (a + b < 100) continue;
        const double al = a / 100.0, be = b / 100.0;
        lowest = std::min(lowest, std::max({2 * be * (2 * s + 1), 2 * al * (2 * s + 1), 2 * al + 4 * be * s}) + d - 1);
      }
    }
    EXPECT_NEAR(lowest, best.exponent, 1e-12);
  }
}

TEST(ThetaCritical, Examples) {
  EXPECT_EQ(theta_critical(0.0, 1), 1.0);
  EXPECT_EQ(theta_critical(1.0, 1), 3.0);
  for (int d : {1, 2, 3}) EXPECT_EQ(theta_critical(0.5 * d, d), 2.0 * d);
}

TEST(SobolevIndex, EtaRoundTrip) {
  const auto idx = SobolevIndex::from_eta(2, 0.05);
  EXPECT_DOUBLE_EQ(idx.s, 1.05);
  EXPECT_NEAR(idx.eta(2), 0.05, 1e-15);
}
