#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "ridk/combinatorics.hpp"
#include "ridk/errors.hpp"

using namespace ridk;

namespace {

double product(std::span<const double> v) {
  double p = 1.0;
  for (double x : v) p *= x;
  return p;
}

std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = uni(rng);
  return v;
}

double test_field(double x, double y) { return 0.5 + 0.2 * std::cos(x) + 0.1 * std::sin(y); }

}  // namespace

TEST(Partitions, CountsMatchBellNumbers) {
  // Values from the Bell triangle, written out by hand.
  const std::array<unsigned long long, 9> bell{1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(enumerate_partitions(n).size(), bell[static_cast<std::size_t>(n)]) << n;
    EXPECT_EQ(bell_number(n), bell[static_cast<std::size_t>(n)]);
  }
  EXPECT_EQ(bell_number(0), 1u);
  EXPECT_EQ(bell_number(25), 4638590332229999353ULL);
  EXPECT_THROW(bell_number(26), RangeError);
  EXPECT_THROW(enumerate_partitions(0), RangeError);
  EXPECT_THROW(enumerate_partitions(13), RangeError);
}

TEST(Partitions, CanonicalFormAndBlockIdentity) {
  for (int n = 1; n <= 7; ++n) {
    const auto all = enumerate_partitions(n);
    std::set<std::vector<std::vector<int>>> distinct;
    for (const auto& p : all) {
      distinct.insert(p.blocks());
      int covered = 0;
      int last_least = -1;
      for (const auto& b : p.blocks()) {
        EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
        EXPECT_GT(b.front(), last_least);
        last_least = b.front();
        covered += static_cast<int>(b.size());
      }
      EXPECT_EQ(covered, n);
      int weighted = 0;
      for (int j : p.occupied_sizes()) weighted += j * p.blocks_of_size(j);
      EXPECT_EQ(weighted, n);
    }
    EXPECT_EQ(distinct.size(), all.size());
  }
}

TEST(Partitions, ThreeElementListing) {
  const auto all = enumerate_partitions(3);
  ASSERT_EQ(all.size(), 5u);
  EXPECT_EQ(all.front().block_count(), 1);
  EXPECT_EQ(all.back().block_count(), 3);
}

TEST(Partitions, InvalidBlocksRejected) {
  EXPECT_THROW(SetPartition(3, {{0, 1}}), DomainError);
  EXPECT_THROW(SetPartition(2, {{0, 1}, {1}}), DomainError);
  EXPECT_THROW(SetPartition(2, {{0}, {}}), DomainError);
  EXPECT_THROW(SetPartition(2, {{0}, {2}}), DomainError);
}

TEST(ProductDifference, Examples) {
  const std::array<double, 1> a1{3.0}, b1{1.5};
  EXPECT_DOUBLE_EQ(product_difference_expand(a1, b1).expansion, 1.5);
  const std::array<double, 2> a2{2.0, 3.0}, b2{0.5, -1.0};
  EXPECT_DOUBLE_EQ(product_difference_expand(a2, b2).expansion, (2.0 - 0.5) * 3.0 + 0.5 * (3.0 + 1.0));
  EXPECT_DOUBLE_EQ(product_difference_expand(a2, b2).expansion, 2.0 * 3.0 - 0.5 * -1.0);
  const std::array<double, 1> short_b{1.0};
  EXPECT_THROW(product_difference_expand(a2, short_b), SizeMismatchError);
}

TEST(ProductDifference, RandomInstances) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const auto a = uniform_vector(rng, n), b = uniform_vector(rng, n);
    const auto r = product_difference_expand(a, b);
    EXPECT_NEAR(r.expansion, product(a) - product(b), 1e-12);
  }
}

TEST(DoubleDifference, Examples) {
  std::mt19937_64 rng(2);
  const auto a = uniform_vector(rng, 4), b = uniform_vector(rng, 4);
  EXPECT_NEAR(double_difference_expand(a, b, a, b).expansion, 0.0, 1e-15);
  const std::array<double, 1> a1{2.0}, b1{0.5}, c1{-1.0}, d1{4.0};
  EXPECT_DOUBLE_EQ(double_difference_expand(a1, b1, c1, d1).expansion, (2.0 - 0.5) - (-1.0 - 4.0));
  const std::array<double, 3> c3{1.0, 1.0, 1.0};
  EXPECT_THROW(double_difference_expand(a, b, c3, b), SizeMismatchError);
}

TEST(DoubleDifference, RandomInstances) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const auto a = uniform_vector(rng, n), b = uniform_vector(rng, n);
    const auto c = uniform_vector(rng, n), d = uniform_vector(rng, n);
    const auto r = double_difference_expand(a, b, c, d);
    EXPECT_NEAR(r.expansion, product(a) - product(b) - (product(c) - product(d)), 1e-12);
  }
}

TEST(FaaDiBruno, ChainRuleAndTwoBlockForm) {
  const RegularisedSqrt h(RegularisationSpec::for_dimension(1.0, 2));
  const TorusGrid g(2, 32);
  const auto u = ScalarField::from_function(g, [](std::span<const double> x) { return test_field(x[0], x[1]); });
  const std::array<int, 1> x_axis{0};
  const std::array<int, 2> xy{0, 1};
  const auto first = faa_di_bruno_derivative(h, u, x_axis);
  const auto second = faa_di_bruno_derivative(h, u, xy);
  std::vector<double> p(2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.coordinates(i, p);
    const double v = u[i];
    const double ux = -0.2 * std::sin(p[0]);
    const double uy = 0.1 * std::cos(p[1]);
    EXPECT_NEAR(first[i], h.derivative(v, 1) * ux, 1e-12 * std::max(1.0, std::abs(first[i])));
    EXPECT_NEAR(second[i], h.derivative(v, 2) * ux * uy, 1e-12 * std::max(1.0, std::abs(second[i])));
  }
}

TEST(FaaDiBruno, MatchesNestedFiniteDifferences) {
  const double delta = 1.0, step = 1e-3;
  const RegularisedSqrt h(RegularisationSpec::for_dimension(delta, 2));
  const TorusGrid g(2, 32);
  const auto u = ScalarField::from_function(g, [](std::span<const double> x) { return test_field(x[0], x[1]); });
  const auto composite = [&](double x, double y) { return h(test_field(x, y)); };
  using Stencil = std::function<double(double, double)>;
  const std::vector<std::pair<std::vector<int>, Stencil>> cases{
      {{0}, [&](double x, double y) { return (composite(x + step, y) - composite(x - step, y)) / (2 * step); }},
      {{0, 1},
       [&](double x, double y) {
         return (composite(x + step, y + step) - composite(x + step, y - step) - composite(x - step, y + step) +
                 composite(x - step, y - step)) / (4 * step * step);
       }},
      {{0, 0}, [&](double x, double y) { return (composite(x + step, y) - 2 * composite(x, y) + composite(x - step, y)) / (step * step); }},
      {{1, 1}, [&](double x, double y) { return (composite(x, y + step) - 2 * composite(x, y) + composite(x, y - step)) / (step * step); }},
  };
  std::vector<double> p(2);
  for (const auto& [axes, fd] : cases) {
    const auto exact = faa_di_bruno_derivative(h, u, axes);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::abs(std::abs(u[i]) - 0.5 * delta) < 10 * step) continue;
      g.coordinates(i, p);
      err = std::max(err, std::abs(exact[i] - fd(p[0], p[1])));
      scale = std::max(scale, std::abs(exact[i]));
    }
    EXPECT_LT(err / scale, 1e-5) << axes.size();
  }
}

TEST(FaaDiBruno, StableUnderGridRefinement) {
  const RegularisedSqrt h(RegularisationSpec::for_dimension(0.2, 2));
  const TorusGrid coarse(2, 32), fine(2, 64);
  const auto make = [](const TorusGrid& g) {
    return ScalarField::from_function(g, [](std::span<const double> x) { return test_field(x[0], x[1]); });
  };
  const std::array<int, 3> axes{0, 1, 1};
  const auto a = faa_di_bruno_derivative(h, make(coarse), axes);
  const auto b = faa_di_bruno_derivative(h, make(fine), axes);
  double err = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    std::array<int, 2> idx{};
    coarse.unflatten(i, idx);
    const std::array<int, 2> fine_idx{2 * idx[0], 2 * idx[1]};
    err = std::max(err, std::abs(a[i] - b[fine.flatten(fine_idx)]));
  }
  EXPECT_LT(err / c0_norm(a), 1e-8);
}

TEST(FaaDiBruno, RejectsBadAxes) {
  const RegularisedSqrt h(RegularisationSpec::for_dimension(0.2, 1));
  const TorusGrid g(1, 16);
  const ScalarField u(g, std::vector<double>(16, 1.0));
  const std::array<int, 1> bad{1};
  const std::array<int, 5> many{0, 0, 0, 0, 0};
  EXPECT_THROW(faa_di_bruno_derivative(h, u, bad), DomainError);
  EXPECT_THROW(faa_di_bruno_derivative(h, u, many), RangeError);
  EXPECT_THROW(faa_di_bruno_derivative(h, u, std::span<const int>{}), RangeError);
}
