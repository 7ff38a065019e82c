#include "ridk/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ridk/errors.hpp"

namespace ridk {

SetPartition::SetPartition(int size, std::vector<std::vector<int>> blocks)
    : size_(size), blocks_(std::move(blocks)) {
  std::vector<int> seen(static_cast<std::size_t>(std::max(size, 0)), 0);
  for (auto& block : blocks_) {
    if (block.empty()) throw DomainError("partition blocks must be non-empty");
    std::sort(block.begin(), block.end());
    for (int e : block) {
      if (e < 0 || e >= size) throw DomainError("partition element out of range");
      if (seen[static_cast<std::size_t>(e)]++) throw DomainError("partition blocks overlap");
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw DomainError("partition does not cover the set");
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
}

int SetPartition::blocks_of_size(int j) const noexcept {
  return static_cast<int>(std::count_if(blocks_.begin(), blocks_.end(),
                                        [j](const auto& b) { return static_cast<int>(b.size()) == j; }));
}

std::vector<int> SetPartition::occupied_sizes() const {
  std::vector<int> sizes;
  for (const auto& b : blocks_) sizes.push_back(static_cast<int>(b.size()));
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

std::vector<SetPartition> enumerate_partitions(int alpha) {
  if (alpha < 1 || alpha > kMaxPartitionSize) {
    throw RangeError("partition size must lie in [1, " + std::to_string(kMaxPartitionSize) + "]");
  }
  const auto n = static_cast<std::size_t>(alpha);
  // Restricted growth strings: code[0] = 0, code[i] <= 1 + max(code[0..i-1]).
  std::vector<int> code(n, 0);
  std::vector<int> prefix_max(n, 0);
  std::vector<SetPartition> out;
  for (;;) {
    const int blocks = prefix_max[n - 1] + 1;
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(blocks));
    for (std::size_t i = 0; i < n; ++i) parts[static_cast<std::size_t>(code[i])].push_back(static_cast<int>(i));
    out.emplace_back(alpha, std::move(parts));

    std::size_t i = n - 1;
    while (i > 0 && code[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++code[i];
    prefix_max[i] = std::max(prefix_max[i - 1], code[i]);
    for (std::size_t r = i + 1; r < n; ++r) {
      code[r] = 0;
      prefix_max[r] = prefix_max[i];
    }
  }
  return out;
}

unsigned long long bell_number(int n) {
  if (n < 0 || n > 25) throw RangeError("Bell number index must lie in [0, 25]");
  std::vector<unsigned long long> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<unsigned long long> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

ScalarField faa_di_bruno_derivative(const RegularisedSqrt& h, const ScalarField& u,
                                    std::span<const int> axes) {
  const auto& grid = u.grid();
  const int alpha = static_cast<int>(axes.size());
  if (alpha < 1 || alpha > 4) throw RangeError("derivative order must lie in [1, 4]");
  for (int a : axes) {
    if (a < 0 || a >= grid.dim()) throw DomainError("axis index out of range");
  }
  const auto u_hat = transform(u);
  const auto partitions = enumerate_partitions(alpha);

  // Physical u-derivative for every subset of the axis list (bitmask).
  const auto subsets = static_cast<std::size_t>(1) << alpha;
  std::vector<ScalarField> derivative(subsets, ScalarField(grid));
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    SpectralField d = u_hat;
    for (int z = 0; z < alpha; ++z) {
      if (mask & (std::size_t{1} << z)) d = partial(d, axes[static_cast<std::size_t>(z)]);
    }
    derivative[mask] = inverse_transform(d);
  }

  ScalarField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto t = h.taylor(u[i], alpha + 1);
    double sum = 0.0;
    for (const auto& pi : partitions) {
      double factorial = 1.0;
      for (int f = 2; f <= pi.block_count(); ++f) factorial *= f;
      double term = factorial * t[static_cast<std::size_t>(pi.block_count())];
      for (const auto& block : pi.blocks()) {
        std::size_t mask = 0;
        for (int z : block) mask |= std::size_t{1} << z;
        term *= derivative[mask][i];
      }
      sum += term;
    }
    out[i] = sum;
  }
  return out;
}

namespace {

double product(std::span<const double> v, std::size_t from, std::size_t to) {
  double p = 1.0;
  for (std::size_t i = from; i < to; ++i) p *= v[i];
  return p;
}

// sum_k b_{<k} (a_k - b_k) a_{>k}
double telescoped(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sum += product(b, 0, k) * (a[k] - b[k]) * product(a, k + 1, a.size());
  }
  return sum;
}

}  // namespace

ExpansionCheck product_difference_expand(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw SizeMismatchError("product difference: length mismatch");
  ExpansionCheck r;
  r.expansion = telescoped(a, b);
  r.direct = product(a, 0, a.size()) - product(b, 0, b.size());
  r.residual = std::abs(r.expansion - r.direct);
  return r;
}

ExpansionCheck double_difference_expand(std::span<const double> a, std::span<const double> b,
                                        std::span<const double> c, std::span<const double> d) {
  const std::size_t n = a.size();
  if (b.size() != n || c.size() != n || d.size() != n) {
    throw SizeMismatchError("double difference: length mismatch");
  }
  double first = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    first += product(b, 0, k) * (a[k] - b[k] - (c[k] - d[k])) * product(a, k + 1, n);
  }
  double second = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
  for (std::size_t k = 0; k < n; ++k) {
    alpha.clear();
    beta.clear();
    for (std::size_t i = 0; i < k; ++i) {
      alpha.push_back(b[i]);
      beta.push_back(d[i]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      alpha.push_back(a[i]);
      beta.push_back(c[i]);
    }
    second += (c[k] - d[k]) * telescoped(alpha, beta);
  }
  ExpansionCheck r;
  r.expansion = first + second;
  r.direct = product(a, 0, n) - product(b, 0, n) - (product(c, 0, n) - product(d, 0, n));
  r.residual = std::abs(r.expansion - r.direct);
  return r;
}

}  // namespace ridk
