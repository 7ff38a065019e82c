#pragma once

#include <span>
#include <vector>

#include "ridk/fields.hpp"
#include "ridk/regularisation.hpp"

namespace ridk {

/// Partition of {0, ..., size-1}; blocks hold sorted element indices and are
/// ordered by least element.
class SetPartition {
 public:
  SetPartition(int size, std::vector<std::vector<int>> blocks);

  int size() const noexcept { return size_; }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
  int block_count() const noexcept { return static_cast<int>(blocks_.size()); }
  /// Number of blocks of size j.
  int blocks_of_size(int j) const noexcept;
  /// Block sizes j with at least one block of that size, ascending.
  std::vector<int> occupied_sizes() const;

 private:
  int size_;
  std::vector<std::vector<int>> blocks_;
};

inline constexpr int kMaxPartitionSize = 12;

/// All set partitions of an alpha-element set (1 <= alpha <= 12), in
/// restricted-growth-string order.
std::vector<SetPartition> enumerate_partitions(int alpha);

/// Bell number B_n from the Bell triangle, n <= 25.
unsigned long long bell_number(int n);

/// Mixed partial d^alpha h(u) / dx_{axes[0]} ... dx_{axes[alpha-1]} by
/// summing over set partitions, with h-derivatives from the analytic pieces
/// of h_delta and u-derivatives spectral.  alpha = axes.size() <= 4.
ScalarField faa_di_bruno_derivative(const RegularisedSqrt& h, const ScalarField& u,
                                    std::span<const int> axes);

struct ExpansionCheck {
  double expansion = 0.0;  ///< right-hand side of the identity
  double direct = 0.0;     ///< the difference of products evaluated directly
  double residual = 0.0;   ///< |expansion - direct|
};

/// sum_k b_{<k} (a_k - b_k) a_{>k}  against  prod a - prod b.
ExpansionCheck product_difference_expand(std::span<const double> a, std::span<const double> b);

/// The two-sum expansion of prod a - prod b - (prod c - prod d).
ExpansionCheck double_difference_expand(std::span<const double> a, std::span<const double> b,
                                        std::span<const double> c, std::span<const double> d);

}  // namespace ridk
