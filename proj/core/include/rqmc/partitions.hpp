#pragma once

#include <cstdint>
#include <vector>

#include "rqmc/bigint.hpp"

namespace rqmc::partitions {

/// Exact counts q(N) of partitions of N into distinct positive parts, i.e. the
/// number of index sets with ||L||_1 = N, plus their running sums.
///
/// q(0) = 1 is kept for the generating function; cumulative(N) starts at N = 1
/// and so never counts the empty set.
class PartitionTable {
 public:
  enum class Method {
    /// Subset dynamic program over parts 1..max_n, O(max_n^2) additions.
    subset_dp,
    /// Euler pentagonal recurrence for prod(1 + x^k), O(max_n^1.5) additions.
    pentagonal,
  };

  static PartitionTable build(long max_n, Method method = Method::subset_dp);

  [[nodiscard]] long max_n() const noexcept { return static_cast<long>(q_.size()) - 1; }
  [[nodiscard]] const BigInt& q_distinct(long N) const;
  [[nodiscard]] const BigInt& cumulative(long N) const;

 private:
  std::vector<BigInt> q_;
  std::vector<BigInt> cumulative_;
};

/// Build (or reuse) a table covering at least max_n; thread-compatible.
const PartitionTable& shared_table(long max_n);

/// q(N, d): index sets with |L| = d and ||L||_1 = N; zero when N < d(d+1)/2.
BigInt count_fixed_cardinality(long N, int d);

/// floor(lambda * m^2) with a high-precision fallback near integer boundaries.
struct Threshold {
  long value;
  bool near_boundary;  // lambda*m^2 was within 1e-9 of an integer
};
Threshold lambda_threshold(double m);

struct CombinatoricsVerdict {
  long m;
  long threshold;
  BigInt count;
  double bound;  // 0.4 * 2^m / sqrt(m)
  bool holds;    // decided in exact integer arithmetic
  bool near_boundary;
};

/// count = #{L : ||L||_1 <= floor(lambda m^2)} against 0.4 * 2^m / sqrt(m).
CombinatoricsVerdict check_lemma_combinatorics(long m);

/// sqrt(m) 2^{-m} #{L : ||L||_1 <= floor(lambda m^2)}; m may be non-integer.
double check_limit_ratio(double m);

/// 3^{1/4} / (2 pi lambda^{1/4}), the large-m value of check_limit_ratio.
double limit_ratio_value();

/// pi exp(pi sqrt(N/3)) / (2 sqrt(3N)), an upper bound on q(N).
double bidar_bound(long N);

/// Exact q(N) <= bidar_bound(N), comparing in extended precision.
bool satisfies_bidar(const BigInt& q, long N);

}  // namespace rqmc::partitions
