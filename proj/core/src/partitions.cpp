#include "rqmc/partitions.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace rqmc {

BigFloat lambda_high_precision() {
  using boost::math::constants::ln_two;
  using boost::math::constants::pi;
  const BigFloat l2 = ln_two<BigFloat>();
  const BigFloat p = pi<BigFloat>();
  return 3 * l2 * l2 / (p * p);
}

}  // namespace rqmc

namespace rqmc::partitions {

namespace {

std::vector<BigInt> subset_dp(long max_n) {
  std::vector<BigInt> q(static_cast<std::size_t>(max_n) + 1);
  q[0] = 1;
  for (long part = 1; part <= max_n; ++part) {
    for (long n = max_n; n >= part; --n) q[n] += q[n - part];
  }
  return q;
}

// prod(1 + x^k) * prod(1 - x^k) = prod(1 - x^{2k}); expanding both products
// with Euler's pentagonal theorem gives a sparse recurrence for q.
std::vector<BigInt> pentagonal(long max_n) {
  std::vector<long> gen;   // generalized pentagonal numbers 1, 2, 5, 7, ...
  std::vector<int> sign;   // (-1)^(j+1)
  for (long j = 1;; ++j) {
    const long a = j * (3 * j - 1) / 2;
    const long b = j * (3 * j + 1) / 2;
    if (a > max_n) break;
    const int s = (j % 2 == 1) ? 1 : -1;
    gen.push_back(a);
    sign.push_back(s);
    if (b <= max_n) {
      gen.push_back(b);
      sign.push_back(s);
    }
  }
  // Right-hand side coefficient of x^n in prod(1 - x^{2k}).
  std::vector<int> rhs(static_cast<std::size_t>(max_n) + 1, 0);
  rhs[0] = 1;
  for (std::size_t t = 0; t < gen.size(); ++t) {
    const long n = 2 * gen[t];
    if (n <= max_n) rhs[n] = -sign[t];
  }
  std::vector<BigInt> q(static_cast<std::size_t>(max_n) + 1);
  q[0] = 1;
  for (long n = 1; n <= max_n; ++n) {
    BigInt acc = rhs[n];
    for (std::size_t t = 0; t < gen.size() && gen[t] <= n; ++t) {
      if (sign[t] > 0) {
        acc += q[n - gen[t]];
      } else {
        acc -= q[n - gen[t]];
      }
    }
    q[n] = std::move(acc);
  }
  return q;
}

}  // namespace

PartitionTable PartitionTable::build(long max_n, Method method) {
  if (max_n < 1) throw std::invalid_argument("PartitionTable: max_n must be >= 1");
  PartitionTable t;
  t.q_ = method == Method::subset_dp ? subset_dp(max_n) : pentagonal(max_n);
  t.cumulative_.resize(t.q_.size());
  t.cumulative_[0] = 0;
  for (std::size_t n = 1; n < t.q_.size(); ++n) t.cumulative_[n] = t.cumulative_[n - 1] + t.q_[n];
  return t;
}

const BigInt& PartitionTable::q_distinct(long N) const {
  if (N < 0 || N > max_n()) throw std::out_of_range("PartitionTable: N=" + std::to_string(N) + " not tabulated");
  return q_[static_cast<std::size_t>(N)];
}

const BigInt& PartitionTable::cumulative(long N) const {
  if (N < 0 || N > max_n()) throw std::out_of_range("PartitionTable: N=" + std::to_string(N) + " not tabulated");
  return cumulative_[static_cast<std::size_t>(N)];
}

const PartitionTable& shared_table(long max_n) {
  static std::mutex mu;
  static std::unique_ptr<PartitionTable> table;
  std::lock_guard lock(mu);
  if (!table || table->max_n() < max_n) {
    long size = table ? std::max(max_n, 2 * table->max_n()) : std::max(max_n, 512L);
    table = std::make_unique<PartitionTable>(PartitionTable::build(size, PartitionTable::Method::pentagonal));
  }
  return *table;
}

BigInt count_fixed_cardinality(long N, int d) {
  if (N < 1 || d < 1) throw std::invalid_argument("count_fixed_cardinality: need N >= 1 and d >= 1");
  const long shift = static_cast<long>(d) * (d - 1) / 2;
  const long n = N - shift;
  if (n < d) return 0;
  // p[k][s]: partitions of s into exactly k positive parts.
  std::vector<std::vector<BigInt>> p(static_cast<std::size_t>(d) + 1,
                                     std::vector<BigInt>(static_cast<std::size_t>(n) + 1));
  p[0][0] = 1;
  for (int k = 1; k <= d; ++k) {
    for (long s = k; s <= n; ++s) p[k][s] = p[k - 1][s - 1] + p[k][s - k];
  }
  return p[d][n];
}

Threshold lambda_threshold(double m) {
  const long double x = static_cast<long double>(kLambda) * m * m;
  const long double nearest = std::round(x);
  if (std::fabs(x - nearest) >= 1e-9L) return {static_cast<long>(std::floor(x)), false};
  const BigFloat exact = lambda_high_precision() * BigFloat(m) * BigFloat(m);
  return {boost::multiprecision::floor(exact).convert_to<long>(), true};
}

CombinatoricsVerdict check_lemma_combinatorics(long m) {
  if (m < 1) throw std::invalid_argument("check_lemma_combinatorics: m must be >= 1");
  const auto th = lambda_threshold(static_cast<double>(m));
  BigInt count = th.value >= 1 ? shared_table(th.value).cumulative(th.value) : BigInt(0);
  // count < 0.4 * 2^m / sqrt(m)  <=>  25 m count^2 < 4 * 4^m.
  const BigInt lhs = 25 * BigInt(m) * count * count;
  const BigInt rhs = BigInt(4) << static_cast<unsigned>(2 * m);
  const double bound = 0.4 * std::ldexp(1.0, static_cast<int>(m)) / std::sqrt(static_cast<double>(m));
  return {m, th.value, std::move(count), bound, lhs < rhs, th.near_boundary};
}

double check_limit_ratio(double m) {
  if (!(m >= 1.0)) throw std::invalid_argument("check_limit_ratio: m must be >= 1");
  const auto th = lambda_threshold(m);
  if (th.value < 1) return 0.0;
  const BigFloat count(shared_table(th.value).cumulative(th.value));
  const BigFloat r = count * boost::multiprecision::sqrt(BigFloat(m)) / boost::multiprecision::pow(BigFloat(2), BigFloat(m));
  return r.convert_to<double>();
}

double limit_ratio_value() {
  return std::pow(3.0, 0.25) / (2.0 * M_PI * std::pow(kLambda, 0.25));
}

double bidar_bound(long N) {
  if (N < 1) throw std::invalid_argument("bidar_bound: N must be >= 1");
  const double n = static_cast<double>(N);
  return M_PI * std::exp(M_PI * std::sqrt(n / 3.0)) / (2.0 * std::sqrt(3.0 * n));
}

bool satisfies_bidar(const BigInt& q, long N) {
  using boost::math::constants::pi;
  const BigFloat n(N);
  const BigFloat p = pi<BigFloat>();
  const BigFloat bound = p * boost::multiprecision::exp(p * boost::multiprecision::sqrt(n / 3)) /
                         (2 * boost::multiprecision::sqrt(3 * n));
  return BigFloat(q) <= bound;
}

}  // namespace rqmc::partitions
