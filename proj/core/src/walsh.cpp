#include "rqmc/walsh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rqmc::walsh {

namespace {

using boost::multiprecision::abs;

Rational pow2_inverse(long n) { return Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(n)); }

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<std::vector<BigInt>> binomials(int n) {
  std::vector<std::vector<BigInt>> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

void check_order(int r, const char* who) {
  if (r < 0 || r > kMaxChiOrder) {
    throw std::invalid_argument(std::string(who) + ": order r=" + std::to_string(r) + " outside [0, 12]");
  }
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace

int highest_bit(std::uint64_t k) noexcept { return 64 - std::countl_zero(k); }

int wal(std::uint64_t k, std::uint64_t x_bits, int precision) {
  if (k == 0) return 1;
  const int q = highest_bit(k);
  if (q > precision) {
    throw std::invalid_argument("wal: index needs " + std::to_string(q) + " bits, point has " +
                                std::to_string(precision));
  }
  int parity = 0;
  for (auto rest = k; rest != 0; rest &= rest - 1) {
    const int ell = std::countr_zero(rest) + 1;
    parity ^= static_cast<int>((x_bits >> (precision - ell)) & 1U);
  }
  return parity != 0 ? -1 : 1;
}

Rational chi(int r, std::uint64_t k) {
  check_order(r, "chi");
  if (k == 0) return Rational(1, r + 1);
  const int q = highest_bit(k);
  if (q > kMaxPiecewiseBits) {
    throw std::invalid_argument("chi: q(k)=" + std::to_string(q) + " exceeds the piecewise limit of 20 bits");
  }
  // Bit ell of j/2^q is bit q-ell of j.
  std::uint64_t mask = 0;
  for (auto rest = k; rest != 0; rest &= rest - 1) mask |= std::uint64_t{1} << (q - 1 - std::countr_zero(rest));
  const std::uint64_t cells = std::uint64_t{1} << q;
  BigInt sum = 0;
  BigInt prev = 0;
  for (std::uint64_t j = 0; j < cells; ++j) {
    BigInt next = boost::multiprecision::pow(BigInt(j + 1), static_cast<unsigned>(r + 1));
    if (std::popcount(j & mask) % 2 == 0) {
      sum += next - prev;
    } else {
      sum -= next - prev;
    }
    prev = std::move(next);
  }
  const BigInt den = BigInt(r + 1) << static_cast<unsigned>(q * (r + 1));
  return Rational(sum, den);
}

std::vector<Rational> chi_orders(int r_max, std::uint64_t k) {
  if (r_max < 0) throw std::invalid_argument("chi_orders: r_max must be >= 0");
  const auto binom = binomials(r_max);
  std::vector<Rational> cur(static_cast<std::size_t>(r_max) + 1);
  for (int s = 0; s <= r_max; ++s) cur[s] = Rational(1, s + 1);
  std::vector<Rational> next(cur.size());
  for (int t = highest_bit(k) - 1; t >= 0; --t) {
    const bool odd = ((k >> t) & 1U) != 0;
    for (int s = 0; s <= r_max; ++s) {
      Rational shifted = 0;
      for (int u = 0; u <= s; ++u) shifted += binom[s][u] * cur[u];
      next[s] = (odd ? Rational(cur[s] - shifted) : Rational(cur[s] + shifted)) * pow2_inverse(s + 1);
    }
    std::swap(cur, next);
  }
  return cur;
}

Rational chi_by_halving(int r, std::uint64_t k) {
  if (r < 0) throw std::invalid_argument("chi_by_halving: r must be >= 0");
  return chi_orders(r, k).back();
}

bool chi_recursion_check(int r, std::uint64_t k, int c_max) {
  check_order(r, "chi_recursion_check");
  if (k == 0) throw std::invalid_argument("chi_recursion_check: k must be >= 1");
  if (c_max < 1) throw std::invalid_argument("chi_recursion_check: c_max must be >= 1");
  const int top = highest_bit(k) - 1;  // zero-based position of the largest element of L_k
  if (top + c_max > 63) throw std::invalid_argument("chi_recursion_check: k + 2^(c_max + q) overflows");
  const Rational lhs = highest_bit(k) <= kMaxPiecewiseBits ? chi(r, k) : chi_by_halving(r, k);
  if (r == 0) return lhs == 0;

  const std::uint64_t top_bit = std::uint64_t{1} << top;
  Rational inner = chi_by_halving(r - 1, k - top_bit);
  for (int c = 1; c <= c_max; ++c) {
    inner -= pow2_inverse(c) * chi_by_halving(r - 1, k + (std::uint64_t{1} << (c + top)));
  }
  const Rational factor = Rational(r) * pow2_inverse(top + 2);
  const Rational rhs = -factor * inner;
  // Omitted terms: factor * sum_{c > c_max} 2^{-c} |chi_{r-1,.}| <= factor 2^{-c_max} / r.
  const Rational tail = factor * pow2_inverse(c_max) / r;
  return abs(lhs - rhs) <= tail;
}

Rational chi_bound(int r, std::uint64_t k, int u) {
  if (k == 0) throw std::invalid_argument("chi_bound: k must be >= 1");
  const auto L = gf2::IndexSet::from_walsh_index(k);
  if (u < 1 || u > L.card()) throw std::invalid_argument("chi_bound: need 1 <= u <= |L_k|");
  if (r < u - 1) throw std::invalid_argument("chi_bound: undefined for r < u - 1");
  Rational b = Rational(factorial(r), factorial(r - u + 1));
  for (int w = 1; w <= u; ++w) b *= 1 + pow2_inverse(2 * (w - 1));
  return b * pow2_inverse(L.top_norm(u) + u);
}

bool chi_bound_check(int r, std::uint64_t k, int u) {
  const auto L = gf2::IndexSet::from_walsh_index(k);
  if (u < 1 || u > L.card()) throw std::invalid_argument("chi_bound_check: need 1 <= u <= |L_k|");
  const Rational value = highest_bit(k) <= kMaxPiecewiseBits ? chi(r, k) : chi_by_halving(r, k);
  if (r < u - 1) return value == 0;
  return abs(value) <= chi_bound(r, k, u);
}

Polynomial::Polynomial(std::vector<Rational> coefficients) : coef_(std::move(coefficients)) {
  if (coef_.empty()) coef_.push_back(0);
  while (coef_.size() > 1 && coef_.back() == 0) coef_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

Rational Polynomial::mean() const {
  Rational acc = 0;
  for (std::size_t r = 0; r < coef_.size(); ++r) acc += coef_[r] / static_cast<int>(r + 1);
  return acc;
}

std::vector<Rational> Polynomial::taylor_at_half() const {
  const int d = degree();
  const auto binom = binomials(d);
  std::vector<Rational> out(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    for (int r = k; r <= d; ++r) out[k] += coef_[r] * binom[r][k] * pow2_inverse(r - k);
  }
  return out;
}

double Polynomial::lipschitz_bound() const {
  double acc = 0.0;
  for (std::size_t r = 1; r < coef_.size(); ++r) acc += static_cast<double>(r) * std::fabs(to_double(coef_[r]));
  return acc;
}

Rational walsh_coeff_poly(const Polynomial& f, std::uint64_t k) {
  if (f.degree() > kMaxChiOrder) throw std::invalid_argument("walsh_coeff_poly: degree exceeds 12");
  if (k == 0) return f.mean();
  const auto chis = chi_orders(f.degree(), k);
  Rational acc = 0;
  for (int r = 0; r <= f.degree(); ++r) acc += f.coefficients()[r] * chis[r];
  return acc;
}

void AnalyticBoundParams::validate() const {
  if (!(A >= 0.0)) throw std::invalid_argument("AnalyticBoundParams: A must be >= 0");
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("AnalyticBoundParams: alpha must lie in (0, 2)");
}

double AnalyticBoundParams::theta() const { return alpha / (std::exp(1.0) * (2.0 - alpha)); }

double AnalyticBoundParams::ratio() const { return (alpha / 2.0) / (1.0 - alpha / 2.0); }

AnalyticBoundParams certify_polynomial(const Polynomial& f, double alpha) {
  AnalyticBoundParams p{0.0, alpha};
  p.validate();
  const auto taylor = f.taylor_at_half();
  for (int k = 1; k < static_cast<int>(taylor.size()); ++k) {
    const double need = std::fabs(to_double(taylor[k])) / std::pow(alpha, k);
    p.A = std::max(p.A, need);
  }
  p.A = std::nextafter(p.A * (1.0 + 1e-12), std::numeric_limits<double>::infinity());
  if (f.degree() == 0) p.A = 0.0;
  return p;
}

double B_L_bound(const AnalyticBoundParams& params, const gf2::IndexSet& L) {
  params.validate();
  return 6.0 * params.A * std::tgamma(L.card() + 1.0) * std::pow(params.ratio(), L.card());
}

Rational direct_error(const Polynomial& f, const gf2::BitMatrix& C, const netgen::ScrambleMatrix& M,
                      const netgen::DigitalShift& D, int E_check) {
  if (E_check < M.m() || E_check > M.precision()) {
    throw std::invalid_argument("direct_error: need m <= E_check <= rows of M");
  }
  std::vector<std::uint64_t> rows(M.bits().rows().begin(), M.bits().rows().begin() + E_check);
  const netgen::ScrambleMatrix top(gf2::BitMatrix(std::move(rows), M.m()), netgen::ScrambleKind::random_linear);
  const netgen::DigitalShift shift(D.value() >> (D.precision() - E_check), E_check);
  const auto pts = netgen::generate_points(C, top, shift);
  Rational sum = 0;
  for (auto v : pts.values()) sum += f(Rational(BigInt(v), BigInt(1) << static_cast<unsigned>(E_check)));
  return sum / static_cast<long long>(pts.size()) - f.mean();
}

DecompositionReport error_decomposition(const Polynomial& f, const gf2::BitMatrix& C,
                                        const netgen::ScrambleMatrix& M, const netgen::DigitalShift& D,
                                        int E_check, int N_max) {
  const int deg = f.degree();
  if (deg > kMaxChiOrder) throw std::invalid_argument("error_decomposition: degree exceeds 12");
  if (gf2::rank(C) != M.m() || C.n_cols() != M.m() || static_cast<int>(C.n_rows()) != M.m()) {
    throw netgen::SingularGeneratorError("error_decomposition: generator must be nonsingular m x m");
  }
  if (E_check < M.m() || E_check > M.precision() || E_check > 64) {
    throw std::invalid_argument("error_decomposition: need m <= E_check <= min(rows of M, 64)");
  }
  if (N_max < 1 || N_max > E_check * (E_check + 1) / 2) {
    throw std::invalid_argument("error_decomposition: need 1 <= N_max <= E_check(E_check+1)/2");
  }
  if (D.precision() < E_check) throw std::invalid_argument("error_decomposition: shift shorter than E_check");

  DecompositionReport report;
  const auto params = certify_polynomial(f);
  std::vector<double> envelope(static_cast<std::size_t>(deg) + 1, 0.0);
  for (int d = 1; d <= deg; ++d) envelope[d] = 6.0 * params.A * std::tgamma(d + 1.0) * std::pow(params.ratio(), d);

  double omitted = 0.0;
  for (int N = 1; N <= N_max; ++N) {
    gf2::IndexSetStream stream(N);
    while (auto L = stream.next()) {
      // chi_{r,k} = 0 for r < |L_k|: these sets contribute nothing.
      if (L->card() > deg) continue;
      ++report.sets_examined;
      if (L->max() > E_check) {
        // Rows past E_check are zero at this precision; bound the set instead.
        omitted += L->max() <= 64 ? std::fabs(to_double(walsh_coeff_poly(f, L->walsh_index())))
                                  : envelope[L->card()] * std::ldexp(1.0, -N);
        continue;
      }
      std::uint64_t acc = 0;
      int parity = 0;
      for (int ell : L->elements()) {
        acc ^= M.bits().row(static_cast<std::size_t>(ell));
        parity ^= static_cast<int>(D.bit(ell));
      }
      if (acc != 0) continue;
      const Rational coeff = walsh_coeff_poly(f, L->walsh_index());
      if (coeff == 0) continue;
      const int sign = parity != 0 ? -1 : 1;
      report.truncated_sum += sign > 0 ? coeff : Rational(-coeff);
      report.contributing_sets.push_back({*L, coeff * Rational(BigInt(1) << static_cast<unsigned>(N)), sign});
    }
  }

  // Every L with ||L||_1 > N_max: sum over norm levels of q(N, d) times the
  // per-set envelope, then a geometric bound on what lies past n_top.
  if (deg >= 1) {
    const int n_top = N_max + 64 + 8 * deg;
    // exact[d][n]: partitions of n into exactly d positive parts.
    std::vector<std::vector<double>> parts(static_cast<std::size_t>(deg) + 1,
                                           std::vector<double>(static_cast<std::size_t>(n_top) + 1, 0.0));
    parts[0][0] = 1.0;
    for (int d = 1; d <= deg; ++d) {
      for (int s = d; s <= n_top; ++s) parts[d][s] = parts[d - 1][s - 1] + parts[d][s - d];
    }
    for (int N = N_max + 1; N <= n_top; ++N) {
      for (int d = 1; d <= deg; ++d) {
        const int shifted = N - d * (d - 1) / 2;
        if (shifted < d) continue;
        omitted += parts[d][shifted] * envelope[d] * std::ldexp(1.0, -N);
      }
    }
    // q(N, d) <= N^{d-1}; past n_top the ratio of successive terms is < 0.6.
    for (int d = 1; d <= deg; ++d) {
      omitted += envelope[d] * std::pow(n_top + 1.0, d - 1) * std::ldexp(1.0, -(n_top + 1)) / 0.4;
    }
  }
  report.truncation_bound = omitted * (1.0 + 1e-9);
  return report;
}

bool decomposition_holds(const Rational& direct, const DecompositionReport& report) {
  return to_double(abs(direct - report.truncated_sum)) <= report.truncation_bound;
}

ConvergenceBound theorem4_bound(const AnalyticBoundParams& params, int m, double eta) {
  params.validate();
  if (m < 3) throw std::invalid_argument("theorem4_bound: m must be >= 3");
  if (!(eta > 0.0)) throw std::invalid_argument("theorem4_bound: eta must be > 0");
  const double theta = params.theta();
  const double s2l = std::sqrt(2.0 * kLambda);
  const double md = m;
  const bool certified = md >= 1.0 / (s2l * theta) && md >= 3.0 * std::log(theta * md) + 3.0;
  if (params.A == 0.0) return {0.0, -std::numeric_limits<double>::infinity(), certified};
  const double c_theta = 3770.0 * std::max(1.0, 1.0 / theta);
  const double log2_x = 2.0 * s2l * md * std::log2(theta * s2l * md);
  const double log2_cx = std::log2(c_theta) + log2_x;
  // log2(C X + 64) without overflow.
  const double hi = std::max(log2_cx, 6.0);
  const double log2_inner = hi + std::log2(std::exp2(log2_cx - hi) + std::exp2(6.0 - hi));
  const double log2_value = std::log2(params.A) - 0.5 * std::log2(eta) - kLambda * md * md + 0.5 * log2_inner;
  return {std::exp2(log2_value), log2_value, certified};
}

namespace {

// sum_{N >= start} N^power r^N with the tail past the cut added as a
// geometric bound; stops once that bound is below rel * partial sum.
double power_geometric_series(int start, int power, double r, double rel) {
  double sum = 0.0;
  for (int N = start;; ++N) {
    const double term = std::pow(static_cast<double>(N), power) * std::pow(r, N);
    sum += term;
    const double ratio = std::pow(1.0 + 1.0 / N, power) * r;
    if (ratio < 1.0) {
      const double next = term * ratio;
      const double tail = next / (1.0 - ratio);
      if (tail < rel * sum) return sum + tail;
    }
    if (N > 1000000) throw std::runtime_error("power_geometric_series: no convergence");
  }
}

}  // namespace

HolderConstants holder_bound_constants(int p, double lam, double V, double A) {
  if (p < 1) throw std::invalid_argument("holder_bound_constants: p must be >= 1");
  if (!(lam > 0.0 && lam <= 1.0)) throw std::invalid_argument("holder_bound_constants: lambda must lie in (0, 1]");
  if (!(V >= 0.0) || !(A >= 0.0)) throw std::invalid_argument("holder_bound_constants: V and A must be >= 0");
  const double pl = p + lam;
  const double series1 = power_geometric_series(p, p - 1, std::exp2(-1.0 / pl), 1e-12);
  const double c1 = std::exp2(pl + 2.0) / (std::sqrt(static_cast<double>(p)) * std::tgamma(p)) * V * std::sqrt(series1);
  const double c2 = 4.0 * std::sqrt(6.0) * V + 8.0 * std::sqrt(6.0) * A;
  const double pfact = std::tgamma(p + 1.0);
  const double series3 = power_geometric_series(1, p, 0.5, 1e-12);
  const double c3 = std::pow(pl, p) / (pfact * pfact) * series3 + std::exp(1.0) - 1.0;
  return {c1, c2, c3};
}

SignProbabilities sign_independence_check(const gf2::IndexSet& L, const gf2::IndexSet& Lp) {
  if (L == Lp) throw std::invalid_argument("sign_independence_check: sets must differ");
  std::vector<int> all(L.elements().begin(), L.elements().end());
  all.insert(all.end(), Lp.elements().begin(), Lp.elements().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() > 30) throw std::invalid_argument("sign_independence_check: union too large to enumerate");

  std::uint64_t mask_l = 0;
  std::uint64_t mask_lp = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (L.contains(all[i])) mask_l |= std::uint64_t{1} << i;
    if (Lp.contains(all[i])) mask_lp |= std::uint64_t{1} << i;
  }
  const std::uint64_t total = std::uint64_t{1} << all.size();
  std::uint64_t ones = 0;
  std::uint64_t both = 0;
  for (std::uint64_t d = 0; d < total; ++d) {
    const bool s1 = std::popcount(d & mask_l) % 2 == 0;
    const bool s2 = std::popcount(d & mask_lp) % 2 == 0;
    ones += s1 ? 1 : 0;
    both += (s1 && s2) ? 1 : 0;
  }
  return {Rational(BigInt(ones), BigInt(total)), Rational(BigInt(both), BigInt(total))};
}

}  // namespace rqmc::walsh
