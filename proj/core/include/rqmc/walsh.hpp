#pragma once

#include <cstdint>
#include <vector>

#include "rqmc/bigint.hpp"
#include "rqmc/gf2.hpp"
#include "rqmc/netgen.hpp"

namespace rqmc::walsh {

/// Limits for the exact oracles.
inline constexpr int kMaxChiOrder = 12;
inline constexpr int kMaxPiecewiseBits = 20;

/// Position of the highest set bit of k, 1-based; q(0) = 0.
int highest_bit(std::uint64_t k) noexcept;

/// wal_k(x) = (-1)^{sum_ell k_ell x_ell} for an E-bit fixed-point x.
/// Throws std::invalid_argument when q(k) > E.
int wal(std::uint64_t k, std::uint64_t x_bits, int precision);

/// chi_{r,k} = int_0^1 x^r wal_k(x) dx, summed exactly over the 2^q(k) dyadic
/// cells on which wal_k is constant. Requires r <= 12 and q(k) <= 20.
Rational chi(int r, std::uint64_t k);

/// Same integral, for every order 0..r_max, by repeatedly splitting [0,1) at
/// 1/2 (x -> x/2 and x -> (1+x)/2). Cost O(q(k) r_max^2); no q(k) limit.
std::vector<Rational> chi_orders(int r_max, std::uint64_t k);
Rational chi_by_halving(int r, std::uint64_t k);

/// Checks the three-term recursion that lowers r by one by peeling the top
/// bit of k, with the infinite sum cut at c_max and its tail bounded by
/// 2^{-c_max} max|chi_{r-1,.}|.
bool chi_recursion_check(int r, std::uint64_t k, int c_max);

/// Right side r!/(r-u+1)! prod_{w<=u}(1 + 4^{1-w}) 2^{-||L_k||_{1,u} - u};
/// requires 1 <= u <= |L_k| and r >= u - 1.
Rational chi_bound(int r, std::uint64_t k, int u);

/// |chi_{r,k}| <= chi_bound(r,k,u). For r < u - 1 the bound is undefined and
/// the check reduces to chi_{r,k} = 0.
bool chi_bound_check(int r, std::uint64_t k, int u);

/// f(x) = sum_r a_r x^r with exact rational coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  [[nodiscard]] int degree() const noexcept { return static_cast<int>(coef_.size()) - 1; }
  [[nodiscard]] const std::vector<Rational>& coefficients() const noexcept { return coef_; }
  [[nodiscard]] Rational operator()(const Rational& x) const;
  [[nodiscard]] double operator()(double x) const;
  /// int_0^1 f = sum a_r / (r+1).
  [[nodiscard]] Rational mean() const;
  /// f^{(k)}(1/2) / k! for k = 0..degree.
  [[nodiscard]] std::vector<Rational> taylor_at_half() const;
  /// sum_{r>=1} r |a_r|, an upper bound on sup |f'| over [0,1].
  [[nodiscard]] double lipschitz_bound() const;

 private:
  std::vector<Rational> coef_;
};

/// Exact Walsh coefficient fhat(k) = sum_r a_r chi_{r,k}; degree <= 12.
Rational walsh_coeff_poly(const Polynomial& f, std::uint64_t k);

/// Constants of |f^{(k)}(1/2)| <= A alpha^k k!.
struct AnalyticBoundParams {
  double A = 0.0;
  double alpha = 1.0;

  /// Throws unless A >= 0 and 0 < alpha < 2.
  void validate() const;
  [[nodiscard]] double theta() const;  // alpha / (e (2 - alpha))
  [[nodiscard]] double ratio() const;  // (alpha/2) / (1 - alpha/2)
};

/// Smallest A certifying the polynomial for the given alpha.
AnalyticBoundParams certify_polynomial(const Polynomial& f, double alpha = 1.0);

/// 6 A |L|! ((alpha/2)/(1 - alpha/2))^{|L|}.
double B_L_bound(const AnalyticBoundParams& params, const gf2::IndexSet& L);

struct DecompositionTerm {
  gf2::IndexSet L;
  Rational B_L;  // fhat(k_L) 2^{||L||_1}
  int sign;      // S_L(D)
};

struct DecompositionReport {
  Rational truncated_sum;
  double truncation_bound = 0.0;
  std::vector<DecompositionTerm> contributing_sets;
  int sets_examined = 0;
};

/// Exact mu_hat - mu for the point set at precision E_check (first E_check
/// rows of M, first E_check bits of D, zero tail).
Rational direct_error(const Polynomial& f, const gf2::BitMatrix& C, const netgen::ScrambleMatrix& M,
                      const netgen::DigitalShift& D, int E_check);

/// Walsh-side evaluation of the same error: sums fhat(k_L) S_L(D) over
/// XOR-zero L inside [E_check] with ||L||_1 <= N_max, and bounds everything
/// left out.
DecompositionReport error_decomposition(const Polynomial& f, const gf2::BitMatrix& C,
                                        const netgen::ScrambleMatrix& M, const netgen::DigitalShift& D,
                                        int E_check, int N_max);

/// |direct - truncated_sum| <= truncation_bound.
bool decomposition_holds(const Rational& direct, const DecompositionReport& report);

struct ConvergenceBound {
  double value;       // may underflow to 0 for large m
  double log2_value;  // -inf when A = 0
  bool certified;     // the explicit C_theta = 3770 max(1, 1/theta) applies
};

/// (A / sqrt(eta)) 2^{-lambda m^2} sqrt(C_theta (theta sqrt(2 lambda) m)^{2 sqrt(2 lambda) m} + 64).
ConvergenceBound theorem4_bound(const AnalyticBoundParams& params, int m, double eta);

struct HolderConstants {
  double C1;
  double C2;
  double C3;
};

/// Constants of the finite-smoothness tail bound; series are summed with
/// their geometric tails added so each constant stays an upper bound.
HolderConstants holder_bound_constants(int p, double lam, double V, double A);

struct SignProbabilities {
  Rational p1;   // Pr(S_L = 1)
  Rational p11;  // Pr(S_L = 1, S_L' = 1)
};

/// Exact enumeration over all assignments of D_ell, ell in L u L'.
SignProbabilities sign_independence_check(const gf2::IndexSet& L, const gf2::IndexSet& Lp);

}  // namespace rqmc::walsh
