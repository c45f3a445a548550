#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rqmc/integrands.hpp"

namespace I = rqmc::integrands;
using rqmc::Rational;

namespace {

double midpoint_rule(const I::Integrand& f, long cells) {
  double sum = 0;
  double comp = 0;
  for (long j = 0; j < cells; ++j) {
    const double x = (j + 0.5) / static_cast<double>(cells);
    const double v = f(std::span<const double>(&x, 1));
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(cells);
}

double at(const I::Integrand& f, double x) { return f(std::span<const double>(&x, 1)); }

}  // namespace

TEST(Registry, ContainsTheNamedEntries) {
  for (const char* name : {"smooth1d", "holder1d", "otl6d", "const", "poly"}) {
    EXPECT_NO_THROW((void)I::lookup(name)) << name;
  }
  EXPECT_THROW((void)I::lookup("nope"), std::invalid_argument);
  EXPECT_THROW((void)I::lookup("poly:"), std::invalid_argument);
  EXPECT_THROW((void)I::lookup("const:abc"), std::invalid_argument);
}

TEST(Smooth1d, MeanAndValues) {
  const auto f = I::lookup("smooth1d");
  EXPECT_EQ(f.exact_mean, 1.0);
  EXPECT_DOUBLE_EQ(at(f, 1.0), std::exp(1.0));
  EXPECT_NEAR(midpoint_rule(f, 1 << 20), 1.0, 1e-11);
  const auto x = std::vector<double>{0.1, 0.2};
  EXPECT_THROW((void)f(x), std::invalid_argument);
}

TEST(Smooth1d, AnalyticConstantsCertify) {
  const auto f = I::lookup("smooth1d");
  const auto& a = std::get<I::Analytic>(f.smoothness);
  EXPECT_LT(a.alpha, 2.0);
  // f^{(k)}(x) = (x + k) e^x, so f^{(k)}(1/2) = (k + 1/2) e^{1/2}.
  long double fact = 1;
  for (int k = 1; k <= 20; ++k) {
    fact *= k;
    const long double deriv = (k + 0.5L) * std::exp(0.5L);
    EXPECT_LE(deriv, a.A * std::pow(static_cast<long double>(a.alpha), k) * fact) << k;
  }
}

TEST(Holder1d, MeanMatchesAntiderivativeAndQuadrature) {
  const auto f = I::lookup("holder1d");
  const double third = 1.0 / 3.0;
  EXPECT_DOUBLE_EQ(*f.exact_mean, third * (8.0 / 27.0 - 1.0 / 27.0));
  EXPECT_NEAR(midpoint_rule(f, 1 << 22), *f.exact_mean, 1e-11);
  const auto& h = std::get<I::Holder>(f.smoothness);
  EXPECT_EQ(h.p, 1);
  EXPECT_EQ(h.lambda, 1.0);
}

TEST(Holder1d, DiscreteVariationOfDerivativeIsBounded) {
  const auto f = I::lookup("holder1d");
  const auto& h = std::get<I::Holder>(f.smoothness);
  auto deriv = [](double x) { return 2.0 * std::fabs(x - 1.0 / 3.0); };
  for (double lam : {1.0, 0.5}) {
    double previous = 0;
    for (int b = 1; b <= 14; ++b) {
      const long n = 1L << b;
      double v = 0;
      for (long i = 1; i <= n; ++i) {
        const double dx = 1.0 / n;
        v += std::pow(dx, 1.0 - lam) * std::fabs(deriv(i * dx) - deriv((i - 1) * dx));
      }
      EXPECT_LE(v, h.V + 1e-12);
      if (lam == 1.0) {
        EXPECT_GE(v, previous - 1e-12);
      }
      previous = v;
    }
    if (lam == 1.0) {
      EXPECT_NEAR(previous, h.V, 1e-3);
    }
  }
}

TEST(Otl6d, DimensionAndRange) {
  const auto f = I::lookup("otl6d");
  EXPECT_EQ(f.dim, 6);
  EXPECT_FALSE(f.exact_mean.has_value());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x(6);
    for (auto& v : x) v = u(rng);
    const double y = f(x);
    EXPECT_TRUE(std::isfinite(y));
    EXPECT_GT(y, 0.0);
    EXPECT_LT(y, 12.0);
  }
  EXPECT_THROW((void)f(std::vector<double>{0.5}), std::invalid_argument);
}

TEST(Otl6d, CircuitFormula) {
  // With Rf -> 0 the output reduces to Vb1 + 0.74.
  EXPECT_NEAR(I::otl_circuit(100, 50, 1e-12, 2, 1, 100), 12.0 * 50 / 150 + 0.74, 1e-9);
  // Large Rf pulls the second term toward 11.35 as beta (Rc2 + 9) -> 0 relative to Rf.
  EXPECT_NEAR(I::otl_circuit(100, 50, 1e12, 1e12, 1, 1e-9), 11.35, 1e-6);
}

TEST(Const, MeanAndModulus) {
  const auto c = I::lookup("const:2.5");
  EXPECT_EQ(c.exact_mean, 2.5);
  EXPECT_EQ(at(c, 0.3), 2.5);
  EXPECT_EQ(I::modulus_bound(c, 0.1), 0.0);
}

TEST(Poly, ExactMeanAndQuadrature) {
  const auto p = I::lookup("poly:1/3,-2,0.5,4");
  ASSERT_TRUE(p.polynomial.has_value());
  const Rational mean = Rational(1, 3) - Rational(1) + Rational(1, 6) + Rational(1);
  EXPECT_EQ(p.polynomial->mean(), mean);
  EXPECT_DOUBLE_EQ(*p.exact_mean, mean.convert_to<double>());
  EXPECT_NEAR(midpoint_rule(p, 10000000), *p.exact_mean, 1e-10);
  EXPECT_DOUBLE_EQ(*p.lipschitz, 2 + 1 + 12);
}

TEST(ModulusBound, LinearInT) {
  const auto f = I::lookup("smooth1d");
  EXPECT_DOUBLE_EQ(I::modulus_bound(f, 0.25), 2 * std::exp(1.0) * 0.25);
  EXPECT_DOUBLE_EQ(I::modulus_bound(f, 0.5), 2 * I::modulus_bound(f, 0.25));
  // sup |f'| is attained at x = 1.
  for (int i = 0; i < 1000; ++i) {
    const double x = i / 1000.0;
    EXPECT_LE((1 + x) * std::exp(x), *f.lipschitz + 1e-12);
  }
  EXPECT_THROW((void)I::modulus_bound(I::lookup("otl6d"), 0.1), std::invalid_argument);
  EXPECT_THROW((void)I::modulus_bound(f, -1.0), std::invalid_argument);
}
