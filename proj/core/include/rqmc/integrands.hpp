#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rqmc/walsh.hpp"

namespace rqmc::integrands {

/// |f^{(k)}(1/2)| <= A alpha^k k! for all k.
struct Analytic {
  double A;
  double alpha;
};

/// f^{(p)} exists and is lambda-Hoelder with lambda-variation at most V;
/// A bounds sup |f^{(p)}|.
struct Holder {
  int p;
  double lambda;
  double V;
  double A;
};

using Smoothness = std::variant<std::monostate, Analytic, Holder>;

struct Integrand {
  std::string name;
  int dim = 1;
  std::function<double(std::span<const double>)> eval;
  std::optional<double> exact_mean;
  Smoothness smoothness;
  std::optional<double> lipschitz;  // sup |f'| (1-D) or a Lipschitz constant in the sup norm
  std::optional<walsh::Polynomial> polynomial;
  bool constant = false;

  double operator()(std::span<const double> x) const { return eval(x); }
};

Integrand make_smooth1d();
Integrand make_holder1d();
Integrand make_otl6d();
Integrand make_const(double c);
Integrand make_poly(const walsh::Polynomial& f);

/// The named entries: smooth1d, holder1d, otl6d, const (c = 1), poly (x^2).
const std::vector<Integrand>& registry();

/// Resolves a CLI key. Besides the registry names this accepts
/// "const:<c>" and "poly:<a0>,<a1>,..." with rational coefficients such
/// as 1/3. Throws std::invalid_argument for unknown keys.
Integrand lookup(const std::string& key);

/// Upper bound on the modulus of continuity omega_f(t). Throws
/// std::invalid_argument when f carries no Lipschitz metadata.
double modulus_bound(const Integrand& f, double t);

/// OTL circuit midpoint voltage in physical units (Rb1, Rb2, Rf, Rc1, Rc2, beta).
double otl_circuit(double rb1, double rb2, double rf, double rc1, double rc2, double beta);

struct Range {
  double lo;
  double hi;
};
/// Input ranges of the OTL circuit, in the argument order of otl_circuit.
inline constexpr Range kOtlRanges[6] = {{50.0, 150.0}, {25.0, 70.0}, {0.5, 3.0},
                                        {1.2, 2.5},   {0.25, 1.2}, {50.0, 300.0}};

}  // namespace rqmc::integrands
