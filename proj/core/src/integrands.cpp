#include "rqmc/integrands.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rqmc::integrands {

namespace {

void check_dim(std::span<const double> x, std::size_t d, const char* name) {
  if (x.size() != d) {
    throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(d) + " coordinates, got " +
                                std::to_string(x.size()));
  }
}

// Accepts "p/q", integers and plain decimals such as -0.25.
Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty coefficient");
  const auto dot = text.find('.');
  try {
    if (dot == std::string::npos) return Rational(text);
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto places = static_cast<unsigned>(text.size() - dot - 1);
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument(text);
    if (digits[0] == '+') digits.erase(0, 1);
    return Rational(BigInt(digits), BigInt(boost::multiprecision::pow(BigInt(10), places)));
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse coefficient '" + text + "'");
  }
}

}  // namespace

double otl_circuit(double rb1, double rb2, double rf, double rc1, double rc2, double beta) {
  const double vb1 = 12.0 * rb2 / (rb1 + rb2);
  const double b = beta * (rc2 + 9.0);
  const double den = b + rf;
  return (vb1 + 0.74) * b / den + 11.35 * rf / den + 0.74 * rf * b / (den * rc1);
}

Integrand make_smooth1d() {
  Integrand f;
  f.name = "smooth1d";
  f.eval = [](std::span<const double> x) {
    check_dim(x, 1, "smooth1d");
    return x[0] * std::exp(x[0]);
  };
  f.exact_mean = 1.0;
  // f^{(k)}(1/2) = (k + 1/2) e^{1/2}, and (k + 1/2) e^{1/2} / k! <= 3 for k >= 1.
  f.smoothness = Analytic{3.0, 1.0};
  f.lipschitz = 2.0 * std::exp(1.0);
  return f;
}

Integrand make_holder1d() {
  Integrand f;
  f.name = "holder1d";
  f.eval = [](std::span<const double> x) {
    check_dim(x, 1, "holder1d");
    const double u = x[0] - 1.0 / 3.0;
    return u * std::fabs(u);
  };
  // u^2 |u| / 3 evaluated between -1/3 and 2/3.
  f.exact_mean = 7.0 / 81.0;
  // f' = 2|x - 1/3| is Lipschitz with constant 2 and total variation 2.
  f.smoothness = Holder{1, 1.0, 2.0, 4.0 / 3.0};
  f.lipschitz = 4.0 / 3.0;
  return f;
}

Integrand make_otl6d() {
  Integrand f;
  f.name = "otl6d";
  f.dim = 6;
  f.eval = [](std::span<const double> x) {
    check_dim(x, 6, "otl6d");
    double v[6];
    for (int j = 0; j < 6; ++j) v[j] = kOtlRanges[j].lo + (kOtlRanges[j].hi - kOtlRanges[j].lo) * x[j];
    return otl_circuit(v[0], v[1], v[2], v[3], v[4], v[5]);
  };
  return f;
}

Integrand make_const(double c) {
  Integrand f;
  f.name = "const";
  f.eval = [c](std::span<const double> x) {
    check_dim(x, 1, "const");
    return c;
  };
  f.exact_mean = c;
  f.smoothness = Analytic{0.0, 1.0};
  f.lipschitz = 0.0;
  f.constant = true;
  return f;
}

Integrand make_poly(const walsh::Polynomial& p) {
  Integrand f;
  f.name = "poly";
  f.eval = [p](std::span<const double> x) {
    check_dim(x, 1, "poly");
    return p(x[0]);
  };
  f.exact_mean = p.mean().convert_to<double>();
  const auto cert = walsh::certify_polynomial(p);
  f.smoothness = Analytic{cert.A, cert.alpha};
  f.lipschitz = p.lipschitz_bound();
  f.polynomial = p;
  f.constant = p.degree() == 0;
  return f;
}

const std::vector<Integrand>& registry() {
  static const std::vector<Integrand> entries = [] {
    std::vector<Integrand> out;
    out.push_back(make_smooth1d());
    out.push_back(make_holder1d());
    out.push_back(make_otl6d());
    out.push_back(make_const(1.0));
    out.push_back(make_poly(walsh::Polynomial({0, 0, 1})));
    return out;
  }();
  return entries;
}

Integrand lookup(const std::string& key) {
  const auto colon = key.find(':');
  if (colon != std::string::npos) {
    const auto head = key.substr(0, colon);
    const auto body = key.substr(colon + 1);
    if (head == "const") {
      std::size_t used = 0;
      double c = 0.0;
      try {
        c = std::stod(body, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != body.size()) throw std::invalid_argument("bad constant in '" + key + "'");
      return make_const(c);
    }
    if (head == "poly") {
      std::vector<Rational> coef;
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) coef.push_back(parse_rational(item));
      if (coef.empty()) throw std::invalid_argument("poly needs at least one coefficient");
      if (coef.size() > static_cast<std::size_t>(walsh::kMaxChiOrder) + 1) {
        throw std::invalid_argument("poly degree exceeds 12");
      }
      return make_poly(walsh::Polynomial(std::move(coef)));
    }
    throw std::invalid_argument("unknown integrand '" + key + "'");
  }
  for (const auto& f : registry()) {
    if (f.name == key) return f;
  }
  throw std::invalid_argument("unknown integrand '" + key + "' (smooth1d|holder1d|otl6d|const[:c]|poly[:a0,a1,...])");
}

double modulus_bound(const Integrand& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("modulus_bound: t must be >= 0");
  if (f.constant) return 0.0;
  if (!f.lipschitz) throw std::invalid_argument("modulus_bound: integrand '" + f.name + "' has no Lipschitz metadata");
  return *f.lipschitz * t;
}

}  // namespace rqmc::integrands
