#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace rqmc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

/// 3 (ln 2)^2 / pi^2, the exponent constant of the 2^{-lambda m^2} rate.
inline constexpr double kLambda = 0.14604020416416226;

/// High precision copy of kLambda for boundary decisions.
BigFloat lambda_high_precision();

}  // namespace rqmc
