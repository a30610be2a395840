#pragma once

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "containerbench/rational.hpp"

namespace cbench {

using HighPrecision = boost::multiprecision::cpp_bin_float_100;

inline constexpr double kGuardBand = 1e-9;

/// Converts an exact rational into the floating type T.
template <typename T>
T as(const Rational& r) {
  return T(r.numerator()) / T(r.denominator());
}

/// lhs(T{}) <= rhs(T{}) for bound expressions containing logarithms. Both
/// callables are generic over the number type. The comparison runs in double
/// and is redone in 100-digit binary floating point whenever the two sides
/// fall within a relative band of 1e-9 of each other.
template <typename Lhs, typename Rhs>
bool guarded_leq(Lhs&& lhs, Rhs&& rhs) {
  const double a = lhs(double{});
  const double b = rhs(double{});
  const double band = kGuardBand * std::max({1.0, std::fabs(a), std::fabs(b)});
  if (a < b - band) return true;
  if (a > b + band) return false;
  return lhs(HighPrecision{}) <= rhs(HighPrecision{});
}

template <typename Lhs, typename Rhs>
bool guarded_less(Lhs&& lhs, Rhs&& rhs) {
  return !guarded_leq(std::forward<Rhs>(rhs), std::forward<Lhs>(lhs));
}

/// floor(x(T{})) evaluated with the same guard: an integer t satisfies
/// t <= x exactly when guarded_leq agrees.
template <typename X>
long long guarded_floor(X&& x) {
  auto guess = static_cast<long long>(std::floor(x(double{})));
  while (!guarded_leq([&](auto t) { return decltype(t)(guess); }, x)) --guess;
  while (guarded_leq([&](auto t) { return decltype(t)(guess + 1); }, x)) ++guess;
  return guess;
}

}  // namespace cbench
