#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "containerbench/errors.hpp"

namespace cbench {

using Rational = boost::rational<std::int64_t>;

/// Parses a rational written as "p/q" or a bare integer "p". Decimal
/// notation is rejected so thresholds are never subject to float rounding.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw PreconditionError("malformed rational '" + std::string(text) + "'");
    std::size_t i = 0;
    bool negative = false;
    if (s[0] == '-' || s[0] == '+') {
      negative = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw PreconditionError("malformed rational '" + std::string(text) + "'");
    std::int64_t value = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw PreconditionError("malformed rational '" + std::string(text) +
                                "' (expected p/q with integer p, q)");
      value = value * 10 + (s[i] - '0');
      if (value > (std::int64_t{1} << 50))
        throw PreconditionError("rational component out of range in '" + std::string(text) + "'");
    }
    return negative ? -value : value;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  auto num = parse_int(text.substr(0, slash));
  auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw PreconditionError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Smallest integer >= r.
inline std::int64_t ceil(const Rational& r) {
  auto q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

// Largest integer <= r.
inline std::int64_t floor(const Rational& r) {
  auto q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

}  // namespace cbench
