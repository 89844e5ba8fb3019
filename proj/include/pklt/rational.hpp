#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace pklt {

/// Exact rational; always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

namespace detail {
inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}
}  // namespace detail

/// Parses "p", "-p", "p/q" or "-p/q". Anything else (decimals, exponents,
/// whitespace) is rejected.
inline Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!detail::all_digits(num) || !detail::all_digits(den))
    throw std::invalid_argument("not an exact rational: '" + std::string(text) + "'");
  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational r(n, d);
  return negative ? Rational(-r) : r;
}

inline std::string to_string(const Rational& r) {
  const Integer& num = boost::multiprecision::numerator(r);
  const Integer& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// A rational or negative infinity; the value type of infima over valuations.
struct ExtendedRational {
  bool neg_infinity = false;
  Rational value{0};

  static ExtendedRational minus_infinity() { return {true, Rational(0)}; }
  static ExtendedRational finite(Rational v) { return {false, std::move(v)}; }

  bool operator>(const Rational& r) const { return !neg_infinity && value > r; }
  bool operator>=(const Rational& r) const { return !neg_infinity && value >= r; }
  bool operator==(const ExtendedRational&) const = default;
};

inline std::string to_string(const ExtendedRational& r) {
  return r.neg_infinity ? std::string("-inf") : to_string(r.value);
}

}  // namespace pklt
