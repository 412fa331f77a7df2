#ifndef BEZPROJ_SCALAR_HPP
#define BEZPROJ_SCALAR_HPP

// Scalar abstraction shared by every quadrature-free operator. The library is
// instantiated for `double` and for exact rationals; the rational path is what
// lets operator dumps reproduce hand-derived matrices bit for bit.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "bezproj/errors.hpp"

namespace bezproj {

using Rational = boost::multiprecision::cpp_rational;

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double from_int(std::int64_t v) { return static_cast<double>(v); }
  static double from_fraction(std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  // Two knot values closer than this are the same knot.
  static double snap() { return 1e-12; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_int(std::int64_t v) { return Rational(v); }
  static Rational from_fraction(std::int64_t num, std::int64_t den) {
    return Rational(num, den);
  }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
  static Rational snap() { return Rational(0); }
};

template <typename T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
T from_int(std::int64_t v) {
  return ScalarTraits<T>::from_int(v);
}

template <Scalar T>
double to_double(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

template <Scalar T>
T abs_value(const T& v) {
  return ScalarTraits<T>::abs(v);
}

/// Equality under the scalar's snapping tolerance (exact for rationals).
template <Scalar T>
bool nearly_equal(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= ScalarTraits<T>::snap() * scale;
  }
}

/// Parses "n", "n/d" or a decimal literal into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw ParseError("empty rational literal");
  auto parse_int = [](std::string_view s) {
    if (s.empty()) throw ParseError("malformed rational literal");
    std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (i == s.size()) throw ParseError("malformed rational literal");
    for (std::size_t k = i; k < s.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(s[k]))) {
        throw ParseError("malformed rational literal '" + std::string(s) + "'");
      }
    }
    return boost::multiprecision::cpp_int(std::string(s.front() == '+' ? s.substr(1) : s));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(trim(text.substr(0, slash))), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (frac.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("malformed decimal literal '" + std::string(text) + "'");
    }
    boost::multiprecision::cpp_int den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    const bool negative = !digits.empty() && digits.front() == '-';
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    auto whole = parse_int(digits);
    boost::multiprecision::cpp_int num = (negative ? -whole : whole) * den;
    if (!frac.empty()) num += parse_int(frac);
    return Rational(negative ? boost::multiprecision::cpp_int(-num) : num, den);
  }
  return Rational(parse_int(text));
}

/// "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& v) {
  auto num = boost::multiprecision::numerator(v);
  auto den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace bezproj

#endif  // BEZPROJ_SCALAR_HPP
