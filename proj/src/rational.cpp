#include "incmax/rational.hpp"

#include <cctype>
#include <cmath>

namespace incmax {

namespace {

boost::multiprecision::mpz_int parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error("ParseError", "empty number in '" + std::string(whole) + "'");
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw Error("ParseError", "bad digit in '" + std::string(whole) + "'");
  // A leading zero would select octal.
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return boost::multiprecision::mpz_int(std::string(s));
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = std::stol(std::string(s.substr(e + 1)));
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    exponent -= static_cast<long>(s.size() - dot - 1);
  } else {
    digits = std::string(s);
  }
  Rational q(parse_integer(digits, whole));
  boost::multiprecision::mpz_int scale = boost::multiprecision::pow(
      boost::multiprecision::mpz_int(10), static_cast<unsigned>(std::labs(exponent)));
  q = exponent >= 0 ? Rational(q * scale) : Rational(q / scale);
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash), text);
    Rational den = parse_decimal(text.substr(slash + 1), text);
    if (den == 0) throw Error("ParseError", "zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(text, text);
}

std::string to_string(const Rational& q) { return q.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error("ParseError", "non-finite value");
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // 53-bit mantissa as an integer
  auto m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational q{boost::multiprecision::mpz_int(m)};
  boost::multiprecision::mpz_int two(1);
  two <<= static_cast<unsigned>(std::abs(exp));
  return exp >= 0 ? Rational(q * two) : Rational(q / two);
}

}  // namespace incmax
