#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace incmax {

using Rational = boost::multiprecision::mpq_rational;

// Failure raised by library operations; `code` names the error kind.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Accepts "p/q", integers and finite decimals ("0.132", "-1.5e-3").
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
// Exact value of a finite binary64.
Rational from_double(double x);

}  // namespace incmax
