#include "mapperloss/exact.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mapperloss {

Rational exact_decimal(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string s(buf, res.ptr);
  // s looks like "-1.2345e+02"
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '-') {
    neg = true;
    ++i;
  }
  std::string digits;
  int frac = 0;
  bool after_dot = false;
  for (; i < s.size() && s[i] != 'e'; ++i) {
    if (s[i] == '.') {
      after_dot = true;
      continue;
    }
    digits += s[i];
    if (after_dot) ++frac;
  }
  int exp = 0;
  if (i < s.size()) exp = std::stoi(s.substr(i + 1));
  Integer mant(digits);
  int shift = exp - frac;
  Integer ten_pow = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
  Rational r = shift >= 0 ? Rational(mant * ten_pow) : Rational(mant, ten_pow);
  return neg ? Rational(-r) : r;
}

Integer floor_of(const Rational& q) {
  Integer n = boost::multiprecision::numerator(q);
  Integer d = boost::multiprecision::denominator(q);  // always positive
  Integer f = n / d;                                   // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

}  // namespace mapperloss
