#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "crosscov/error.hpp"

namespace crosscov {

/// Exact rational, always gcd-reduced with positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline int sign(const Rational& q) { return sgn(q); }

inline double to_double(const Rational& q) { return q.get_d(); }

/// Parses "p/q", an integer, or a decimal such as "-1.25" / "3e-2" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty rational");

  auto bad = [&]() { return Error(ErrorKind::ParseError, "malformed rational '" + s + "'"); };
  auto is_int = [](std::string_view v) {
    size_t i = (!v.empty() && (v[0] == '-' || v[0] == '+')) ? 1 : 0;
    if (i >= v.size()) return false;
    for (; i < v.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
    return true;
  };
  auto strip_plus = [](std::string v) { return (!v.empty() && v[0] == '+') ? v.substr(1) : v; };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+') throw bad();
    Integer d(strip_plus(den), 10);
    if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + s + "'");
    Rational q(Integer(strip_plus(num), 10), d);
    q.canonicalize();
    return q;
  }

  std::string mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    std::string ex = s.substr(e + 1);
    if (!is_int(ex)) throw bad();
    exponent = std::stol(ex);
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa = mantissa.substr(1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_dot) throw bad();
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  Integer value(digits, 10);
  long shift = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(value * ten_pow) : Rational(value, ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

/// Canonical "p/q" (or "p" for integers).
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Decimal rendering with `digits` fractional digits, rounded half away from zero.
inline std::string to_decimal(const Rational& q, int digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits < 0 ? 0 : digits));
  Rational scaled = abs(q) * scale;
  Integer rounded;
  Rational twice = scaled * 2 + 1;
  mpz_fdiv_q(rounded.get_mpz_t(), twice.get_num_mpz_t(), twice.get_den_mpz_t());
  mpz_fdiv_q_2exp(rounded.get_mpz_t(), rounded.get_mpz_t(), 1);
  std::string body = rounded.get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<size_t>(digits)) body.insert(0, digits - body.size() + 1, '0');
    body.insert(body.size() - digits, ".");
  }
  bool negative = q < 0 && rounded != 0;
  return negative ? "-" + body : body;
}

/// Exact square root when q is the square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

}  // namespace crosscov
