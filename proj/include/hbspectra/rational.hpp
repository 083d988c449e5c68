#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "hbspectra/error.hpp"

namespace hbspectra {

using Rational = mpq_class;
using Integer = mpz_class;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// CSV field, quoted when it contains a comma, quote, or edge whitespace.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + '"';
}

// num / den, canonicalized.
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational r;
  mpq_set_num(r.get_mpq_t(), num.get_mpz_t());
  mpq_set_den(r.get_mpq_t(), den.get_mpz_t());
  r.canonicalize();
  return r;
}

inline Rational parse_decimal(std::string_view text, std::string_view original) {
  auto bad = [&] { return ParseError("not a rational number: '" + std::string(original) + "'"); };
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) throw bad();
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw bad();
  if (!int_part.empty() && !all_digits(int_part)) throw bad();
  if (!frac_part.empty() && !all_digits(frac_part)) throw bad();
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<long>(frac_part.size());

  const Integer numerator(digits, 10);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational value = exponent < 0 ? ratio(numerator, scale) : Rational(numerator * scale);
  return negative ? Rational(-value) : value;
}

}  // namespace detail

/// Parses "p/q", an integer, or a decimal string such as "0.25" or "1e-3"
/// into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (s.empty()) throw ParseError("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = detail::trim(s.substr(0, slash));
    std::string_view den = detail::trim(s.substr(slash + 1));
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
      num_digits.remove_prefix(1);
    if (!detail::all_digits(num_digits) || !detail::all_digits(den))
      throw ParseError("not a rational number: '" + std::string(text) + "'");
    const Integer d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    std::string n(num);
    if (!n.empty() && n.front() == '+') n.erase(0, 1);
    return detail::ratio(Integer(n, 10), d);
  }
  return detail::parse_decimal(s, text);
}

/// Canonical text form: "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& value) {
  Rational r = value;
  r.canonicalize();
  return r.get_str();
}

inline double to_double(const Rational& value) { return value.get_d(); }

/// Nearest rational with denominator at most `max_denominator`
/// (continued-fraction convergents). Used where a float parameter must be
/// brought into exact arithmetic.
inline Rational approximate_rational(double x, long max_denominator = 1000000) {
  if (!(x == x)) throw ValidationError("cannot approximate NaN");
  const bool negative = x < 0;
  if (negative) x = -x;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double whole = static_cast<double>(static_cast<long>(rem));
    const long a = static_cast<long>(whole);
    const long q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    const long p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = rem - whole;
    if (frac < 1e-15) break;
    rem = 1.0 / frac;
  }
  Rational r(p1, q1);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace hbspectra
