#include "busyq/rational.hpp"

#include <cctype>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "busyq/error.hpp"

namespace busyq {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10z(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

[[noreturn]] void bad(std::string_view text, const char* why) {
  throw Error(ErrorKind::ParseError,
              "cannot parse rational \"" + std::string(text) + "\": " + why);
}

}  // namespace

Rational::Rational(long num, long den) : q_(num, den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  q_ /= o.q_;
  return *this;
}

Rational Rational::operator-() const {
  Rational r(*this);
  r.q_ = -r.q_;
  return r;
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad(text, "empty string");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
    if (s.empty()) bad(text, "sign without digits");
  }

  // "p/q" form: numerator sign already consumed, denominator is bare digits.
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text, "expected integer/integer");
    mpz_class n(std::string(num), 10), d(std::string(den), 10);
    if (sgn(d) == 0) bad(text, "zero denominator");
    mpq_class q(n, d);
    q.canonicalize();
    if (negative) q = -q;
    return Rational(q);
  }

  // Decimal form, converted exactly: digits[.digits][e[+-]digits].
  std::string_view mantissa = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    std::string_view es = s.substr(e + 1);
    bool eneg = false;
    if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
      eneg = es.front() == '-';
      es.remove_prefix(1);
    }
    if (!all_digits(es) || es.size() > 4) bad(text, "bad exponent");
    for (char c : es) exp10 = exp10 * 10 + (c - '0');
    if (eneg) exp10 = -exp10;
  }

  std::string digits;
  long frac_len = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view ipart = mantissa.substr(0, dot);
    std::string_view fpart = mantissa.substr(dot + 1);
    if (ipart.empty() && fpart.empty()) bad(text, "no digits");
    if (!ipart.empty() && !all_digits(ipart)) bad(text, "bad integer part");
    if (!fpart.empty() && !all_digits(fpart)) bad(text, "bad fraction part");
    digits = std::string(ipart) + std::string(fpart);
    frac_len = static_cast<long>(fpart.size());
  } else {
    if (!all_digits(mantissa)) bad(text, "not a number");
    digits = std::string(mantissa);
  }
  if (digits.empty()) bad(text, "no digits");

  mpz_class n(digits, 10);
  mpz_class d(1);
  long net = exp10 - frac_len;
  if (net >= 0) {
    n *= pow10z(static_cast<unsigned long>(net));
  } else {
    d = pow10z(static_cast<unsigned long>(-net));
  }
  mpq_class q(n, d);
  q.canonicalize();
  if (negative) q = -q;
  return Rational(q);
}

std::string Rational::str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal17() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", to_double());
  return buf;
}

Rational Rational::pow(long exponent) const {
  if (exponent == 0) return Rational(1);
  bool invert = exponent < 0;
  unsigned long e = invert ? static_cast<unsigned long>(-exponent)
                           : static_cast<unsigned long>(exponent);
  if (invert && is_zero()) throw std::domain_error("Rational: 0 to negative power");
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q_.get_num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), q_.get_den().get_mpz_t(), e);
  mpq_class r = invert ? mpq_class(d, n) : mpq_class(n, d);
  r.canonicalize();
  return Rational(r);
}

Rational Rational::binomial(unsigned long n, unsigned long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(mpq_class(b));
}

Rational abs(const Rational& x) {
  return x.sign() < 0 ? -x : x;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) {
  return os << x.str();
}

}  // namespace busyq
