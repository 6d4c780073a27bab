#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace busyq {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator. Arithmetic is exact; there is no rounding anywhere. Backed by
/// GMP's mpq layer.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long value) : q_(value) {}          // NOLINT: implicit on purpose
  Rational(int value) : q_(static_cast<long>(value)) {}
  Rational(long num, long den);

  /// Accepts "p/q", plain integers, and decimal strings ("0.25", "2.5e-3").
  /// Decimal input is converted exactly, never through a binary float.
  static Rational parse(std::string_view text);

  /// Canonical "p/q" form, denominator always present ("1/1", "-2/3").
  std::string str() const;

  /// Decimal rendering of the nearest double, 17 significant digits.
  std::string decimal17() const;

  double to_double() const { return q_.get_d(); }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  /// Integer power; negative exponents require a nonzero base.
  Rational pow(long exponent) const;

  /// binom(n, k) as an exact rational (0 when k > n).
  static Rational binomial(unsigned long n, unsigned long k);

  Rational operator-() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) > 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) >= 0; }

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) {}

  mpq_class q_;
};

Rational abs(const Rational& x);

std::ostream& operator<<(std::ostream& os, const Rational& x);

}  // namespace busyq
