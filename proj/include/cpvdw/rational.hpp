#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace cpvdw {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Thin value wrapper over GMP's mpq_class; every constructor canonicalizes,
/// and every arithmetic result of mpq_class is already canonical.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n);  // NOLINT(google-explicit-constructor): integers are rationals
  Rational(std::int64_t num, std::int64_t den);
  /// Parses "p", "-p" or "p/q" in base 10.
  static Rational parse(const std::string& text);
  static Rational from_strings(const std::string& num, const std::string& den);

  std::string numerator() const { return value_.get_num().get_str(); }
  std::string denominator() const { return value_.get_den().get_str(); }
  std::string str() const;

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }
  double to_double() const { return value_.get_d(); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) <=> 0;
  }

  /// Integer power; negative exponents invert (zero base throws).
  Rational pow(int exponent) const;

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  explicit Rational(mpq_class v) : value_(std::move(v)) {}
  mpq_class value_{0};
};

/// Exact value q·π^n.
class PiRational {
 public:
  PiRational() = default;
  PiRational(Rational coeff, int pi_power) : coeff_(std::move(coeff)), pi_power_(coeff_.is_zero() ? 0 : pi_power) {}

  const Rational& coeff() const { return coeff_; }
  int pi_power() const { return pi_power_; }
  bool is_zero() const { return coeff_.is_zero(); }
  double to_double() const;
  /// e.g. "23/64*pi^-3"; zero prints as "0".
  std::string str() const;

  friend PiRational operator*(const PiRational& a, const PiRational& b) {
    return {a.coeff_ * b.coeff_, a.pi_power_ + b.pi_power_};
  }
  friend PiRational operator*(const Rational& s, const PiRational& p) { return {s * p.coeff_, p.pi_power_}; }
  friend PiRational operator/(const PiRational& a, const PiRational& b);
  /// Addition requires equal powers of π unless one side is zero.
  friend PiRational operator+(const PiRational& a, const PiRational& b);

  friend bool operator==(const PiRational& a, const PiRational& b) {
    return a.coeff_ == b.coeff_ && a.pi_power_ == b.pi_power_;
  }
  friend std::ostream& operator<<(std::ostream& os, const PiRational& p) { return os << p.str(); }

 private:
  Rational coeff_{0};
  int pi_power_ = 0;
};

}  // namespace cpvdw
