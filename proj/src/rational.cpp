#include "cpvdw/rational.hpp"

#include <cmath>
#include <numbers>

#include "cpvdw/errors.hpp"

namespace cpvdw {

Rational::Rational(std::int64_t n) : value_(mpz_class(std::to_string(n)), 1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  value_ = mpq_class(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  value_.canonicalize();
}

Rational Rational::from_strings(const std::string& num, const std::string& den) {
  mpz_class n, d;
  if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0) {
    throw DomainError("malformed rational '" + num + "/" + den + "'");
  }
  if (d == 0) throw DomainError("rational with zero denominator");
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(std::move(q));
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return from_strings(text, "1");
  return from_strings(text.substr(0, slash), text.substr(slash + 1));
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return numerator();
  return numerator() + "/" + denominator();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("rational division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

Rational Rational::pow(int exponent) const {
  if (exponent < 0) {
    if (is_zero()) throw DomainError("zero to a negative power");
    return Rational(1) / pow(-exponent);
  }
  Rational result(1);
  Rational base = *this;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1U) result *= base;
    base *= base;
  }
  return result;
}

double PiRational::to_double() const { return coeff_.to_double() * std::pow(std::numbers::pi, pi_power_); }

std::string PiRational::str() const {
  if (is_zero()) return "0";
  if (pi_power_ == 0) return coeff_.str();
  return coeff_.str() + "*pi^" + std::to_string(pi_power_);
}

PiRational operator/(const PiRational& a, const PiRational& b) {
  return {a.coeff_ / b.coeff_, a.pi_power_ - b.pi_power_};
}

PiRational operator+(const PiRational& a, const PiRational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.pi_power_ != b.pi_power_) {
    throw DomainError("cannot add " + a.str() + " and " + b.str() + ": different powers of pi");
  }
  return {a.coeff_ + b.coeff_, a.pi_power_};
}

}  // namespace cpvdw
