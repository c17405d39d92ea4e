#pragma once

// Exact angular reduction of two-direction momentum integrals.
//
// A polynomial F(u) in u = k̂1·k̂2 is rewritten, with k̂ = (Y cos φ, Y sin φ, X)
// and Y = sin ϑ, as a polynomial in (cos φ, Y1·Y2, X1, X2), averaged over the
// relative azimuth and reduced to products X1^a X2^b. The resulting table
// c_ab gives
//
//   S_F = ∫_0^∞ dt Σ c_ab <X^a>(t) <X^b>(t),
//   <A>(t) = 2π ∫_0^∞ dr r³ e^{-tr} ∫_{-1}^{1} dX e^{irX} A(X),
//
// for S_F = ∫dk1 dk2 |k1||k2|/(|k1|+|k2|) e^{i(k1+k2)·n̂} F(k̂1·k̂2).

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpvdw/rational.hpp"

namespace cpvdw::algebra {

inline constexpr int kMaxDegree = 8;

/// Coefficients of Σ F_n u^n, lowest power first.
using UPolynomial = std::vector<Rational>;

/// X1^a X2^b (Y1 Y2)^j cos^c φ
struct AngularMonomial {
  unsigned a = 0;
  unsigned b = 0;
  unsigned j = 0;
  unsigned c = 0;

  friend auto operator<=>(const AngularMonomial&, const AngularMonomial&) = default;
};

class AngularPolynomial {
 public:
  using Terms = std::map<AngularMonomial, Rational>;

  /// Adds coeff to the monomial; entries that cancel to zero are erased.
  void add(const AngularMonomial& m, const Rational& coeff);
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  /// Coefficient of m, zero when absent.
  Rational coefficient(const AngularMonomial& m) const;

  friend bool operator==(const AngularPolynomial&, const AngularPolynomial&) = default;

 private:
  Terms terms_;
};

/// Symmetric table of <X^a><X^b> coefficients keyed with a <= b.
class MomentPairTable {
 public:
  using Key = std::pair<unsigned, unsigned>;
  using Entries = std::map<Key, Rational>;

  MomentPairTable() = default;
  MomentPairTable(std::initializer_list<std::pair<const Key, Rational>> init);

  /// Adds coeff to the (a,b) entry; (b,a) merges into the same key.
  void add(unsigned a, unsigned b, const Rational& coeff);
  const Entries& entries() const { return entries_; }
  Rational coefficient(unsigned a, unsigned b) const;
  bool empty() const { return entries_.empty(); }
  unsigned max_exponent() const;

  MomentPairTable& operator+=(const MomentPairTable& other);
  friend MomentPairTable operator+(MomentPairTable a, const MomentPairTable& b) { return a += b; }
  friend MomentPairTable operator*(const Rational& s, const MomentPairTable& t);
  friend bool operator==(const MomentPairTable&, const MomentPairTable&) = default;

  /// {"entries":[{"a":0,"b":2,"num":"-1","den":"1"}, ...]} in key order.
  std::string to_json() const;
  static MomentPairTable from_json(const std::string& text);

 private:
  Entries entries_;
};

/// Multinomial expansion of F(cos φ·Y1Y2 + X1X2). Throws UnsupportedDegreeError above kMaxDegree.
AngularPolynomial expand_u_polynomial(const UPolynomial& F);

/// (1/2π)∮cos^c φ dφ: (c-1)!!/c!! for even c, 0 for odd c.
Rational wallis_factor(unsigned c);

/// Applies (1/2π)∮dφ to every term; the result has c = 0 throughout.
AngularPolynomial phi_average(const AngularPolynomial& p);

/// expand → phi_average → Y² = 1 − X² → collect into (a,b) pairs.
MomentPairTable reduce_to_moments(const UPolynomial& F);

/// The three weights of the R⁻⁷ integrals: 1+u², u−u³, (1−u²)².
UPolynomial family_polynomial(int j);
/// Parses "F1".."F3" (case-insensitive). Throws DomainError otherwise.
int family_index(const std::string& name);

/// Parses "1,0,-1/2" into a UPolynomial.
UPolynomial parse_u_polynomial(const std::string& csv);

}  // namespace cpvdw::algebra
