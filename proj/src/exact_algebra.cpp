#include "cpvdw/exact_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "cpvdw/errors.hpp"

namespace cpvdw::algebra {

namespace {

Rational binomial(unsigned n, unsigned k) {
  Rational r(1);
  for (unsigned i = 1; i <= k; ++i) r = r * Rational(n - k + i, i);
  return r;
}

int degree_of(const UPolynomial& F) {
  int deg = static_cast<int>(F.size()) - 1;
  while (deg > 0 && F[static_cast<std::size_t>(deg)].is_zero()) --deg;
  return deg;
}

}  // namespace

void AngularPolynomial::add(const AngularMonomial& m, const Rational& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Rational AngularPolynomial::coefficient(const AngularMonomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

MomentPairTable::MomentPairTable(std::initializer_list<std::pair<const Key, Rational>> init) {
  for (const auto& [key, coeff] : init) add(key.first, key.second, coeff);
}

void MomentPairTable::add(unsigned a, unsigned b, const Rational& coeff) {
  if (coeff.is_zero()) return;
  const Key key{std::min(a, b), std::max(a, b)};
  auto [it, inserted] = entries_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

Rational MomentPairTable::coefficient(unsigned a, unsigned b) const {
  const auto it = entries_.find(Key{std::min(a, b), std::max(a, b)});
  return it == entries_.end() ? Rational(0) : it->second;
}

unsigned MomentPairTable::max_exponent() const {
  unsigned m = 0;
  for (const auto& [key, coeff] : entries_) m = std::max(m, key.second);
  return m;
}

MomentPairTable& MomentPairTable::operator+=(const MomentPairTable& other) {
  for (const auto& [key, coeff] : other.entries_) add(key.first, key.second, coeff);
  return *this;
}

MomentPairTable operator*(const Rational& s, const MomentPairTable& t) {
  MomentPairTable out;
  for (const auto& [key, coeff] : t.entries_) out.add(key.first, key.second, s * coeff);
  return out;
}

std::string MomentPairTable::to_json() const {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& [key, coeff] : entries_) {
    entries.push_back({{"a", key.first}, {"b", key.second}, {"num", coeff.numerator()}, {"den", coeff.denominator()}});
  }
  nlohmann::ordered_json doc;
  doc["entries"] = std::move(entries);
  return doc.dump();
}

MomentPairTable MomentPairTable::from_json(const std::string& text) {
  MomentPairTable table;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& e : doc.at("entries")) {
      table.add(e.at("a").get<unsigned>(), e.at("b").get<unsigned>(),
                Rational::from_strings(e.at("num").get<std::string>(), e.at("den").get<std::string>()));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("malformed moment table JSON: ") + ex.what());
  }
  return table;
}

AngularPolynomial expand_u_polynomial(const UPolynomial& F) {
  if (F.empty()) throw DomainError("u-polynomial must have at least one coefficient");
  const int deg = degree_of(F);
  if (deg > kMaxDegree) throw UnsupportedDegreeError(deg, kMaxDegree);

  // u^n = Σ_k C(n,k) (cos φ·Y1Y2)^k (X1X2)^{n-k}
  AngularPolynomial p;
  for (int n = 0; n <= deg; ++n) {
    const Rational& fn = F[static_cast<std::size_t>(n)];
    if (fn.is_zero()) continue;
    const auto un = static_cast<unsigned>(n);
    for (unsigned k = 0; k <= un; ++k) {
      p.add(AngularMonomial{un - k, un - k, k, k}, fn * binomial(un, k));
    }
  }
  return p;
}

Rational wallis_factor(unsigned c) {
  if (c % 2 != 0) return Rational(0);
  Rational r(1);
  for (unsigned i = 2; i <= c; i += 2) r = r * Rational(i - 1, i);
  return r;
}

AngularPolynomial phi_average(const AngularPolynomial& p) {
  AngularPolynomial out;
  for (const auto& [m, coeff] : p.terms()) {
    out.add(AngularMonomial{m.a, m.b, m.j, 0}, coeff * wallis_factor(m.c));
  }
  return out;
}

MomentPairTable reduce_to_moments(const UPolynomial& F) {
  const AngularPolynomial averaged = phi_average(expand_u_polynomial(F));

  MomentPairTable table;
  for (const auto& [m, coeff] : averaged.terms()) {
    if (m.j % 2 != 0) {
      throw ContractViolation("odd power of Y1*Y2 survived the azimuthal average");
    }
    // (Y1Y2)^j = (1-X1²)^{j/2} (1-X2²)^{j/2}
    const unsigned half = m.j / 2;
    for (unsigned p = 0; p <= half; ++p) {
      const Rational cp = binomial(half, p) * Rational(p % 2 == 0 ? 1 : -1);
      for (unsigned q = 0; q <= half; ++q) {
        const Rational cq = binomial(half, q) * Rational(q % 2 == 0 ? 1 : -1);
        table.add(m.a + 2 * p, m.b + 2 * q, coeff * cp * cq);
      }
    }
  }
  for (const auto& [key, coeff] : table.entries()) {
    if ((key.first + key.second) % 2 != 0) {
      throw ContractViolation("moment table entry with odd a+b");
    }
  }
  return table;
}

UPolynomial family_polynomial(int j) {
  switch (j) {
    case 1: return {1, 0, 1};
    case 2: return {0, 1, 0, -1};
    case 3: return {1, 0, -2, 0, 1};
    default: throw DomainError("family index must be 1, 2 or 3");
  }
}

int family_index(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (n == "F1") return 1;
  if (n == "F2") return 2;
  if (n == "F3") return 3;
  throw DomainError("unknown family '" + name + "' (expected F1, F2 or F3)");
}

UPolynomial parse_u_polynomial(const std::string& csv) {
  UPolynomial F;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char ch) { return std::isspace(ch); }), item.end());
    if (item.empty()) throw DomainError("empty coefficient in '" + csv + "'");
    F.push_back(Rational::parse(item));
  }
  if (F.empty()) throw DomainError("no coefficients in '" + csv + "'");
  return F;
}

}  // namespace cpvdw::algebra
