#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cpvdw/constants.hpp"
#include "cpvdw/dispersion.hpp"
#include "cpvdw/errors.hpp"

using namespace cpvdw;
using namespace cpvdw::dispersion;

namespace {
const double pi = std::numbers::pi;
const double pi3 = pi * pi * pi;

double S(int j) {
  return compute_S(algebra::reduce_to_moments(algebra::family_polynomial(j)), quad::QuadratureSpec{});
}
PiRational pr(std::int64_t p, std::int64_t q, int power) { return {Rational(p, q), power}; }
}  // namespace

TEST_CASE("S integrals") {
  CHECK(std::abs(S(1) / (92 * pi3) - 1) < 1e-6);
  CHECK(std::abs(S(2) / (208 * pi3) - 1) < 1e-6);
  CHECK(std::abs(S(3) / (256 * pi3) - 1) < 1e-6);
  CHECK(reference_S(2) == pr(208, 1, 3));
}

TEST_CASE("odd-odd pairs carry the minus sign") {
  // ⟨X⟩⟨X⟩ alone: −4π²∫K1² < 0
  const algebra::MomentPairTable t{{{1, 1}, Rational(1)}};
  CHECK(compute_S(t, quad::QuadratureSpec{}) < 0.0);
}

TEST_CASE("polarization sums") {
  auto check = [](const Vec3& a, const Vec3& b) {
    const double u = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const auto [s1, s2] = polarization_sum_check(a, b);
    CHECK(std::abs(s1 - (1 + u * u)) < 1e-12);
    CHECK(std::abs(s2 - (1 - u * u)) < 1e-12);
  };
  const auto z = Vec3{0, 0, 1};
  auto [a, b] = polarization_sum_check(z, z);
  CHECK(a == doctest::Approx(2.0));
  CHECK(b == doctest::Approx(0.0));
  std::tie(a, b) = polarization_sum_check(z, Vec3{1, 0, 0});
  CHECK(a == doctest::Approx(1.0));
  CHECK(b == doctest::Approx(1.0));
  std::tie(a, b) = polarization_sum_check(z, Vec3{std::sqrt(3.0) / 2, 0, 0.5});
  CHECK(a == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(b == doctest::Approx(0.75).epsilon(1e-12));

  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    Vec3 p{g(rng), g(rng), g(rng)}, q{g(rng), g(rng), g(rng)};
    for (Vec3* v : {&p, &q}) {
      const double n = std::sqrt((*v)[0] * (*v)[0] + (*v)[1] * (*v)[1] + (*v)[2] * (*v)[2]);
      for (double& c : *v) c /= n;
    }
    check(p, q);
  }
  check(Vec3{0, 0, -1}, z);
  CHECK_THROWS_AS(polarization_sum_check(Vec3{0, 0, 2}, z), DomainError);
}

TEST_CASE("dreibein is a right-handed orthonormal frame") {
  for (const Vec3& k : {Vec3{0, 0, 1}, Vec3{0, 0, -1}, Vec3{0.6, 0, 0.8}, Vec3{0, 1, 0}}) {
    const auto [e1, e2, e3] = dreibein(k);
    auto dot = [](const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
    CHECK(dot(e1, e1) == doctest::Approx(1.0));
    CHECK(dot(e2, e2) == doctest::Approx(1.0));
    CHECK(std::abs(dot(e1, e2)) < 1e-15);
    CHECK(std::abs(dot(e1, k)) < 1e-15);
    CHECK(e3 == k);
    CHECK(e1[0] * e2[1] - e1[1] * e2[0] == doctest::Approx(k[2]));
  }
}

TEST_CASE("kappa examples") {
  CHECK(kappa_dimensionless({1, 0}).total == doctest::Approx(23 / (4 * pi)).epsilon(1e-15));
  CHECK(kappa_dimensionless({0, 1}).total == doctest::Approx(256 / pi).epsilon(1e-15));
  const double aM = -std::pow(1 / 137.035999, 2) / 4;
  const auto k = kappa_dimensionless({4.5, aM});
  const double expected = (4 / pi) * (23.0 / 16 * 20.25 + 26 * 4.5 * aM + 64 * aM * aM);
  CHECK(k.total == doctest::Approx(expected).epsilon(1e-14));
  CHECK(k.ee == doctest::Approx(1863 / (16 * pi)).epsilon(1e-15));
  CHECK(k.total == doctest::Approx(37.0609).epsilon(1e-5));
  CHECK(k.total == k.ee + k.em + k.mm);
  CHECK(k.scheme == Scheme::ThisPaper);
}

TEST_CASE("sign structure") {
  for (double e : {0.0, 0.5, 4.5}) {
    for (double m : {0.0, -1e-5, -0.3}) {
      for (const auto& k : {kappa_dimensionless({e, m}), feinberg_sucher_kappa({e, m})}) {
        CHECK(k.ee >= 0);
        CHECK(k.mm >= 0);
        CHECK(k.em <= 0);
      }
    }
  }
}

TEST_CASE("exact coefficients") {
  const CoefficientSet expected_kappa{pr(23, 4, -1), pr(104, 1, -1), pr(256, 1, -1)};
  CHECK(kappa_coefficients() == expected_kappa);
  const CoefficientSet fs{pr(23, 4, -1), pr(7, 2, -1), pr(23, 4, -1)};
  CHECK(feinberg_sucher_coefficients() == fs);

  const auto c = kappa_from_S(pr(92, 1, 3), pr(208, 1, 3), pr(256, 1, 3));
  // (23/16π, 26/π, 64/π)·(1/2π)²
  const PiRational quarter_pi2 = pr(1, 4, -2);
  CHECK(c.ee == pr(23, 16, -1) * quarter_pi2);
  CHECK(c.em == pr(26, 1, -1) * quarter_pi2);
  CHECK(c.mm == pr(64, 1, -1) * quarter_pi2);
  CHECK(c.ee.str() == "23/64*pi^-3");

  const auto zero = kappa_from_S(PiRational{}, PiRational{}, PiRational{});
  CHECK(zero.ee.is_zero());
  CHECK(zero.mm.is_zero());
  const auto doubled = kappa_from_S(pr(184, 1, 3), pr(416, 1, 3), pr(512, 1, 3));
  CHECK(doubled.em == Rational(2) * c.em);

  // e² → 4π turns the bare coefficients into κ's: a factor 16π²
  CHECK(pr(16, 1, 2) * c.ee == kappa_coefficients().ee);
  CHECK(pr(16, 1, 2) * c.em == kappa_coefficients().em);
  CHECK(pr(16, 1, 2) * c.mm == kappa_coefficients().mm);
}

TEST_CASE("Feinberg-Sucher comparison") {
  const auto fs = feinberg_sucher_kappa({1, 1});
  CHECK(fs.ee == fs.mm);
  CHECK(fs.em / fs.ee == doctest::Approx(14.0 / 23).epsilon(1e-15));
  CHECK(feinberg_sucher_kappa({1, 0}).ee == kappa_dimensionless({1, 0}).ee);
  CHECK(feinberg_sucher_kappa({0, 1}).mm / kappa_dimensionless({0, 1}).mm ==
        doctest::Approx(23.0 / 1024).epsilon(1e-15));
  CHECK(&kElectricElectric() == &kElectricElectric());
  CHECK(feinberg_sucher_coefficients().ee == kappa_coefficients().ee);
  CHECK(kappa_coefficients().em / feinberg_sucher_coefficients().em == PiRational(Rational(208, 7), 0));
}

TEST_CASE("Casimir-Polder limit") {
  CHECK(casimir_polder_limit(2) == doctest::Approx(-23 / (16 * pi3)).epsilon(1e-15));
  CHECK(casimir_polder_limit(0) == 0.0);
  for (double a : {1.0, 4.5, 0.3}) {
    const double k = kappa_dimensionless({a, 0}).total;
    CHECK(std::abs(k + casimir_polder_limit(4 * pi * a)) <= 1e-12 * k);
  }
}

TEST_CASE("unit systems") {
  CHECK_NOTHROW(UnitSystem::si_electronvolt().validate());
  CHECK_NOTHROW(UnitSystem::atomic(constants::kFineStructure).validate());
  auto u = UnitSystem::atomic(constants::kFineStructure);
  u.bohr_radius = 1.01;
  CHECK_THROWS_AS(u.validate(), DomainError);
  CHECK(UnitSystem::atomic(0.01).binding_scale() == doctest::Approx(100.0));
}

TEST_CASE("potential curves") {
  UnitSystem unit = UnitSystem::atomic(1.0);
  const auto one = potential_curve(1.0, 2.0, 2, 1.0, unit);
  CHECK(one[0].delta_E == -1.0);
  CHECK(one[1].delta_E == -1.0 / 128);

  const auto h = UnitSystem::atomic(1 / 137.035999);
  const auto c = potential_curve(100.0, 200.0, 2, 37.0585, h);
  CHECK(c[0].delta_E == doctest::Approx(-5.078e-11).epsilon(1e-3));
  CHECK(c[0].delta_E / c[1].delta_E == 128.0);

  const auto curve = potential_curve(3.0, 3000.0, 200, 37.06, UnitSystem::si_electronvolt());
  for (double s : loglog_slopes(curve)) CHECK(std::abs(s + 7) <= 1e-12);
  CHECK_THROWS_AS(potential_curve(2.0, 1.0, 10, 1.0, unit), DomainError);
  CHECK_THROWS_AS(potential_curve(1.0, 2.0, 1, 1.0, unit), DomainError);
}
