#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "cpvdw/errors.hpp"
#include "cpvdw/kernels.hpp"

using namespace cpvdw;
using namespace cpvdw::kernels;

namespace {
quad::QuadratureSpec oracle_spec() {
  quad::QuadratureSpec s;
  s.rel_tol = 1e-10;
  s.abs_tol = 5e-9;
  return s;
}
double closed(int n, double t) { return kernel_closed(KernelId(n), t).magnitude; }
}  // namespace

TEST_CASE("closed-form values") {
  const double pi = std::numbers::pi;
  CHECK(closed(0, 0.0) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(closed(3, 0.0) == doctest::Approx(-6 * pi).epsilon(1e-15));
  CHECK(closed(0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(closed(1, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(closed(2, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(kernel_closed(KernelId(3), 2.0).parity == Parity::Odd);
  CHECK(kernel_closed(KernelId(4), 2.0).parity == Parity::Even);
  CHECK_THROWS_AS(kernel_closed(KernelId(0), -1e-3), DomainError);
  CHECK_THROWS_AS(KernelId(5), DomainError);
  CHECK(arccot(0.0) == doctest::Approx(pi / 2));
  CHECK(arccot(1.0) == doctest::Approx(pi / 4));
}

TEST_CASE("inner moments") {
  CHECK(std::abs(inner_moment(KernelId(0), std::numbers::pi)) < 1e-15);
  const auto m1 = inner_moment(KernelId(1), 1e-4);
  CHECK(m1.real() == doctest::Approx(0.0));
  CHECK(m1.imag() == doctest::Approx(2e-4 / 3).epsilon(1e-8));
  const auto m2 = inner_moment(KernelId(2), 1.0);
  CHECK(m2.real() == doctest::Approx(2 * (2 * std::cos(1.0) - std::sin(1.0))).epsilon(1e-14));
  CHECK(std::abs(m2.imag()) < 1e-15);
  CHECK(inner_moment(KernelId(4), 0.0).real() == doctest::Approx(0.4));
}

TEST_CASE("inner moment against direct quadrature of the X integral") {
  quad::QuadratureSpec s;
  s.rel_tol = 1e-13;
  s.abs_tol = 1e-14;
  for (int n = 0; n <= 4; ++n) {
    for (double r : {0.1, 0.7, 3.0, 25.0}) {
      const auto re = quad::integrate_interval([&](double X) { return std::pow(X, n) * std::cos(r * X); }, -1, 1, s);
      const auto im = quad::integrate_interval([&](double X) { return std::pow(X, n) * std::sin(r * X); }, -1, 1, s);
      const auto m = inner_moment(KernelId(n), r);
      CHECK(std::abs(m.real() - re.value) < 1e-13);
      CHECK(std::abs(m.imag() - im.value) < 1e-13);
    }
  }
}

TEST_CASE("Taylor and recursion agree at the switchover radius") {
  for (int n = 0; n <= 4; ++n) {
    const auto a = inner_moment_series(KernelId(n), kTaylorSwitch);
    const auto b = inner_moment_recursive(KernelId(n), kTaylorSwitch);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
  }
}

TEST_CASE("oracle examples at t = 1") {
  quad::QuadratureSpec s;
  s.rel_tol = 1e-12;
  s.abs_tol = 1e-12;
  CHECK(std::abs(kernel_numeric(KernelId(0), 1.0, s).magnitude - 1.0) < 1e-10);
  const auto k1 = kernel_numeric(KernelId(1), 1.0, s);
  CHECK(k1.parity == Parity::Odd);
  CHECK(std::abs(k1.magnitude - 2.0) < 1e-10);
  CHECK(std::abs(kernel_numeric(KernelId(2), 1.0, s).magnitude + 1.0) < 1e-10);
}

TEST_CASE("oracle rejects the misprinted <1> numerator") {
  const double t = 2.0;
  const double misprinted = (-4 + 12 * t) / std::pow(1 + t * t, 3);
  const double oracle = kernel_numeric(KernelId(0), t, oracle_spec()).magnitude;
  CHECK(std::abs(oracle - closed(0, t)) < 1e-9);
  CHECK(std::abs(oracle - misprinted) > 0.1);
}

TEST_CASE("closed form matches the oracle on 40 log-spaced t") {
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double t = std::pow(10.0, -2.0 + 4.0 * i / 39);
    for (int n = 0; n <= 4; ++n) {
      const auto num = kernel_numeric_detailed(KernelId(n), t, oracle_spec());
      const double c = closed(n, t);
      worst = std::max(worst, std::abs(c - num.value.magnitude) / (1 + std::abs(c)));
      CHECK(std::abs(num.discarded) <= std::max(5e-9, 1e-10 * std::abs(c)) + num.error_estimate);
      CHECK((num.value.parity == Parity::Odd) == (n % 2 == 1));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("large-t branch is continuous and decays like 1/t^2") {
  for (int n = 0; n <= 4; ++n) {
    const double below = closed(n, std::nextafter(4.0, 0.0));
    const double at = closed(n, 4.0);
    CHECK(std::abs(below - at) <= 1e-13 * (1 + std::abs(at)));
    for (double t : {10.0, 100.0, 1e3, 1e5}) CHECK(std::abs(closed(n, t)) * t * t <= 50.0);
  }
  // s = 1/t series against the direct formula, evaluated in long double away from cancellation
  const long double t = 6.0L;
  const long double d = (1 + t * t) * (1 + t * t) * (1 + t * t);
  const long double K4 = 4 * (3 + 27 * t * t + 32 * t * t * t * t + 12 * t * t * t * t * t * t) / d -
                         48 * t * std::atan(1 / t);
  CHECK(std::abs(closed(4, 6.0) - static_cast<double>(K4)) < 1e-14);
}

TEST_CASE("oracle refuses tiny t") {
  CHECK_THROWS_AS(kernel_numeric(KernelId(0), 5e-4, oracle_spec()), DomainError);
}

TEST_CASE("kernel table csv") {
  std::ostringstream os;
  const std::vector<double> ts{0.5, 1.0};
  write_kernel_table(os, ts);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line[0] == '#');
  std::getline(is, line);
  CHECK(line == "t,K0,K1,K2,K3,K4");
  std::getline(is, line);
  CHECK(line.rfind("0.5,", 0) == 0);
}
