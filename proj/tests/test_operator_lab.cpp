#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "cpvdw/errors.hpp"
#include "cpvdw/operator_lab.hpp"

using namespace cpvdw;
using namespace cpvdw::oplab;

namespace {
const OperatorSet& set32() {
  static const OperatorSet s = build_oscillator(2, 32);
  return s;
}
const RVec k1{0.1, 0}, k2{0, 0.1}, e1{0, 1}, e2{1, 0};

// These two compare against the σ²[...] mixed-term form, which the oscillator
// misses by a factor of two (see README).
bool full_mixed_form(const std::string& name) {
  return name == "mixed_term_symmetrized" || name == "mixed_term_coefficient";
}
}  // namespace

TEST_CASE("oscillator build") {
  const auto& s = set32();
  CHECK(s.size() == 32 * 32);
  CHECK(std::abs(s.sigma2() - 0.5) < 1e-12);
  CHECK(ladder_commutator_residual(s) < 1e-10);
  CHECK(s.hamiltonian_diagonal()(0) == 0.0);
  CHECK(s.ground().norm() == doctest::Approx(1.0));
  CHECK((s.x_axis() - s.x_axis().transpose()).norm() == 0.0);
  CHECK((s.p_axis() - s.p_axis().adjoint()).norm() == 0.0);

  const auto s16 = build_oscillator(2, 16);
  const State x1 = s16.apply_position({1, 0}, s16.ground());
  const State x2 = s16.apply_position({0, 1}, s16.ground());
  CHECK(std::abs(x1.squaredNorm() - 0.5) < 1e-12);
  CHECK(std::abs(x1.dot(x2)) < 1e-15);

  CHECK_THROWS_AS(build_oscillator(2, 7), DomainError);
  CHECK_THROWS_AS(build_oscillator(4, 16), DomainError);
  CHECK_THROWS_AS(build_oscillator(3, 64), ResourceError);
}

TEST_CASE("[H, x] = -ip inside the truncation") {
  const auto& s = set32();
  // applied to a low-lying state: H x v − x H v = −i p v
  State v = State::Zero(s.size());
  v(3) = 0.6;
  v(32 * 2 + 1) = 0.8;
  const State lhs = s.apply_hamiltonian(s.apply_position({1, 0}, v)) - s.apply_position({1, 0}, s.apply_hamiltonian(v));
  const State rhs = std::complex<double>(0, -1) * s.apply_axis(s.p_axis(), 0, v);
  CHECK((lhs - rhs).norm() < 1e-13);
}

TEST_CASE("matrix exponential") {
  const auto& x = set32().x_axis();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x);
  for (double theta : {0.05, 0.5, 3.0}) {
    const Eigen::VectorXcd phases = (std::complex<double>(0, theta) * eig.eigenvalues().cast<std::complex<double>>()).array().exp();
    const Eigen::MatrixXcd V = eig.eigenvectors().cast<std::complex<double>>();
    const Eigen::MatrixXcd ref = V * phases.asDiagonal() * V.adjoint();
    const Eigen::MatrixXcd got = matrix_exponential(std::complex<double>(0, theta) * x.cast<std::complex<double>>());
    CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK((matrix_exponential(Eigen::MatrixXcd::Zero(4, 4)) - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-15);
  // nilpotent: e^a = 1 + a
  Eigen::MatrixXcd a(2, 2);
  a << 0, 1, 0, 0;
  const Eigen::MatrixXcd e = matrix_exponential(a);
  CHECK(std::abs(e(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(e(1, 0)) < 1e-15);
  // large norm exercises the squaring phase
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 10.0;
  d(1, 1) = std::complex<double>(0, 40.0);
  const Eigen::MatrixXcd ed = matrix_exponential(d);
  CHECK(std::abs(ed(0, 0) / std::exp(10.0) - 1.0) < 1e-12);
  CHECK(std::abs(ed(1, 1) - std::exp(std::complex<double>(0, 40.0))) < 1e-11);
}

TEST_CASE("ground-state identities at N = 32") {
  const auto r = verify_identities(set32(), k1, k2, e1, e2);
  CHECK(r.dimension == 2);
  CHECK(r.cutoff == 32);
  for (const auto& c : r.checks) {
    CHECK(c.pass == (c.residual <= c.tolerance));
    if (!full_mixed_form(c.name)) {
      INFO(c.name);
      CHECK(c.pass);
    }
  }
  CHECK(r.check("odd_moment_3").residual < 1e-12);
  CHECK(r.check("odd_moment_5").residual < 1e-12);
  CHECK(r.check("position_hamiltonian_position").residual < 1e-10);
  CHECK(set32().max_resolvent_overlap() < 1e-9);
  CHECK_THROWS_AS(r.check("nope"), DomainError);
  CHECK(r.to_json().find("\"checks\"") != std::string::npos);
}

TEST_CASE("parallel polarizations give 2<(e.x)H(e.x)> = 1") {
  const auto r = verify_identities(set32(), {0.2, 0}, {0.3, 0}, {0, 1}, {0, 1});
  CHECK(r.check("position_hamiltonian_position").residual < 1e-10);
  CHECK(r.check("mixed_term_oscillator_closed_form").pass);
}

TEST_CASE("mixed coefficient: N = 32 agrees with the N = 48 oracle") {
  const auto big = build_oscillator(2, 48);
  const auto a = verify_identities(set32(), k1, k2, e1, e2);
  const auto b = verify_identities(big, k1, k2, e1, e2);
  for (const auto& c : a.checks) {
    CHECK(std::abs(c.residual - b.check(c.name).residual) < 1e-10);
  }
}

TEST_CASE("residuals do not grow with N") {
  const RVec ka{0.3, 0.2}, kb{-0.1, 0.4};
  const double na = std::hypot(0.3, 0.2), nb = std::hypot(0.1, 0.4);
  const RVec ea{-0.2 / na, 0.3 / na}, eb{0.4 / nb, 0.1 / nb};
  std::vector<IdentityReport> reports;
  for (int N : {16, 24, 32}) reports.push_back(verify_identities(build_oscillator(2, N), ka, kb, ea, eb));
  for (std::size_t i = 0; i < reports[0].checks.size(); ++i) {
    const auto& name = reports[0].checks[i].name;
    if (full_mixed_form(name)) continue;
    INFO(name);
    CHECK(reports[1].checks[i].residual <= reports[0].checks[i].residual + 1e-13);
    CHECK(reports[2].checks[i].residual <= reports[1].checks[i].residual + 1e-13);
  }
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(verify_identities(set32(), {0.6, 0}, k2, e1, e2), DomainError);
  CHECK_THROWS_AS(verify_identities(set32(), k1, k2, {0, 2}, e2), DomainError);
  CHECK_THROWS_AS(verify_identities(set32(), k1, k2, {1, 0}, e2), DomainError);
  CHECK_THROWS_AS(verify_identities(set32(), {0.1, 0, 0}, k2, e1, e2), DomainError);
  CHECK_THROWS_AS(set32().apply_inverse_hamiltonian(set32().ground()), ContractViolation);
}

TEST_CASE("B- scaling follows the oscillator's own coefficient") {
  const RVec a{0.2, 0}, b{0, 0.2};
  const auto rep = bexp_scaling(set32(), a, b, e1, e2, {2, 4, 8, 16});
  const double exact = oscillator_mixed_coefficient(set32().sigma2(), a, b, e1, e2);
  CHECK(exact == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(rep.fitted_coefficient == doctest::Approx(exact).epsilon(1e-6));
  CHECK(std::abs(rep.halving_ratio - 4.0) < 0.02);
  CHECK(std::abs(rep.remainder_exponent + 4.0) < 0.2);
  CHECK(std::abs(rep.leading_exponent + 2.0) < 0.01);
  CHECK(rep.predicted_coefficient == doctest::Approx(0.02));
  CHECK_FALSE(rep.degenerate);
  for (const auto& s : rep.samples) CHECK(std::abs(s.b_minus.imag()) < 1e-10);

  CHECK_THROWS_AS(bexp_scaling(set32(), a, b, e1, e2, {2, 4, 8}), DomainError);
  CHECK_THROWS_AS(bexp_scaling(set32(), a, b, e1, e2, {2, 4, 8, 20}), DomainError);
  CHECK_THROWS_AS(bexp_scaling(set32(), {0.8, 0}, b, e1, e2, {1, 2, 4, 8}), DomainError);
}

TEST_CASE("degenerate geometry in three dimensions") {
  // (ε1·k2) = 0 and k1 ⊥ k2: for the oscillator B₋ then vanishes identically
  const auto s = build_oscillator(3, 16);
  const double h = std::sqrt(0.5);
  const RVec a{0.2, 0, 0}, b{0, 0, 0.2};
  for (const RVec& ep2 : {RVec{0, 1, 0}, RVec{h, h, 0}}) {
    const auto rep = bexp_scaling(s, a, b, {0, 1, 0}, ep2, {2, 4, 8, 16});
    CHECK(rep.degenerate);
    CHECK(rep.all_passed());
    for (const auto& smp : rep.samples) CHECK(std::abs(smp.b_minus) < 1e-13);
  }
}
