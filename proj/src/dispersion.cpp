#include "cpvdw/dispersion.hpp"

#include <cmath>
#include <numbers>

#include "cpvdw/constants.hpp"
#include "cpvdw/errors.hpp"
#include "cpvdw/format.hpp"
#include "cpvdw/kernels.hpp"

namespace cpvdw::dispersion {

namespace {

constexpr double kPi = std::numbers::pi;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

void require_unit(const Vec3& v, const char* name) {
  if (std::abs(dot(v, v) - 1.0) > 1e-12) {
    throw DomainError(std::string(name) + " is not a unit vector");
  }
}

CoefficientSet four_over_pi(const Rational& ee, const Rational& em, const Rational& mm) {
  return {PiRational(4 * ee, -1), PiRational(4 * em, -1), PiRational(4 * mm, -1)};
}

KappaBreakdown evaluate(const CoefficientSet& c, const DipoleMoments& m, Scheme scheme) {
  KappaBreakdown k;
  k.ee = c.ee.to_double() * m.alpha_E * m.alpha_E;
  k.em = c.em.to_double() * m.alpha_E * m.alpha_M;
  k.mm = c.mm.to_double() * m.alpha_M * m.alpha_M;
  k.total = k.ee + k.em + k.mm;
  k.scheme = scheme;
  return k;
}

}  // namespace

std::string to_string(Convention c) { return c == Convention::PaperFactor2 ? "paper-factor-2" : "no-factor-2"; }

std::string to_string(Scheme s) { return s == Scheme::ThisPaper ? "this-paper" : "feinberg-sucher-boyer"; }

CoefficientSet kappa_coefficients() { return four_over_pi(kElectricElectric(), Rational(26), Rational(64)); }

CoefficientSet feinberg_sucher_coefficients() {
  return four_over_pi(kElectricElectric(), Rational(7, 8), kElectricElectric());
}

PiRational reference_S(int j) {
  switch (j) {
    case 1: return {Rational(92), 3};
    case 2: return {Rational(208), 3};
    case 3: return {Rational(256), 3};
    default: throw DomainError("S index must be 1, 2 or 3");
  }
}

double compute_S(const algebra::MomentPairTable& table, const quad::QuadratureSpec& spec) {
  if (table.max_exponent() > static_cast<unsigned>(kernels::kMaxMoment)) {
    throw DomainError("moment table needs kernels above K4");
  }
  struct Term {
    int a;
    int b;
    double weight;
  };
  std::vector<Term> terms;
  for (const auto& [key, coeff] : table.entries()) {
    const bool odd_pair = key.first % 2 == 1 && key.second % 2 == 1;
    terms.push_back({static_cast<int>(key.first), static_cast<int>(key.second),
                     (odd_pair ? -1.0 : 1.0) * coeff.to_double()});
  }
  const auto result = quad::integrate_half_line(
      [&terms](double t) {
        std::array<double, kernels::kMaxMoment + 1> k{};
        for (int n = 0; n <= kernels::kMaxMoment; ++n) k[n] = kernels::kernel_closed(kernels::KernelId(n), t).magnitude;
        double sum = 0.0;
        for (const auto& term : terms) sum += term.weight * k[term.a] * k[term.b];
        return sum;
      },
      spec);
  if (!result.converged) throw AccuracyError("S integral did not converge", result.error_estimate);
  return 4.0 * kPi * kPi * result.value;
}

std::array<Vec3, 3> dreibein(const Vec3& khat) {
  require_unit(khat, "k-hat");
  // Project out k̂ from the coordinate axis least aligned with it.
  std::size_t axis = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (std::abs(khat[i]) < std::abs(khat[axis])) axis = i;
  }
  Vec3 helper{0.0, 0.0, 0.0};
  helper[axis] = 1.0;
  const double proj = dot(helper, khat);
  Vec3 e1{helper[0] - proj * khat[0], helper[1] - proj * khat[1], helper[2] - proj * khat[2]};
  const double norm = std::sqrt(dot(e1, e1));
  for (auto& c : e1) c /= norm;
  return {e1, cross(khat, e1), khat};
}

std::pair<double, double> polarization_sum_check(const Vec3& khat1, const Vec3& khat2) {
  const auto b1 = dreibein(khat1);
  const auto b2 = dreibein(khat2);
  double transverse = 0.0;
  double longitudinal = 0.0;
  for (int l1 = 0; l1 < 2; ++l1) {
    for (int l2 = 0; l2 < 2; ++l2) {
      const double e = dot(b1[l1], b2[l2]);
      transverse += e * e;
    }
    const double e = dot(b1[l1], khat2);
    longitudinal += e * e;
  }
  return {transverse, longitudinal};
}

KappaBreakdown kappa_dimensionless(const DipoleMoments& m) {
  return evaluate(kappa_coefficients(), m, Scheme::ThisPaper);
}

KappaBreakdown feinberg_sucher_kappa(const DipoleMoments& m) {
  return evaluate(feinberg_sucher_coefficients(), m, Scheme::FeinbergSucherBoyer);
}

CoefficientSet kappa_from_S(const PiRational& S1, const PiRational& S2, const PiRational& S3) {
  const PiRational two_pi_inv6(Rational(1, 64), -6);
  const Rational half(1, 2);
  return {
      half * (two_pi_inv6 * (half * S1)),
      half * (Rational(4) * (two_pi_inv6 * S2)),
      half * (Rational(8) * (two_pi_inv6 * S3)),
  };
}

double casimir_polder_limit(double alpha_E_at) {
  const double half = 0.5 * alpha_E_at;
  return -(23.0 / (4.0 * kPi)) * (1.0 / (4.0 * kPi * kPi)) * half * half;
}

void UnitSystem::validate() const {
  if (!(alpha_fs > 0.0 && electron_mass_energy > 0.0 && bohr_radius > 0.0 && compton_length > 0.0 &&
        cutoff_ratio > 0.0)) {
    throw DomainError("unit system entries must all be positive");
  }
  const double implied = compton_length / alpha_fs;
  if (std::abs(implied - bohr_radius) > 1e-9 * bohr_radius) {
    throw DomainError("Bohr radius " + format_double(bohr_radius) + " disagrees with compton_length/alpha = " +
                      format_double(implied));
  }
}

UnitSystem UnitSystem::atomic(double alpha_fs) {
  UnitSystem u;
  u.energy_unit = "hartree";
  u.length_unit = "bohr";
  u.alpha_fs = alpha_fs;
  u.electron_mass_energy = 1.0 / (alpha_fs * alpha_fs);
  u.bohr_radius = 1.0;
  u.compton_length = alpha_fs;
  return u;
}

UnitSystem UnitSystem::si_electronvolt() {
  UnitSystem u;
  u.energy_unit = "eV";
  u.length_unit = "m";
  u.alpha_fs = constants::kFineStructure;
  u.electron_mass_energy = constants::kElectronMassEnergyEv;
  u.bohr_radius = constants::kBohrRadiusMeter;
  u.compton_length = constants::kReducedComptonMeter;
  return u;
}

std::vector<CurvePoint> potential_curve(double R_min, double R_max, int n_points, double kappa,
                                        const UnitSystem& units) {
  if (!(R_min > 0.0 && R_max > R_min)) throw DomainError("potential curve needs 0 < R_min < R_max");
  if (n_points < 2) throw DomainError("potential curve needs at least two points");
  units.validate();

  const double scale = -kappa * units.binding_scale();
  const double lo = std::log(R_min);
  const double step = (std::log(R_max) - lo) / (n_points - 1);
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double R = i == 0 ? R_min : (i == n_points - 1 ? R_max : std::exp(lo + step * i));
    const double R2 = R * R;
    const double R7 = R2 * R2 * R2 * R;
    curve.push_back({R, scale / R7});
  }
  return curve;
}

std::vector<double> loglog_slopes(const std::vector<CurvePoint>& curve) {
  std::vector<double> slopes;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    slopes.push_back(std::log(curve[i].delta_E / curve[i - 1].delta_E) /
                     std::log(curve[i].r_over_rB / curve[i - 1].r_over_rB));
  }
  return slopes;
}

}  // namespace cpvdw::dispersion
