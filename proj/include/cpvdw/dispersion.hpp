#pragma once

// Assembly of the retarded (R⁻⁷) van der Waals strength.
//
// Three angular integrals S_j, j = 1..3, carry all the geometry; their values
// feed the α_E², α_Eα_M and α_M² coefficients of
//
//   κ = (4/π)(23/16 α̃_E² + 26 α̃_E α̃_M + 64 α̃_M²),
//   E(R) − 2E = −κ α mc² (R/r_B)⁻⁷.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "cpvdw/exact_algebra.hpp"
#include "cpvdw/quadrature.hpp"
#include "cpvdw/rational.hpp"

namespace cpvdw::dispersion {

using Vec3 = std::array<double, 3>;

enum class Convention {
  PaperFactor2,  ///< α̃_E = 2·(1/3)<x·(H−E)⁻¹x>
  NoFactor2,     ///< α̃_E = (1/3)<x·(H−E)⁻¹x>
};
enum class Scheme { ThisPaper, FeinbergSucherBoyer };

std::string to_string(Convention c);
std::string to_string(Scheme s);

struct DipoleMoments {
  double alpha_E = 0.0;
  double alpha_M = 0.0;  // diamagnetic atoms give alpha_M <= 0
  Convention convention = Convention::PaperFactor2;
};

struct KappaBreakdown {
  double ee = 0.0;
  double em = 0.0;
  double mm = 0.0;
  double total = 0.0;
  Scheme scheme = Scheme::ThisPaper;
};

/// Exact coefficients of α_E², α_Eα_M, α_M².
struct CoefficientSet {
  PiRational ee;
  PiRational em;
  PiRational mm;
  friend bool operator==(const CoefficientSet&, const CoefficientSet&) = default;
};

/// Bare rationals shared by every scheme; κ carries 4/π in front of them.
inline const Rational& kElectricElectric() {
  static const Rational r(23, 16);
  return r;
}

/// (4/π)·(23/16, 26, 64)
CoefficientSet kappa_coefficients();
/// (4/π)·(23/16, 7/8, 23/16)
CoefficientSet feinberg_sucher_coefficients();

/// The target values 92π³, 208π³, 256π³.
PiRational reference_S(int j);

/// 4π² ∫_0^∞ Σ c_ab σ_ab K_a K_b dt with σ_ab = −1 for odd–odd pairs.
/// Throws AccuracyError on quadrature non-convergence.
double compute_S(const algebra::MomentPairTable& table, const quad::QuadratureSpec& spec);

/// (Σ_{λ1λ2}(ε1·ε2)², Σ_{λ1}(ε1·k̂2)²) from explicit dreibeins.
std::pair<double, double> polarization_sum_check(const Vec3& khat1, const Vec3& khat2);
/// Right-handed orthonormal (ε1, ε2, k̂) for a unit vector.
std::array<Vec3, 3> dreibein(const Vec3& khat);

KappaBreakdown kappa_dimensionless(const DipoleMoments& m);
KappaBreakdown feinberg_sucher_kappa(const DipoleMoments& m);

/// (c_EE, c_EM, c_MM) = (S1/4, 4·S2/2, 8·S3/2)·(2π)⁻⁶, exact.
CoefficientSet kappa_from_S(const PiRational& S1, const PiRational& S2, const PiRational& S3);

/// −(23/4π)(1/2π)²(α_E,at/2)²
double casimir_polder_limit(double alpha_E_at);

struct UnitSystem {
  std::string energy_unit;
  std::string length_unit;
  double alpha_fs = 0.0;
  double electron_mass_energy = 0.0;  ///< mc² in energy_unit
  double bohr_radius = 0.0;           ///< in length_unit
  double compton_length = 0.0;        ///< reduced, ħ/mc, in length_unit
  double cutoff_ratio = 1.0;          ///< λ_c Λ

  /// Throws DomainError unless all entries are positive and r_B = λ_c/α to 1e-9.
  void validate() const;
  /// α mc²
  double binding_scale() const { return alpha_fs * electron_mass_energy; }

  static UnitSystem atomic(double alpha_fs);
  static UnitSystem si_electronvolt();
};

struct CurvePoint {
  double r_over_rB;
  double delta_E;
};

/// Log-spaced R in Bohr radii with ΔE = −κ α mc² (R/r_B)⁻⁷.
std::vector<CurvePoint> potential_curve(double R_min, double R_max, int n_points, double kappa,
                                        const UnitSystem& units);
/// Slopes d ln|ΔE| / d ln R between consecutive points.
std::vector<double> loglog_slopes(const std::vector<CurvePoint>& curve);

}  // namespace cpvdw::dispersion
