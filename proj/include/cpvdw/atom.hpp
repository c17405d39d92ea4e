#pragma once

// ℓ = 0 hydrogen ground state on a uniform radial grid, in atomic units
// (hartree, Bohr radius), and the two moments the strength κ needs:
// the static resolvent element <z (H−E)⁻¹ z> and <x²>.

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "cpvdw/dispersion.hpp"

namespace cpvdw::atom {

inline constexpr double kNoCutoff = std::numeric_limits<double>::infinity();

enum class Spacing { Uniform, Log };

struct RadialGrid {
  double r_max = 40.0;
  int n = 20000;  ///< interior points; r_i = (i+1)·h, h = r_max/(n+1)
  Spacing spacing = Spacing::Uniform;

  /// r_max >= 30, n >= 2000, uniform spacing.
  void validate() const;
  double h() const { return r_max / (n + 1); }
  double r(int i) const { return (i + 1) * h(); }
  /// Same r_max with half the spacing.
  RadialGrid refined() const { return {r_max, 2 * n + 1, spacing}; }
};

struct AtomSolution {
  double energy = 0.0;    ///< hartree
  std::vector<double> u;  ///< r·ψ_rad at the interior points, ∫u² dr = 1
  RadialGrid grid;
  double Lambda = kNoCutoff;  ///< inverse Bohr radii
};

/// (2/π) Si(Λr)/r, the Coulomb potential seen through a sharp momentum cutoff Λ.
/// Λ = ∞ gives 1/r. Throws DomainError for r <= 0 or Λ <= 0.
double smeared_coulomb(double r, double Lambda);

/// Λ in inverse Bohr radii for a cutoff λ_cΛ given in units of the inverse Compton length.
double cutoff_in_bohr_units(double cutoff_ratio, double alpha_fs);

/// Lowest eigenpair of −u''/2 − V u = E u with u(0) = u(r_max) = 0.
AtomSolution solve_ground(const RadialGrid& grid, double Lambda = kNoCutoff);

/// Two-resolution Richardson estimate (4E(h/2) − E(h))/3 of the ground energy.
double extrapolated_energy(const RadialGrid& grid, double Lambda = kNoCutoff);

/// ∫ r² u² dr (trapezoid).
double moment_r2(const AtomSolution& sol);
/// <T> = ∫ u (−u''/2) dr with the same three-point stencil as the solver.
double kinetic_expectation(const AtomSolution& sol);

/// <z (H−E)⁻¹ z> through the inhomogeneous p-wave equation
///   (−½ d²/dr² + 1/r² − V − E) w = r u,   result = (1/3)∫ w r u dr.
double dalgarno_lewis(const AtomSolution& sol);

/// Same element as a truncated sum over the lowest p-wave grid eigenvectors:
///   (1/3) Σ_k <k|r u>² / (E_k − E).
double sum_over_states(const AtomSolution& sol, int n_states);

/// α̃_E = 2·dalgarno_lewis (factor-2 convention) or 1·dalgarno_lewis; α̃_M = −α²(1/4)(1/3)<x²>.
dispersion::DipoleMoments dipole_moments(const AtomSolution& sol, double alpha_fs, dispersion::Convention convention);

/// CSV `r,u`.
void write_solution_csv(std::ostream& os, const AtomSolution& sol);

}  // namespace cpvdw::atom
