#include "cpvdw/atom.hpp"

#include <gsl/gsl_sf_expint.h>
#include <lapacke.h>

#include <cmath>
#include <numbers>
#include <ostream>

#include "cpvdw/errors.hpp"
#include "cpvdw/format.hpp"

namespace cpvdw::atom {

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size n-1, all equal to −1/(2h²)
};

Tridiagonal radial_hamiltonian(const RadialGrid& grid, double Lambda, int ell) {
  const double h = grid.h();
  const double kinetic = 1.0 / (h * h);
  const double centrifugal = 0.5 * ell * (ell + 1);
  Tridiagonal m;
  m.diag.resize(static_cast<std::size_t>(grid.n));
  for (int i = 0; i < grid.n; ++i) {
    const double r = grid.r(i);
    m.diag[static_cast<std::size_t>(i)] = kinetic + centrifugal / (r * r) - smeared_coulomb(r, Lambda);
  }
  m.off.assign(static_cast<std::size_t>(grid.n - 1), -0.5 * kinetic);
  return m;
}

struct Eigenpairs {
  std::vector<double> values;
  std::vector<double> vectors;  // column-major, n × count
};

Eigenpairs lowest_eigenpairs(Tridiagonal m, int count) {
  const auto n = static_cast<lapack_int>(m.diag.size());
  Eigenpairs out;
  out.values.resize(m.diag.size());
  out.vectors.resize(m.diag.size() * static_cast<std::size_t>(count));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  m.off.push_back(0.0);  // dstevr wants workspace length n for the off-diagonal
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, m.diag.data(), m.off.data(), 0.0, 0.0, 1, count, 0.0, &found,
                     out.values.data(), out.vectors.data(), n, support.data());
  if (info != 0 || found != count) {
    throw SolverError("tridiagonal eigensolve failed (info = " + std::to_string(info) +
                      ", found = " + std::to_string(found) + " of " + std::to_string(count) + ")");
  }
  out.values.resize(static_cast<std::size_t>(count));
  return out;
}

// Thomas algorithm; the p-wave operator minus E is strictly diagonally dominant.
std::vector<double> solve_tridiagonal(std::vector<double> diag, double off, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(diag[i - 1]) < 1e-300) throw SolverError("zero pivot in tridiagonal solve");
    const double w = off / diag[i - 1];
    diag[i] -= w * off;
    rhs[i] -= w * rhs[i - 1];
  }
  if (std::abs(diag[n - 1]) < 1e-300) throw SolverError("zero pivot in tridiagonal solve");
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off * rhs[i + 1]) / diag[i];
  return rhs;
}

std::vector<double> source_term(const AtomSolution& sol) {
  std::vector<double> s(sol.u.size());
  for (int i = 0; i < sol.grid.n; ++i) s[static_cast<std::size_t>(i)] = sol.grid.r(i) * sol.u[static_cast<std::size_t>(i)];
  return s;
}

}  // namespace

void RadialGrid::validate() const {
  if (!(r_max >= 30.0)) throw DomainError("radial grid needs r_max >= 30 Bohr radii");
  if (n < 2000) throw DomainError("radial grid needs at least 2000 points");
  if (spacing != Spacing::Uniform) throw DomainError("only uniform radial grids are supported");
}

double smeared_coulomb(double r, double Lambda) {
  if (!(r > 0.0)) throw DomainError("smeared Coulomb potential needs r > 0");
  if (!(Lambda > 0.0)) throw DomainError("cutoff must be positive");
  if (std::isinf(Lambda)) return 1.0 / r;
  return (2.0 / std::numbers::pi) * gsl_sf_Si(Lambda * r) / r;
}

double cutoff_in_bohr_units(double cutoff_ratio, double alpha_fs) {
  if (!(cutoff_ratio > 0.0) || !(alpha_fs > 0.0)) throw DomainError("cutoff ratio and alpha must be positive");
  return cutoff_ratio / alpha_fs;
}

AtomSolution solve_ground(const RadialGrid& grid, double Lambda) {
  grid.validate();
  const Eigenpairs pair = lowest_eigenpairs(radial_hamiltonian(grid, Lambda, 0), 1);

  AtomSolution sol;
  sol.grid = grid;
  sol.Lambda = Lambda;
  sol.energy = pair.values[0];
  sol.u.assign(pair.vectors.begin(), pair.vectors.begin() + grid.n);
  double sum = 0.0;
  double norm = 0.0;
  for (double v : sol.u) {
    sum += v;
    norm += v * v;
  }
  // u vanishes at both ends, so the trapezoid rule is h·Σu².
  const double scale = (sum < 0.0 ? -1.0 : 1.0) / std::sqrt(norm * grid.h());
  for (double& v : sol.u) v *= scale;
  return sol;
}

double extrapolated_energy(const RadialGrid& grid, double Lambda) {
  const double coarse = solve_ground(grid, Lambda).energy;
  const double fine = solve_ground(grid.refined(), Lambda).energy;
  return (4.0 * fine - coarse) / 3.0;
}

double moment_r2(const AtomSolution& sol) {
  double sum = 0.0;
  for (int i = 0; i < sol.grid.n; ++i) {
    const double r = sol.grid.r(i);
    const double v = sol.u[static_cast<std::size_t>(i)];
    sum += r * r * v * v;
  }
  return sum * sol.grid.h();
}

double kinetic_expectation(const AtomSolution& sol) {
  const double h = sol.grid.h();
  const auto n = sol.u.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? 0.0 : sol.u[i - 1];
    const double right = i + 1 == n ? 0.0 : sol.u[i + 1];
    sum += sol.u[i] * (-0.5) * (left - 2.0 * sol.u[i] + right) / (h * h);
  }
  return sum * h;
}

double dalgarno_lewis(const AtomSolution& sol) {
  Tridiagonal m = radial_hamiltonian(sol.grid, sol.Lambda, 1);
  for (double& d : m.diag) d -= sol.energy;
  const std::vector<double> source = source_term(sol);
  const std::vector<double> w = solve_tridiagonal(m.diag, m.off.empty() ? 0.0 : m.off[0], source);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * source[i];
  return sum * sol.grid.h() / 3.0;
}

double sum_over_states(const AtomSolution& sol, int n_states) {
  if (n_states < 1 || n_states > sol.grid.n) throw DomainError("sum over states needs 1 <= n_states <= n");
  const Eigenpairs p = lowest_eigenpairs(radial_hamiltonian(sol.grid, sol.Lambda, 1), n_states);
  const std::vector<double> source = source_term(sol);
  const auto n = static_cast<std::size_t>(sol.grid.n);
  // LAPACK vectors have unit Euclidean norm; <k|f> on the grid is Σ v_k f · √h.
  const double sqrt_h = std::sqrt(sol.grid.h());
  double total = 0.0;
  for (int k = 0; k < n_states; ++k) {
    const double* v = p.vectors.data() + static_cast<std::size_t>(k) * n;
    double overlap = 0.0;
    for (std::size_t i = 0; i < n; ++i) overlap += v[i] * source[i];
    overlap *= sqrt_h;
    const double gap = p.values[static_cast<std::size_t>(k)] - sol.energy;
    if (!(gap > 0.0)) throw SolverError("p-wave level below the ground state");
    total += overlap * overlap / gap;
  }
  return total / 3.0;
}

dispersion::DipoleMoments dipole_moments(const AtomSolution& sol, double alpha_fs, dispersion::Convention convention) {
  const double factor = convention == dispersion::Convention::PaperFactor2 ? 2.0 : 1.0;
  dispersion::DipoleMoments m;
  m.alpha_E = factor * dalgarno_lewis(sol);
  m.alpha_M = -alpha_fs * alpha_fs * 0.25 * (moment_r2(sol) / 3.0);
  m.convention = convention;
  return m;
}

void write_solution_csv(std::ostream& os, const AtomSolution& sol) {
  os << "# energy_hartree=" << format_double(sol.energy) << " r_max=" << format_double(sol.grid.r_max)
     << " n=" << sol.grid.n << " Lambda=" << (std::isinf(sol.Lambda) ? std::string("inf") : format_double(sol.Lambda))
     << '\n';
  os << "r,u\n";
  for (int i = 0; i < sol.grid.n; ++i) {
    os << format_double(sol.grid.r(i)) << ',' << format_double(sol.u[static_cast<std::size_t>(i)]) << '\n';
  }
}

}  // namespace cpvdw::atom
