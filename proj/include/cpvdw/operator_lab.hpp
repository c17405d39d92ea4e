#pragma once

// Ground-state operator identities checked on truncated matrices.
//
// The stand-in Hamiltonian is the isotropic oscillator H = Σ_i a_i†a_i in a
// per-axis number basis truncated at N levels. It satisfies [H, x] = −ip
// exactly inside the truncation, has a parity-even rotation-invariant
// ground state |0…0⟩ with E = 0, and <x_i x_j> = δ_ij σ², σ² = 1/2.
//
// States are vectors of length N^d indexed by n_1 + N n_2 + N² n_3; single
// axis operators act fibre by fibre, so no N^d × N^d matrix is ever formed.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace cpvdw::oplab {

using Complex = std::complex<double>;
using State = Eigen::VectorXcd;
using RVec = std::vector<double>;  ///< d-component real vector

/// Largest N^d a build will allocate.
inline constexpr long kMaxBasisSize = 1L << 17;

/// Scaling-and-squaring with a fixed degree-13 Padé approximant.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a);

class OperatorSet {
 public:
  int dimension() const { return d_; }
  int cutoff() const { return N_; }
  long size() const { return size_; }
  double sigma2() const { return sigma2_; }
  const Eigen::MatrixXd& x_axis() const { return x_; }
  const Eigen::MatrixXcd& p_axis() const { return p_; }
  const Eigen::VectorXd& hamiltonian_diagonal() const { return h_; }
  const State& ground() const { return ground_; }

  /// Applies a single-axis N×N operator on `axis`.
  State apply_axis(const Eigen::MatrixXcd& op, int axis, const State& v) const;
  /// (a·x) v
  State apply_position(const RVec& a, const State& v) const;
  State apply_hamiltonian(const State& v) const;
  /// H⁻¹ on the complement of the ground state. Throws ContractViolation when
  /// |<ψ|v>| exceeds overlap_tol.
  State apply_inverse_hamiltonian(const State& v, double overlap_tol = 1e-9) const;
  /// e^{sign·i k·x} v
  State apply_plane_wave(const RVec& k, int sign, const State& v) const;
  /// Largest |<ψ|v>| seen by apply_inverse_hamiltonian since construction.
  double max_resolvent_overlap() const { return max_overlap_; }

  friend OperatorSet build_oscillator(int d, int N);

 private:
  int d_ = 0;
  int N_ = 0;
  long size_ = 0;
  double sigma2_ = 0.0;
  Eigen::MatrixXd x_;
  Eigen::MatrixXcd p_;
  Eigen::VectorXd h_;
  State ground_;
  mutable double max_overlap_ = 0.0;
};

/// d ∈ {2,3}, N >= 8. Throws DomainError on bad arguments, ResourceError above kMaxBasisSize.
OperatorSet build_oscillator(int d, int N);

/// ‖[x_1,p_1] − i‖ restricted to levels below N/2 (max-abs entry).
double ladder_commutator_residual(const OperatorSet& set);

struct IdentityCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct IdentityReport {
  int dimension = 0;
  int cutoff = 0;
  RVec k1, k2, eps1, eps2;
  std::vector<IdentityCheck> checks;

  bool all_passed() const;
  const IdentityCheck& check(const std::string& name) const;
  std::string to_json() const;
};

/// Runs the ground-state identity checks; see README for the list.
/// Preconditions: |k_i| <= 0.5, |eps_i| = 1, eps_i·k_i = 0 (1e-12); else DomainError.
IdentityReport verify_identities(const OperatorSet& set, const RVec& k1, const RVec& k2, const RVec& eps1,
                                 const RVec& eps2);

/// B₋(k1,k2) = (ε1·ε2)<e^{−i(k1+k2)·x}> − 2<(ε1·x) H e^{−ik1·x} H⁻¹ e^{−ik2·x} H (ε2·x)>
Complex b_minus(const OperatorSet& set, const RVec& k1, const RVec& k2, const RVec& eps1, const RVec& eps2);

/// Closed form of the oscillator's bilinear B₋ coefficient,
/// (σ²/2)[(ε1·k2)(ε2·k1) − (ε1·ε2)(k1·k2)], from the ladder algebra.
double oscillator_mixed_coefficient(double sigma2, const RVec& k1, const RVec& k2, const RVec& eps1, const RVec& eps2);

struct ScalingSample {
  double R = 0.0;
  Complex b_minus;
};

struct ScalingReport {
  std::vector<ScalingSample> samples;
  double predicted_coefficient = 0.0;  ///< σ²(ε1·k2)(ε2·k1), the R⁻² coefficient being tested
  double fitted_coefficient = 0.0;     ///< Richardson limit of R²B₋ from the two largest R
  double coefficient_ratio = 0.0;      ///< fitted / predicted (0 when predicted is 0)
  double leading_exponent = 0.0;       ///< least-squares slope of ln|B₋| vs ln R
  double halving_ratio = 0.0;          ///< B₋(R)/B₋(2R) at the two largest R
  double remainder_exponent = 0.0;     ///< slope of ln|B₋ − fitted·R⁻²|
  double predicted_remainder_exponent = 0.0;  ///< slope of ln|B₋ − predicted·R⁻²|
  bool degenerate = false;             ///< predicted coefficient is zero
  std::vector<IdentityCheck> checks;

  bool all_passed() const;
  std::string to_json() const;
};

/// Evaluates B₋(k1/R, k2/R) over R_list (>= 4 geometric values, |k_i|/R <= 0.5) and fits the
/// R⁻² leading law and R⁻⁴ remainder.
ScalingReport bexp_scaling(const OperatorSet& set, const RVec& k1, const RVec& k2, const RVec& eps1, const RVec& eps2,
                           const std::vector<double>& R_list);

}  // namespace cpvdw::oplab
