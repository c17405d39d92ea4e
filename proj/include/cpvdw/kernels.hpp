#pragma once

// Moment kernels K_n(t), n = 0..4, normalized so that
//   <X^n>(t) = 2π K_n(t),
//   K_n(t) = ∫_0^∞ dr r³ e^{-tr} ∫_{-1}^{1} dX X^n e^{irX}.
// Odd n are purely imaginary; KernelValue stores the real magnitude and a parity tag.
//
// Closed forms:
//   K0 = 4(3t²−1)/(1+t²)³
//   K1 = i·16t/(1+t²)³
//   K2 = 4(t²−3)/(1+t²)³
//   K3 = i·4[t(9+8t²+3t⁴)/(1+t²)³ − 3 arccot t]
//   K4 = 4(3+27t²+32t⁴+12t⁶)/(1+t²)³ − 48 t arccot t
//
// K0 is easy to mistype with numerator (−4+12t); the quadrature oracle
// below pins it to −4+12t².

#include <complex>
#include <iosfwd>
#include <span>

#include "cpvdw/quadrature.hpp"

namespace cpvdw::kernels {

inline constexpr int kMaxMoment = 4;
/// Below this radius inner_moment sums the Taylor series instead of recursing.
inline constexpr double kTaylorSwitch = 0.5;
inline constexpr int kTaylorTerms = 30;
/// kernel_numeric rejects smaller t: the e^{-tr} envelope is too slow for plain Gauss–Kronrod.
inline constexpr double kMinOracleT = 1e-3;

class KernelId {
 public:
  /// Throws DomainError outside 0..4.
  explicit KernelId(int n);
  int n() const { return n_; }
  bool odd() const { return n_ % 2 != 0; }

 private:
  int n_;
};

enum class Parity { Even, Odd };

struct KernelValue {
  double magnitude = 0.0;  ///< K_n for even n; K_n / i for odd n
  Parity parity = Parity::Even;
};

/// arctan(1/t) for t > 0, π/2 at t = 0.
double arccot(double t);

/// Closed form at t >= 0; t < 0 throws DomainError.
KernelValue kernel_closed(KernelId n, double t);

/// m_n(r) = ∫_{-1}^{1} X^n e^{irX} dX, r >= 0.
std::complex<double> inner_moment(KernelId n, double r);
/// Upward recursion from m_0 = 2 sin r / r; accurate for r away from 0.
std::complex<double> inner_moment_recursive(KernelId n, double r);
/// Truncated Taylor series in r; accurate for small r.
std::complex<double> inner_moment_series(KernelId n, double r, int terms = kTaylorTerms);

struct NumericKernel {
  KernelValue value;
  double error_estimate = 0.0;
  double discarded = 0.0;  ///< the component that must vanish by parity
  long evaluations = 0;
};

/// Quadrature of ∫ r³ e^{-tr} m_n(r) dr. Throws AccuracyError when either
/// component fails to converge or the discarded component exceeds the
/// absolute tolerance; DomainError for t < kMinOracleT.
NumericKernel kernel_numeric_detailed(KernelId n, double t, const quad::QuadratureSpec& spec);
KernelValue kernel_numeric(KernelId n, double t, const quad::QuadratureSpec& spec);

/// CSV `t,K0,K1,K2,K3,K4` with a leading `#` comment naming the odd columns.
void write_kernel_table(std::ostream& os, std::span<const double> ts);

}  // namespace cpvdw::kernels
