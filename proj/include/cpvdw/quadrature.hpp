#pragma once

#include <functional>
#include <string>

namespace cpvdw::quad {

/// Change of variables taking [0,1) onto [0,∞).
enum class Mapping {
  Rational,     ///< t = u/(1−u)
  Exponential,  ///< t = −ln(1−u)
};

std::string to_string(Mapping m);

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;
  Mapping mapping = Mapping::Rational;

  /// Throws DomainError for non-positive tolerances or subdivisions.
  void validate() const;
};

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive 21-point Gauss–Kronrod on [a,b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol·|value|) or max_subdivisions
/// panels exist. Ties in the error estimate go to the leftmost panel, and the
/// final sum runs over panels in left-to-right order, so a given spec and
/// integrand always give the same bits. A NaN or infinite integrand value
/// throws NumericalError.
IntegrationResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec);

/// ∫_0^∞ f(t) dt through spec.mapping followed by integrate_interval on [0,1].
IntegrationResult integrate_half_line(const Integrand& f, const QuadratureSpec& spec);

}  // namespace cpvdw::quad
