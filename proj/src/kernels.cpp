#include "cpvdw/kernels.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "cpvdw/errors.hpp"
#include "cpvdw/format.hpp"

namespace cpvdw::kernels {

namespace {

using cd = std::complex<double>;

// Above this t the arccot forms lose digits to cancellation; use series in 1/t.
constexpr double kLargeT = 4.0;
constexpr int kAsymptoticTerms = 40;

// K3 = Σ_{k>=2} (−1)^k 8(k−1)k(2k−1)/(2k+1) s^{2k+1}, s = 1/t
double k3_asymptotic(double s) {
  const double s2 = s * s;
  double power = s2 * s2 * s;
  double sum = 0.0;
  for (int k = 2; k < 2 + kAsymptoticTerms; ++k) {
    const double coeff = 8.0 * (k - 1) * k * (2 * k - 1) / (2 * k + 1);
    sum += (k % 2 == 0 ? coeff : -coeff) * power;
    power *= s2;
  }
  return sum;
}

// K4 = Σ_{k>=2} (−1)^k 12·C(2k−1,3)/(2k+1) s^{2k}
double k4_asymptotic(double s) {
  const double s2 = s * s;
  double power = s2 * s2;
  double sum = 0.0;
  for (int k = 2; k < 2 + kAsymptoticTerms; ++k) {
    const double m = 2.0 * k - 1.0;
    const double binom = m * (m - 1.0) * (m - 2.0) / 6.0;
    const double coeff = 12.0 * binom / (2 * k + 1);
    sum += (k % 2 == 0 ? coeff : -coeff) * power;
    power *= s2;
  }
  return sum;
}

}  // namespace

KernelId::KernelId(int n) : n_(n) {
  if (n < 0 || n > kMaxMoment) {
    throw DomainError("kernel index " + std::to_string(n) + " outside 0.." + std::to_string(kMaxMoment));
  }
}

double arccot(double t) {
  if (t == 0.0) return std::numbers::pi / 2;
  return std::atan(1.0 / t);
}

KernelValue kernel_closed(KernelId id, double t) {
  if (!(t >= 0.0)) throw DomainError("kernel argument t must be non-negative");
  const Parity parity = id.odd() ? Parity::Odd : Parity::Even;

  if (t > 1.0) {
    // Same rational forms written in s = 1/t so that huge t neither overflows nor cancels.
    const double s = 1.0 / t;
    const double s2 = s * s;
    const double d = (1.0 + s2) * (1.0 + s2) * (1.0 + s2);
    switch (id.n()) {
      case 0: return {4.0 * s2 * s2 * (3.0 - s2) / d, parity};
      case 1: return {16.0 * s2 * s2 * s / d, parity};
      case 2: return {4.0 * s2 * s2 * (1.0 - 3.0 * s2) / d, parity};
      default: break;
    }
    if (t >= kLargeT) {
      return {id.n() == 3 ? k3_asymptotic(s) : k4_asymptotic(s), parity};
    }
  }

  const double t2 = t * t;
  const double d = (1.0 + t2) * (1.0 + t2) * (1.0 + t2);
  switch (id.n()) {
    case 0: return {4.0 * (3.0 * t2 - 1.0) / d, parity};
    case 1: return {16.0 * t / d, parity};
    case 2: return {4.0 * (t2 - 3.0) / d, parity};
    case 3: return {4.0 * (t * (9.0 + 8.0 * t2 + 3.0 * t2 * t2) / d - 3.0 * arccot(t)), parity};
    default:
      return {4.0 * (3.0 + 27.0 * t2 + 32.0 * t2 * t2 + 12.0 * t2 * t2 * t2) / d - 48.0 * t * arccot(t), parity};
  }
}

std::complex<double> inner_moment_recursive(KernelId id, double r) {
  if (!(r > 0.0)) throw DomainError("recursive inner moment needs r > 0");
  const cd ir(0.0, r);
  const cd ep = std::polar(1.0, r);
  const cd em = std::conj(ep);
  cd m = 2.0 * std::sin(r) / r;
  for (int n = 1; n <= id.n(); ++n) {
    const cd boundary = (n % 2 == 0) ? ep - em : ep + em;
    m = (boundary - static_cast<double>(n) * m) / ir;
  }
  return m;
}

std::complex<double> inner_moment_series(KernelId id, double r, int terms) {
  // Σ_k (ir)^k/k! ∫ X^{n+k} dX, only n+k even survives
  const int n = id.n();
  cd sum = 0.0;
  cd power = 1.0;  // (ir)^k / k!
  for (int k = 0; k < terms; ++k) {
    if ((n + k) % 2 == 0) sum += power * (2.0 / (n + k + 1));
    power *= cd(0.0, r) / static_cast<double>(k + 1);
  }
  return sum;
}

std::complex<double> inner_moment(KernelId id, double r) {
  if (!(r >= 0.0)) throw DomainError("inner moment radius must be non-negative");
  if (r < kTaylorSwitch) return inner_moment_series(id, r);
  return inner_moment_recursive(id, r);
}

NumericKernel kernel_numeric_detailed(KernelId id, double t, const quad::QuadratureSpec& spec) {
  if (!(t >= kMinOracleT)) {
    throw DomainError("kernel oracle needs t >= " + format_double(kMinOracleT) + ", got " + format_double(t));
  }
  // r = s/t puts the decay on a unit scale: ∫ s³ e^{-s} m_n(s/t) ds / t⁴
  const double t4 = t * t * t * t;
  auto component = [&](bool imaginary, const quad::QuadratureSpec& use) {
    return quad::integrate_half_line(
        [&](double s) {
          if (s > 745.0) return 0.0;  // e^{-s} underflows
          const cd m = inner_moment(id, s / t);
          return s * s * s * std::exp(-s) * (imaginary ? m.imag() : m.real()) / t4;
        },
        use);
  };
  const quad::IntegrationResult kept = component(id.odd(), spec);
  // The vanishing part has no scale of its own; measure it against the kept one.
  quad::QuadratureSpec null_spec = spec;
  null_spec.abs_tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(kept.value));
  const quad::IntegrationResult dropped = component(!id.odd(), null_spec);

  if (!kept.converged || !dropped.converged) {
    throw AccuracyError("kernel oracle K" + std::to_string(id.n()) + "(" + format_double(t) + ") did not converge",
                        std::max(kept.error_estimate, dropped.error_estimate));
  }
  if (std::abs(dropped.value) > null_spec.abs_tol + dropped.error_estimate) {
    throw AccuracyError("kernel oracle K" + std::to_string(id.n()) + " has a non-vanishing " +
                            (id.odd() ? "real" : "imaginary") + " part " + format_double(dropped.value),
                        std::abs(dropped.value));
  }
  NumericKernel out;
  out.value = {kept.value, id.odd() ? Parity::Odd : Parity::Even};
  out.error_estimate = kept.error_estimate;
  out.discarded = dropped.value;
  out.evaluations = kept.evaluations + dropped.evaluations;
  return out;
}

KernelValue kernel_numeric(KernelId id, double t, const quad::QuadratureSpec& spec) {
  return kernel_numeric_detailed(id, t, spec).value;
}

void write_kernel_table(std::ostream& os, std::span<const double> ts) {
  os << "# K1 and K3 are purely imaginary; columns hold K/i. <X^n> = 2*pi*Kn.\n";
  os << "t,K0,K1,K2,K3,K4\n";
  for (double t : ts) {
    os << format_double(t);
    for (int n = 0; n <= kMaxMoment; ++n) os << ',' << format_double(kernel_closed(KernelId(n), t).magnitude);
    os << '\n';
  }
}

}  // namespace cpvdw::kernels
