#include "cpvdw/operator_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "cpvdw/errors.hpp"

namespace cpvdw::oplab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// |B₋| below this is roundoff in products of unit-norm vectors.
constexpr double kVanishingFloor = 1e-13;
constexpr double kPade13Theta = 5.371920351148152;
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
    10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
    960960.0,            16380.0,             182.0,              1.0};

double dot(const RVec& a, const RVec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(const RVec& a) { return std::sqrt(dot(a, a)); }

RVec scaled(const RVec& a, double s) {
  RVec out(a);
  for (double& v : out) v *= s;
  return out;
}

void require_dimension(const OperatorSet& set, const RVec& v, const char* name) {
  if (static_cast<int>(v.size()) != set.dimension()) {
    throw DomainError(std::string(name) + " must have " + std::to_string(set.dimension()) + " components");
  }
}

void require_geometry(const OperatorSet& set, const RVec& k, const RVec& eps, const char* kname,
                      const char* ename) {
  require_dimension(set, k, kname);
  require_dimension(set, eps, ename);
  if (norm(k) > 0.5 + 1e-15) throw DomainError(std::string(kname) + " must satisfy |k| <= 0.5");
  if (std::abs(norm(eps) - 1.0) > 1e-12) throw DomainError(std::string(ename) + " must be a unit vector");
  if (std::abs(dot(eps, k)) > 1e-12) throw DomainError(std::string(ename) + " must be orthogonal to " + kname);
}

IdentityCheck make_check(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, residual <= tolerance};
}

nlohmann::ordered_json checks_json(const std::vector<IdentityCheck>& checks) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  return arr;
}

// Least-squares slope of ln|y| against ln x.
double loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kPade13Theta) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kPade13Theta)));
  const Eigen::MatrixXcd A = a / std::ldexp(1.0, squarings);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd A2 = A * A;
  const Eigen::MatrixXcd A4 = A2 * A2;
  const Eigen::MatrixXcd A6 = A4 * A2;
  const auto& b = kPade13;
  const Eigen::MatrixXcd U =
      A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  const Eigen::MatrixXcd V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  Eigen::MatrixXcd result = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

OperatorSet build_oscillator(int d, int N) {
  if (d != 2 && d != 3) throw DomainError("oscillator dimension must be 2 or 3");
  if (N < 8) throw DomainError("oscillator cutoff must be at least 8");
  long size = 1;
  for (int i = 0; i < d; ++i) {
    size *= N;
    if (size > kMaxBasisSize) {
      throw ResourceError("basis of " + std::to_string(N) + "^" + std::to_string(d) + " states exceeds limit " +
                          std::to_string(kMaxBasisSize));
    }
  }

  OperatorSet set;
  set.d_ = d;
  set.N_ = N;
  set.size_ = size;

  // a|n> = √n |n−1>
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  set.x_ = (a + a.transpose()) / std::sqrt(2.0);
  const Eigen::MatrixXd antisym = (a.transpose() - a) / std::sqrt(2.0);
  set.p_ = Complex(0.0, 1.0) * antisym.cast<Complex>();

  // H = Σ_i n_i, already shifted so that E_0 = 0.
  set.h_.resize(size);
  for (long idx = 0; idx < size; ++idx) {
    long rest = idx;
    int level = 0;
    for (int axis = 0; axis < d; ++axis) {
      level += static_cast<int>(rest % N);
      rest /= N;
    }
    set.h_(idx) = level;
  }
  set.ground_ = State::Zero(size);
  set.ground_(0) = 1.0;
  RVec e1(static_cast<std::size_t>(d), 0.0);
  e1[0] = 1.0;
  const State x1g = set.apply_position(e1, set.ground_);
  set.sigma2_ = x1g.squaredNorm();
  return set;
}

State OperatorSet::apply_axis(const Eigen::MatrixXcd& op, int axis, const State& v) const {
  long stride = 1;
  for (int i = 0; i < axis; ++i) stride *= N_;
  State out = State::Zero(size_);
  Eigen::VectorXcd fibre(N_);
  for (long base = 0; base < size_; ++base) {
    if ((base / stride) % N_ != 0) continue;
    for (int j = 0; j < N_; ++j) fibre(j) = v(base + j * stride);
    const Eigen::VectorXcd mapped = op * fibre;
    for (int j = 0; j < N_; ++j) out(base + j * stride) = mapped(j);
  }
  return out;
}

State OperatorSet::apply_position(const RVec& a, const State& v) const {
  State out = State::Zero(size_);
  const Eigen::MatrixXcd x = x_.cast<Complex>();
  for (int axis = 0; axis < d_; ++axis) {
    if (a[static_cast<std::size_t>(axis)] != 0.0) out += a[static_cast<std::size_t>(axis)] * apply_axis(x, axis, v);
  }
  return out;
}

State OperatorSet::apply_hamiltonian(const State& v) const { return h_.cast<Complex>().cwiseProduct(v); }

State OperatorSet::apply_inverse_hamiltonian(const State& v, double overlap_tol) const {
  const double overlap = std::abs(ground_.dot(v));
  max_overlap_ = std::max(max_overlap_, overlap);
  if (overlap > overlap_tol) {
    throw ContractViolation("H^-1 applied to a vector with ground-state overlap " + std::to_string(overlap));
  }
  State out(size_);
  out(0) = 0.0;
  for (long i = 1; i < size_; ++i) out(i) = v(i) / h_(i);
  return out;
}

State OperatorSet::apply_plane_wave(const RVec& k, int sign, const State& v) const {
  State out = v;
  for (int axis = 0; axis < d_; ++axis) {
    const double ki = k[static_cast<std::size_t>(axis)];
    if (ki == 0.0) continue;
    const Eigen::MatrixXcd gen = Complex(0.0, sign * ki) * x_.cast<Complex>();
    out = apply_axis(matrix_exponential(gen), axis, out);
  }
  return out;
}

double ladder_commutator_residual(const OperatorSet& set) {
  const Eigen::MatrixXcd x = set.x_axis().cast<Complex>();
  const Eigen::MatrixXcd& p = set.p_axis();
  const Eigen::MatrixXcd comm = x * p - p * x - Complex(0.0, 1.0) * Eigen::MatrixXcd::Identity(x.rows(), x.cols());
  const int low = set.cutoff() / 2;
  return comm.topLeftCorner(low, low).cwiseAbs().maxCoeff();
}

bool IdentityReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

const IdentityCheck& IdentityReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw DomainError("no identity check named " + name);
}

std::string IdentityReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["dimension"] = dimension;
  doc["cutoff"] = cutoff;
  doc["k1"] = k1;
  doc["k2"] = k2;
  doc["eps1"] = eps1;
  doc["eps2"] = eps2;
  doc["checks"] = checks_json(checks);
  doc["all_passed"] = all_passed();
  return doc.dump(2);
}

Complex b_minus(const OperatorSet& set, const RVec& k1, const RVec& k2, const RVec& eps1, const RVec& eps2) {
  const State& psi = set.ground();
  RVec ksum(k1.size());
  for (std::size_t i = 0; i < k1.size(); ++i) ksum[i] = k1[i] + k2[i];
  const Complex direct = dot(eps1, eps2) * psi.dot(set.apply_plane_wave(ksum, -1, psi));

  State v = set.apply_hamiltonian(set.apply_position(eps2, psi));
  v = set.apply_plane_wave(k2, -1, v);
  v = set.apply_inverse_hamiltonian(v);
  v = set.apply_hamiltonian(set.apply_plane_wave(k1, -1, v));
  const State bra = set.apply_position(eps1, psi);
  return direct - 2.0 * bra.dot(v);
}

double oscillator_mixed_coefficient(double sigma2, const RVec& k1, const RVec& k2, const RVec& eps1,
                                    const RVec& eps2) {
  return 0.5 * sigma2 * (dot(eps1, k2) * dot(eps2, k1) - dot(eps1, eps2) * dot(k1, k2));
}

IdentityReport verify_identities(const OperatorSet& set, const RVec& k1, const RVec& k2, const RVec& eps1,
                                 const RVec& eps2) {
  require_geometry(set, k1, eps1, "k1", "eps1");
  require_geometry(set, k2, eps2, "k2", "eps2");

  IdentityReport report;
  report.dimension = set.dimension();
  report.cutoff = set.cutoff();
  report.k1 = k1;
  report.k2 = k2;
  report.eps1 = eps1;
  report.eps2 = eps2;
  const State& psi = set.ground();
  const double s2 = set.sigma2();

  // <ψ, e^{ik·x} H (ε·x) ψ> = 0 for ε ⊥ k
  const State h_eps1 = set.apply_hamiltonian(set.apply_position(eps1, psi));
  const State h_eps2 = set.apply_hamiltonian(set.apply_position(eps2, psi));
  report.checks.push_back(
      make_check("plane_wave_orthogonality_k1", std::abs(psi.dot(set.apply_plane_wave(k1, +1, h_eps1))), 1e-8));
  report.checks.push_back(
      make_check("plane_wave_orthogonality_k2", std::abs(psi.dot(set.apply_plane_wave(k2, +1, h_eps2))), 1e-8));

  // 2<(ε1·x) H (ε2·x)> = ε1·ε2
  const State x_eps1 = set.apply_position(eps1, psi);
  const Complex pol = 2.0 * x_eps1.dot(h_eps2);
  report.checks.push_back(make_check("position_hamiltonian_position", std::abs(pol - dot(eps1, eps2)), 1e-8));

  // <(a·x)^{2n+1}> = 0
  RVec a(eps1.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = eps1[i] + eps2[i] + k1[i] - 0.3 * k2[i] + 0.1 * (i + 1);
  State power = psi;
  double odd_residual[2] = {0.0, 0.0};
  for (int p = 1; p <= 5; ++p) {
    power = set.apply_position(a, power);
    if (p == 3) odd_residual[0] = std::abs(psi.dot(power));
    if (p == 5) odd_residual[1] = std::abs(psi.dot(power));
  }
  report.checks.push_back(make_check("odd_moment_3", odd_residual[0], 1e-12));
  report.checks.push_back(make_check("odd_moment_5", odd_residual[1], 1e-12));

  // M(1,2) = <(ε1·x) H (k1·x) H⁻¹ (k2·x) H (ε2·x)>
  auto mixed = [&](const RVec& ea, const RVec& ka, const RVec& kb, const RVec& eb) {
    State v = set.apply_hamiltonian(set.apply_position(eb, psi));
    v = set.apply_position(kb, v);
    v = set.apply_inverse_hamiltonian(v);
    v = set.apply_hamiltonian(set.apply_position(ka, v));
    return set.apply_position(ea, psi).dot(v);
  };
  const Complex m12 = mixed(eps1, k1, k2, eps2);
  const Complex m21 = mixed(eps2, k2, k1, eps1);
  const Complex kk = set.apply_position(k1, psi).dot(set.apply_position(k2, psi));

  const double e1k2 = dot(eps1, k2);
  const double e2k1 = dot(eps2, k1);
  const double e1e2 = dot(eps1, eps2);
  const double k1k2 = dot(k1, k2);
  const Complex symmetrized = m12 + m21;
  report.checks.push_back(
      make_check("mixed_term_symmetrized", std::abs(symmetrized - s2 * (e1e2 * k1k2 + e1k2 * e2k1)), 1e-8));
  const Complex coefficient = -e1e2 * kk + 2.0 * m12;
  report.checks.push_back(make_check("mixed_term_coefficient", std::abs(coefficient - s2 * e1k2 * e2k1), 1e-8));
  report.checks.push_back(make_check(
      "mixed_term_oscillator_closed_form",
      std::abs(coefficient - oscillator_mixed_coefficient(s2, k1, k2, eps1, eps2)), 1e-8));

  const double imag = std::max({std::abs(pol.imag()), std::abs(symmetrized.imag()), std::abs(kk.imag()),
                                std::abs(coefficient.imag())});
  report.checks.push_back(make_check("even_expectations_real", imag, 1e-10));

  // Vectors handed to H⁻¹ by B₋ and by the mixed term lie in the ground-state complement.
  const double overlap = std::max({std::abs(psi.dot(set.apply_plane_wave(k2, -1, h_eps2))),
                                   std::abs(psi.dot(set.apply_plane_wave(k1, -1, h_eps1))),
                                   std::abs(psi.dot(set.apply_position(k2, h_eps2))),
                                   std::abs(psi.dot(set.apply_position(k1, h_eps1)))});
  report.checks.push_back(make_check("resolvent_input_ground_overlap", overlap, 1e-9));
  report.checks.push_back(make_check("ladder_commutator", ladder_commutator_residual(set), 1e-10));
  return report;
}

bool ScalingReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

std::string ScalingReport::to_json() const {
  nlohmann::ordered_json doc;
  auto samples_json = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    samples_json.push_back({{"R", s.R}, {"re", s.b_minus.real()}, {"im", s.b_minus.imag()}});
  }
  doc["samples"] = samples_json;
  doc["predicted_coefficient"] = predicted_coefficient;
  doc["fitted_coefficient"] = fitted_coefficient;
  doc["coefficient_ratio"] = coefficient_ratio;
  doc["leading_exponent"] = leading_exponent;
  doc["halving_ratio"] = halving_ratio;
  doc["remainder_exponent"] = remainder_exponent;
  doc["predicted_remainder_exponent"] = predicted_remainder_exponent;
  doc["degenerate"] = degenerate;
  doc["checks"] = checks_json(checks);
  doc["all_passed"] = all_passed();
  return doc.dump(2);
}

ScalingReport bexp_scaling(const OperatorSet& set, const RVec& k1, const RVec& k2, const RVec& eps1, const RVec& eps2,
                           const std::vector<double>& R_list) {
  if (R_list.size() < 4) throw DomainError("scaling fit needs at least four R values");
  std::vector<double> Rs(R_list);
  std::sort(Rs.begin(), Rs.end());
  const double ratio = Rs[1] / Rs[0];
  for (std::size_t i = 1; i < Rs.size(); ++i) {
    if (!(Rs[i - 1] > 0.0) || std::abs(Rs[i] / Rs[i - 1] - ratio) > 1e-9 * ratio) {
      throw DomainError("R values must be positive and geometrically spaced");
    }
  }
  require_dimension(set, k1, "k1");
  require_dimension(set, k2, "k2");
  if (norm(k1) / Rs.front() > 0.5 + 1e-15 || norm(k2) / Rs.front() > 0.5 + 1e-15) {
    throw DomainError("|k|/R must not exceed 0.5");
  }

  ScalingReport report;
  std::vector<double> values;
  for (double R : Rs) {
    const RVec a = scaled(k1, 1.0 / R);
    const RVec b = scaled(k2, 1.0 / R);
    require_geometry(set, a, eps1, "k1/R", "eps1");
    require_geometry(set, b, eps2, "k2/R", "eps2");
    const Complex bm = b_minus(set, a, b, eps1, eps2);
    report.samples.push_back({R, bm});
    values.push_back(bm.real());
  }

  report.predicted_coefficient = set.sigma2() * dot(eps1, k2) * dot(eps2, k1);
  report.degenerate = std::abs(report.predicted_coefficient) < 1e-300;

  const std::size_t m = Rs.size();
  const double Ra = Rs[m - 2], Rb = Rs[m - 1];
  // R²B = c2 + c4/R² ⇒ eliminate c4 between the two largest R
  report.fitted_coefficient = (Rb * Rb * Rb * Rb * values[m - 1] - Ra * Ra * Ra * Ra * values[m - 2]) /
                              (Rb * Rb - Ra * Ra);
  report.leading_exponent = loglog_fit(Rs, values);
  report.halving_ratio = values[m - 2] / values[m - 1] * std::pow(Rb / Ra / 2.0, 2.0);

  std::vector<double> remainder, predicted_remainder;
  for (std::size_t i = 0; i < m; ++i) {
    remainder.push_back(values[i] - report.fitted_coefficient / (Rs[i] * Rs[i]));
    predicted_remainder.push_back(values[i] - report.predicted_coefficient / (Rs[i] * Rs[i]));
  }
  report.remainder_exponent = loglog_fit(Rs, remainder);
  report.predicted_remainder_exponent = loglog_fit(Rs, predicted_remainder);

  double max_imag = 0.0;
  for (const auto& s : report.samples) max_imag = std::max(max_imag, std::abs(s.b_minus.imag()));
  report.checks.push_back(make_check("b_minus_real", max_imag, 1e-10));

  if (report.degenerate) {
    report.coefficient_ratio = 0.0;
    double largest = 0.0;
    for (double v : values) largest = std::max(largest, std::abs(v));
    if (largest <= kVanishingFloor) {
      // Nothing left to fit: B₋ is zero to roundoff, which is O(R⁻⁴) a fortiori.
      report.leading_exponent = report.remainder_exponent = report.predicted_remainder_exponent = kNaN;
      report.checks.push_back(make_check("b_minus_vanishes", largest, kVanishingFloor));
    } else {
      report.checks.push_back(
          make_check("remainder_exponent", std::abs(report.predicted_remainder_exponent + 4.0), 0.2));
    }
  } else {
    report.coefficient_ratio = report.fitted_coefficient / report.predicted_coefficient;
    report.checks.push_back(make_check("leading_coefficient", std::abs(report.coefficient_ratio - 1.0), 0.02));
    report.checks.push_back(make_check("leading_power_law", std::abs(report.halving_ratio - 4.0) / 4.0, 0.005));
    report.checks.push_back(make_check("remainder_exponent", std::abs(report.remainder_exponent + 4.0), 0.2));
  }
  return report;
}

}  // namespace cpvdw::oplab
