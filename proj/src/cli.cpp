#include "cpvdw/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "cpvdw/atom.hpp"
#include "cpvdw/constants.hpp"
#include "cpvdw/dispersion.hpp"
#include "cpvdw/errors.hpp"
#include "cpvdw/exact_algebra.hpp"
#include "cpvdw/format.hpp"
#include "cpvdw/kernels.hpp"
#include "cpvdw/operator_lab.hpp"

namespace cpvdw::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

// JSON numbers are emitted through this so every value carries 17 significant digits.
json num(double x) { return json::parse(format_double(x)); }

// Usage errors found after CLI11 has parsed (bad config values, contradictory flags).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out_dir = "out";

  // kernels
  double t_min = 1e-2;
  double t_max = 1e2;
  int t_points = 40;
  bool kernel_check = false;

  // reduce
  std::string family;
  std::string poly;

  // quadrature
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;
  std::string mapping = "rational";
  double s_tolerance = 1e-6;

  // kappa / atom
  double alpha_e = 0.0;
  double alpha_m = 0.0;
  bool hydrogen = false;
  double lambda = 0.0;  // λ_cΛ; 0 means no cutoff
  double alpha_fs = constants::kFineStructure;
  std::string convention = "paper-factor-2";
  double r_max = 40.0;
  int grid_n = 20000;

  // potential
  double kappa = 0.0;
  double R_min = 10.0;
  double R_max = 1000.0;
  int points = 50;
  std::string units = "atomic";

  // operators
  int dim = 2;
  int cutoff = 32;
  std::string k1 = "0.1,0";
  std::string k2 = "0,0.1";
  std::string eps1 = "0,1";
  std::string eps2 = "1,0";
  std::string scale_k1 = "0.2,0";
  std::string scale_k2 = "0,0.2";
  std::string R_list = "2,4,8,16";
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse " + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

quad::QuadratureSpec quadrature_spec(const Options& o) {
  quad::QuadratureSpec spec;
  spec.rel_tol = o.rel_tol;
  spec.abs_tol = o.abs_tol;
  spec.max_subdivisions = o.max_subdivisions;
  spec.mapping = o.mapping == "exponential" ? quad::Mapping::Exponential : quad::Mapping::Rational;
  spec.validate();
  return spec;
}

std::string spec_tag(const quad::QuadratureSpec& s) {
  return "rel_tol=" + format_double(s.rel_tol, 3) + " abs_tol=" + format_double(s.abs_tol, 3) +
         " mapping=" + quad::to_string(s.mapping);
}

dispersion::Convention parse_convention(const std::string& s) {
  return s == "no-factor-2" ? dispersion::Convention::NoFactor2 : dispersion::Convention::PaperFactor2;
}

std::string join_path(const std::string& dir, const std::string& name) { return dir + "/" + name; }

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  write_file_atomically(path, content);
  out << "wrote " << path << "\n";
}

// ---- subcommands --------------------------------------------------------------------------

int cmd_kernels(const Options& o, std::ostream& out) {
  if (!(o.t_min > 0.0 && o.t_max > o.t_min && o.t_points >= 2)) {
    throw UsageError("kernels needs 0 < t-min < t-max and at least two points");
  }
  std::vector<double> ts;
  for (int i = 0; i < o.t_points; ++i) {
    ts.push_back(o.t_min * std::pow(o.t_max / o.t_min, static_cast<double>(i) / (o.t_points - 1)));
  }
  std::ostringstream csv;
  kernels::write_kernel_table(csv, ts);
  emit(join_path(o.out_dir, "kernels.csv"), csv.str(), out);
  if (!o.kernel_check) return kExitOk;

  quad::QuadratureSpec spec = quadrature_spec(o);
  double worst = 0.0;
  for (double t : ts) {
    for (int n = 0; n <= kernels::kMaxMoment; ++n) {
      const kernels::KernelId id(n);
      const double closed = kernels::kernel_closed(id, t).magnitude;
      const double numeric = kernels::kernel_numeric(id, t, spec).magnitude;
      worst = std::max(worst, std::abs(closed - numeric) / (1.0 + std::abs(closed)));
    }
  }
  const bool pass = worst <= 1e-8;
  out << "kernel oracle max |closed-numeric|/(1+|closed|) = " << format_double(worst, 3) << " (limit 1e-8, "
      << spec_tag(spec) << ") " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_reduce(const Options& o, std::ostream& out) {
  if (o.family.empty() == o.poly.empty()) throw UsageError("reduce needs exactly one of --family or --poly");
  algebra::UPolynomial F;
  if (!o.family.empty()) {
    try {
      F = algebra::family_polynomial(algebra::family_index(o.family));
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  } else {
    F = algebra::parse_u_polynomial(o.poly);
  }
  const auto table = algebra::reduce_to_moments(F);
  out << json::parse(table.to_json()).dump(2) << "\n";
  return kExitOk;
}

json sj_json(const quad::QuadratureSpec& spec, double limit, bool& all_pass, std::ostream& out) {
  json doc;
  doc["quadrature"] = {{"rel_tol", num(spec.rel_tol)},
                       {"abs_tol", num(spec.abs_tol)},
                       {"max_subdivisions", spec.max_subdivisions},
                       {"mapping", quad::to_string(spec.mapping)}};
  doc["limit"] = num(limit);
  json rows = json::array();
  all_pass = true;
  const double pi3 = kPi * kPi * kPi;
  for (int j = 1; j <= 3; ++j) {
    const double S = dispersion::compute_S(algebra::reduce_to_moments(algebra::family_polynomial(j)), spec);
    const double target = dispersion::reference_S(j).coeff().to_double();
    const double deviation = S / pi3 - target;
    const bool pass = std::abs(deviation) <= limit * target;
    all_pass = all_pass && pass;
    char line[160];
    std::snprintf(line, sizeof line, "S%d/pi^3 = %.6f (target %.0f) S%d = %.10g deviation %.3e [%s, limit %.0e rel] %s",
                  j, S / pi3, target, j, S, deviation, spec_tag(spec).c_str(), limit, pass ? "PASS" : "FAIL");
    out << line << "\n";
    rows.push_back({{"j", j},
                    {"S", num(S)},
                    {"S_over_pi3", num(S / pi3)},
                    {"target_over_pi3", num(target)},
                    {"deviation", num(deviation)},
                    {"pass", pass}});
  }
  doc["S"] = rows;
  return doc;
}

int cmd_sj(const Options& o, std::ostream& out, bool write) {
  bool pass = false;
  const json doc = sj_json(quadrature_spec(o), o.s_tolerance, pass, out);
  if (write) emit(join_path(o.out_dir, "sj.json"), doc.dump(2) + "\n", out);
  return pass ? kExitOk : kExitCheckFailed;
}

json breakdown_json(const dispersion::KappaBreakdown& k) {
  return {{"scheme", dispersion::to_string(k.scheme)},
          {"ee", num(k.ee)},
          {"em", num(k.em)},
          {"mm", num(k.mm)},
          {"total", num(k.total)}};
}

json coefficients_json(const dispersion::CoefficientSet& c) {
  return {{"ee", c.ee.str()}, {"em", c.em.str()}, {"mm", c.mm.str()}};
}

struct MomentSource {
  dispersion::DipoleMoments moments;
  json provenance;
};

std::vector<MomentSource> collect_moments(const Options& o) {
  std::vector<MomentSource> sources;
  if (o.hydrogen) {
    if (!(o.alpha_fs > 0.0)) throw UsageError("--alpha-fs must be positive");
    const double Lambda = o.lambda > 0.0 ? atom::cutoff_in_bohr_units(o.lambda, o.alpha_fs) : atom::kNoCutoff;
    atom::RadialGrid grid{o.r_max, o.grid_n};
    const atom::AtomSolution sol = atom::solve_ground(grid, Lambda);
    for (auto conv : {dispersion::Convention::PaperFactor2, dispersion::Convention::NoFactor2}) {
      json prov = {{"source", "hydrogen"},
                   {"energy_hartree", num(sol.energy)},
                   {"r_max", num(grid.r_max)},
                   {"grid_points", grid.n},
                   {"lambda_c_Lambda", o.lambda > 0.0 ? num(o.lambda) : json("none")},
                   {"alpha_fs", num(o.alpha_fs)}};
      sources.push_back({atom::dipole_moments(sol, o.alpha_fs, conv), prov});
    }
  } else {
    const auto given = parse_convention(o.convention);
    dispersion::DipoleMoments m{o.alpha_e, o.alpha_m, given};
    dispersion::DipoleMoments other = m;
    if (given == dispersion::Convention::PaperFactor2) {
      other.alpha_E = m.alpha_E / 2.0;
      other.convention = dispersion::Convention::NoFactor2;
    } else {
      other.alpha_E = m.alpha_E * 2.0;
      other.convention = dispersion::Convention::PaperFactor2;
    }
    sources.push_back({m, {{"source", "flags"}}});
    sources.push_back({other, {{"source", "converted from flags"}}});
  }
  return sources;
}

json kappa_report(const Options& o, std::ostream& out) {
  json doc;
  doc["coefficients"] = {{"this-paper", coefficients_json(dispersion::kappa_coefficients())},
                         {"feinberg-sucher-boyer", coefficients_json(dispersion::feinberg_sucher_coefficients())}};
  json rows = json::array();
  for (const auto& src : collect_moments(o)) {
    const auto& m = src.moments;
    json row;
    row["convention"] = dispersion::to_string(m.convention);
    row["alpha_E"] = num(m.alpha_E);
    row["alpha_M"] = num(m.alpha_M);
    row["input"] = src.provenance;
    json schemes = json::array();
    for (const auto& k : {dispersion::kappa_dimensionless(m), dispersion::feinberg_sucher_kappa(m)}) {
      schemes.push_back(breakdown_json(k));
      out << "kappa [" << dispersion::to_string(k.scheme) << ", " << dispersion::to_string(m.convention)
          << "] alpha_E=" << format_double(m.alpha_E, 10) << " alpha_M=" << format_double(m.alpha_M, 10)
          << " ee=" << format_double(k.ee, 10) << " em=" << format_double(k.em, 10)
          << " mm=" << format_double(k.mm, 10) << " total=" << format_double(k.total, 10) << "\n";
    }
    row["breakdown"] = schemes;
    rows.push_back(row);
  }
  doc["results"] = rows;
  return doc;
}

int cmd_kappa(const Options& o, std::ostream& out, bool write) {
  if (o.hydrogen && (o.alpha_e != 0.0 || o.alpha_m != 0.0)) {
    throw UsageError("--hydrogen cannot be combined with --alpha-e/--alpha-m");
  }
  const json doc = kappa_report(o, out);
  if (write) emit(join_path(o.out_dir, "kappa.json"), doc.dump(2) + "\n", out);
  return kExitOk;
}

dispersion::UnitSystem unit_system(const Options& o) {
  if (o.units == "si") return dispersion::UnitSystem::si_electronvolt();
  return dispersion::UnitSystem::atomic(o.alpha_fs);
}

int cmd_potential(const Options& o, std::ostream& out) {
  double kappa = o.kappa;
  std::string scheme = "given";
  std::string convention = "given";
  if (kappa == 0.0) {
    const auto m = collect_moments(o).front().moments;
    kappa = dispersion::kappa_dimensionless(m).total;
    scheme = dispersion::to_string(dispersion::Scheme::ThisPaper);
    convention = dispersion::to_string(m.convention);
  }
  const auto units = unit_system(o);
  const auto curve = dispersion::potential_curve(o.R_min, o.R_max, o.points, kappa, units);
  const auto slopes = dispersion::loglog_slopes(curve);
  double worst = 0.0;
  for (double s : slopes) worst = std::max(worst, std::abs(s + 7.0));
  const bool pass = worst <= 1e-12;

  std::string csv = "# delta_E = -kappa alpha m c^2 (R/r_B)^-7 in " + units.energy_unit + ", kappa=" +
                    format_double(kappa) + "\nR_over_rB,delta_E\n";
  for (const auto& p : curve) csv += format_double(p.r_over_rB) + "," + format_double(p.delta_E) + "\n";
  json meta = {{"kappa", num(kappa)},
               {"scheme", scheme},
               {"convention", convention},
               {"units",
                {{"energy", units.energy_unit},
                 {"length", units.length_unit},
                 {"alpha_fs", num(units.alpha_fs)},
                 {"electron_mass_energy", num(units.electron_mass_energy)},
                 {"bohr_radius", num(units.bohr_radius)},
                 {"compton_length", num(units.compton_length)}}},
               {"max_slope_deviation", num(worst)}};
  emit(join_path(o.out_dir, "potential.csv"), csv, out);
  emit(join_path(o.out_dir, "potential.json"), meta.dump(2) + "\n", out);
  out << "potential slope max |d ln|dE|/d ln R + 7| = " << format_double(worst, 3) << " (limit 1e-12) "
      << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

void print_checks(const std::vector<oplab::IdentityCheck>& checks, std::ostream& out) {
  for (const auto& c : checks) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-36s residual %.3e  tol %.0e  %s", c.name.c_str(), c.residual, c.tolerance,
                  c.pass ? "PASS" : "FAIL");
    out << line << "\n";
  }
}

int cmd_operators(const Options& o, std::ostream& out) {
  const auto set = oplab::build_oscillator(o.dim, o.cutoff);
  const auto report = oplab::verify_identities(set, parse_list(o.k1, "k1"), parse_list(o.k2, "k2"),
                                               parse_list(o.eps1, "eps1"), parse_list(o.eps2, "eps2"));
  const auto scaling = oplab::bexp_scaling(set, parse_list(o.scale_k1, "scale-k1"), parse_list(o.scale_k2, "scale-k2"),
                                           parse_list(o.eps1, "eps1"), parse_list(o.eps2, "eps2"),
                                           parse_list(o.R_list, "R-list"));
  out << "operator identities (d=" << o.dim << ", N=" << o.cutoff << ")\n";
  print_checks(report.checks, out);
  out << "B- scaling: fitted R^-2 coefficient " << format_double(scaling.fitted_coefficient, 8) << ", predicted "
      << format_double(scaling.predicted_coefficient, 8) << ", remainder exponent "
      << format_double(scaling.remainder_exponent, 6) << "\n";
  print_checks(scaling.checks, out);

  json doc;
  doc["identities"] = json::parse(report.to_json());
  doc["scaling"] = json::parse(scaling.to_json());
  emit(join_path(o.out_dir, "operators.json"), doc.dump(2) + "\n", out);
  return report.all_passed() && scaling.all_passed() ? kExitOk : kExitCheckFailed;
}

int cmd_all(Options o, std::ostream& out) {
  int worst = kExitOk;
  auto note = [&](int code) { worst = std::max(worst, code); };

  o.kernel_check = true;
  {
    // The small-t oracle points cancel to ~1e-9 absolute; see README.
    Options k = o;
    k.rel_tol = 1e-10;
    k.abs_tol = 5e-9;
    note(cmd_kernels(k, out));
  }
  json tables;
  for (int j = 1; j <= 3; ++j) {
    tables["F" + std::to_string(j)] =
        json::parse(algebra::reduce_to_moments(algebra::family_polynomial(j)).to_json());
  }
  emit(join_path(o.out_dir, "moment_tables.json"), tables.dump(2) + "\n", out);
  note(cmd_sj(o, out, true));

  Options hyd = o;
  hyd.hydrogen = true;
  hyd.alpha_e = hyd.alpha_m = 0.0;
  note(cmd_kappa(hyd, out, true));
  hyd.kappa = 0.0;
  note(cmd_potential(hyd, out));
  note(cmd_operators(o, out));
  out << "all: " << (worst == kExitOk ? "every check passed" : "one or more checks FAILED") << "\n";
  return worst;
}

// ---- config handling ----------------------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return entries;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

struct Parser {
  CLI::App app{"Retarded van der Waals strength: kernels, S integrals, kappa, curves and operator checks", "cpvdw"};
  Options o;
  std::map<std::string, CLI::App*> subs;
  std::set<std::string> flag_keys;

  Parser() {
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", o.config, std::string("key=value defaults; also read from $") + kConfigEnv);
    app.add_option("--out-dir", o.out_dir, "Directory for written artifacts")->capture_default_str();

    auto quad_opts = [&](CLI::App* s) {
      s->add_option("--tol,--rel-tol", o.rel_tol, "Relative quadrature tolerance")->capture_default_str();
      s->add_option("--abs-tol", o.abs_tol, "Absolute quadrature tolerance")->capture_default_str();
      s->add_option("--max-subdivisions", o.max_subdivisions)->capture_default_str();
      s->add_option("--mapping", o.mapping, "Half-line mapping")
          ->check(CLI::IsMember({"rational", "exponential"}))
          ->capture_default_str();
    };
    auto moment_opts = [&](CLI::App* s) {
      s->add_option("--alpha-e", o.alpha_e, "Dimensionless electric dipole moment");
      s->add_option("--alpha-m", o.alpha_m, "Dimensionless magnetic dipole moment");
      flag(s, "--hydrogen", o.hydrogen, "Take the moments from the hydrogen solver");
      s->add_option("--lambda", o.lambda, "Cutoff lambda_c*Lambda for the smeared Coulomb potential");
      s->add_option("--alpha-fs", o.alpha_fs, "Fine-structure constant")->capture_default_str();
      s->add_option("--convention", o.convention, "Convention of --alpha-e")
          ->check(CLI::IsMember({"paper-factor-2", "no-factor-2"}))
          ->capture_default_str();
      s->add_option("--r-max", o.r_max, "Radial box size in Bohr radii")->capture_default_str();
      s->add_option("--grid-n", o.grid_n, "Interior radial grid points")->capture_default_str();
    };

    auto* k = sub("kernels", "Write K0..K4 on a log t-grid to <out-dir>/kernels.csv");
    k->add_option("--t-min", o.t_min)->capture_default_str();
    k->add_option("--t-max", o.t_max)->capture_default_str();
    k->add_option("--t-points", o.t_points)->capture_default_str();
    flag(k, "--check", o.kernel_check, "Compare against the quadrature oracle (exit 2 on mismatch)");
    quad_opts(k);

    auto* r = sub("reduce", "Print the moment-pair table of F1/F2/F3 or of a u-polynomial as JSON");
    r->add_option("--family", o.family, "F1, F2 or F3");
    r->add_option("--poly", o.poly, "Coefficients of 1, u, u^2, ... e.g. 1,0,-1/2");

    auto* s = sub("sj", "Compute S1..S3; writes <out-dir>/sj.json");
    quad_opts(s);
    s->add_option("--limit", o.s_tolerance, "Relative acceptance limit against 92, 208, 256")->capture_default_str();

    auto* kap = sub("kappa", "Kappa breakdown for both schemes and conventions; writes <out-dir>/kappa.json");
    moment_opts(kap);

    auto* p = sub("potential", "Write <out-dir>/potential.csv and potential.json");
    moment_opts(p);
    p->add_option("--kappa", o.kappa, "Use this kappa instead of computing one");
    p->add_option("--R-min", o.R_min, "Smallest separation in Bohr radii")->capture_default_str();
    p->add_option("--R-max", o.R_max, "Largest separation in Bohr radii")->capture_default_str();
    p->add_option("--points", o.points)->capture_default_str();
    p->add_option("--units", o.units)->check(CLI::IsMember({"atomic", "si"}))->capture_default_str();

    auto* v = sub("validate-operators", "Oscillator identity suite; writes <out-dir>/operators.json");
    operator_opts(v);

    auto* a = sub("all", "Full run into <out-dir>: kernels.csv, moment_tables.json, sj.json, kappa.json, "
                         "potential.csv/json, operators.json");
    quad_opts(a);
    a->add_option("--limit", o.s_tolerance)->capture_default_str();
    moment_opts(a);
    a->add_option("--R-min", o.R_min)->capture_default_str();
    a->add_option("--R-max", o.R_max)->capture_default_str();
    a->add_option("--points", o.points)->capture_default_str();
    a->add_option("--units", o.units)->check(CLI::IsMember({"atomic", "si"}))->capture_default_str();
    operator_opts(a);
  }

  CLI::App* sub(const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    subs[name] = s;
    return s;
  }

  void flag(CLI::App* s, const std::string& name, bool& target, const std::string& help) {
    s->add_flag(name, target, help);
    flag_keys.insert(name.substr(2));
  }

  void operator_opts(CLI::App* v) {
    v->add_option("--dim", o.dim)->check(CLI::IsMember({2, 3}))->capture_default_str();
    v->add_option("--cutoff", o.cutoff, "Levels per axis")->capture_default_str();
    v->add_option("--k1", o.k1)->capture_default_str();
    v->add_option("--k2", o.k2)->capture_default_str();
    v->add_option("--eps1", o.eps1)->capture_default_str();
    v->add_option("--eps2", o.eps2)->capture_default_str();
    v->add_option("--scale-k1", o.scale_k1)->capture_default_str();
    v->add_option("--scale-k2", o.scale_k2)->capture_default_str();
    v->add_option("--R-list", o.R_list)->capture_default_str();
  }

  bool known_anywhere(const std::string& key) const {
    if (app.get_option_no_throw("--" + key)) return true;
    for (const auto& [name, s] : subs) {
      if (s->get_option_no_throw("--" + key)) return true;
    }
    return false;
  }
};

// Splices config entries in front of the explicit flags they do not override.
std::vector<std::string> apply_config(const Parser& p, const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env && *env) path = env;
  }
  if (path.empty()) return args;

  const CLI::App* chosen = nullptr;
  std::size_t sub_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (auto it = p.subs.find(args[i]); it != p.subs.end()) {
      chosen = it->second;
      sub_pos = i;
      break;
    }
  }

  std::vector<std::string> global, local;
  for (const auto& [key, value] : read_config(path)) {
    if (key == "config") throw UsageError("config files cannot name another config");
    if (!p.known_anywhere(key)) throw UsageError("unknown config key '" + key + "'");
    if (given_on_command_line(args, key)) continue;
    const bool is_global = p.app.get_option_no_throw("--" + key) != nullptr;
    if (!is_global && (chosen == nullptr || chosen->get_option_no_throw("--" + key) == nullptr)) continue;
    auto& dest = is_global ? global : local;
    if (p.flag_keys.count(key)) {
      if (value == "true" || value == "1") {
        dest.push_back("--" + key);
      } else if (value != "false" && value != "0") {
        throw UsageError("config key '" + key + "' expects true or false");
      }
    } else {
      dest.push_back("--" + key);
      dest.push_back(value);
    }
  }
  std::vector<std::string> merged(global);
  merged.insert(merged.end(), args.begin(), args.begin() + static_cast<long>(std::min(sub_pos + 1, args.size())));
  merged.insert(merged.end(), local.begin(), local.end());
  if (sub_pos < args.size()) merged.insert(merged.end(), args.begin() + static_cast<long>(sub_pos) + 1, args.end());
  return merged;
}

void report_failure(std::ostream& err, const std::string& kind, const std::string& message,
                    const json& extra = json::object()) {
  json doc = {{"error", kind}, {"message", message}};
  for (const auto& [k, v] : extra.items()) doc[k] = v;
  err << doc.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parser p;
  try {
    std::vector<std::string> argv = apply_config(p, args);
    std::reverse(argv.begin(), argv.end());  // CLI11 consumes the vector from the back
    p.app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << p.app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << p.app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << p.app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const Options& o = p.o;
  try {
    if (p.subs["kernels"]->parsed()) return cmd_kernels(o, out);
    if (p.subs["reduce"]->parsed()) return cmd_reduce(o, out);
    if (p.subs["sj"]->parsed()) return cmd_sj(o, out, true);
    if (p.subs["kappa"]->parsed()) return cmd_kappa(o, out, true);
    if (p.subs["potential"]->parsed()) return cmd_potential(o, out);
    if (p.subs["validate-operators"]->parsed()) return cmd_operators(o, out);
    return cmd_all(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedDegreeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AccuracyError& e) {
    report_failure(err, "accuracy", e.what(), {{"achieved_error", num(e.achieved_error())}});
    return kExitNumeric;
  } catch (const std::exception& e) {
    report_failure(err, "numeric", e.what());
    return kExitNumeric;
  }
}

}  // namespace cpvdw::cli
