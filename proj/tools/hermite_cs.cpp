// hermite-cs: batch front end for the deformed-Hermite coherent-state library.
//
// One subcommand per library check; every run writes one machine-readable
// report (JSON, or CSV for the sweep commands).  Reports are byte-stable:
// fixed field order, %.17g numeric formatting, and wall_time_s printed as 0
// unless --timing is given, so identical configs give identical bytes.
//
// Exit status: 0 success, 1 at least one check failed, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "hcs/bargmann.hpp"
#include "hcs/entanglement.hpp"
#include "hcs/hermite.hpp"
#include "hcs/quadrature.hpp"
#include "hcs/rkhs.hpp"
#include "hcs/states.hpp"

using hcs::AlphaParam;
using hcs::BasisFamily;
using hcs::BasisSpec;
using hcs::Cplx;
using hcs::KernelKind;
using hcs::KernelSpec;
using hcs::TransformKind;
using hcs::TransformSpec;

namespace {

// ---------------------------------------------------------------- formatting

std::string js_num(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string js_int(long long v) { return std::to_string(v); }

std::string js_bool(bool b) { return b ? "true" : "false"; }

std::string js_str(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char b[8];
          std::snprintf(b, sizeof b, "\\u%04x", c);
          out += b;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string js_cplx(Cplx z) {
  return "{\"re\":" + js_num(z.real()) + ",\"im\":" + js_num(z.imag()) + "}";
}

std::string js_arr(const std::vector<std::string>& fragments) {
  std::string out = "[";
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (i) out += ",";
    out += fragments[i];
  }
  return out + "]";
}

struct CheckRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;   // values are JSON fragments
  std::vector<std::pair<std::string, std::string>> results;  // values are JSON fragments
  std::vector<CheckRow> checks;
  std::vector<std::string> warnings;
  std::string csv;  // when set, rendered instead of JSON

  void param(const std::string& k, const std::string& fragment) { params.emplace_back(k, fragment); }
  void result(const std::string& k, const std::string& fragment) {
    results.emplace_back(k, fragment);
  }
  void check(const std::string& name, double value, double tol, bool pass) {
    checks.push_back({name, value, tol, pass});
  }
  // convention used by most rows: pass when value <= tol
  void check_le(const std::string& name, double value, double tol) {
    check(name, value, tol, value <= tol);
  }
  bool all_pass() const {
    for (const CheckRow& c : checks)
      if (!c.pass) return false;
    return true;
  }

  std::string render(double wall_s) const {
    if (!csv.empty()) return csv;
    std::string out = "{\"command\":" + js_str(command) + ",\"parameters\":{";
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (i) out += ",";
      out += js_str(params[i].first) + ":" + params[i].second;
    }
    out += "},\"results\":{";
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (i) out += ",";
      out += js_str(results[i].first) + ":" + results[i].second;
    }
    out += "},\"checks\":[";
    for (std::size_t i = 0; i < checks.size(); ++i) {
      if (i) out += ",";
      out += "{\"name\":" + js_str(checks[i].name) + ",\"value\":" + js_num(checks[i].value) +
             ",\"tolerance\":" + js_num(checks[i].tolerance) +
             ",\"pass\":" + js_bool(checks[i].pass) + "}";
    }
    out += "],\"warnings\":" +
           js_arr([&] {
             std::vector<std::string> w;
             for (const std::string& s : warnings) w.push_back(js_str(s));
             return w;
           }());
    out += ",\"wall_time_s\":" + js_num(wall_s) + "}";
    return out;
  }
};

// ------------------------------------------------------------------- parsing

double num_all(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw hcs::domain_error("malformed number: " + s);
  return v;
}

// Accepts "1.5", "-0.3+0.2i", "0.5i", "-i", "1e-3-2e-2i".
Cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw hcs::domain_error("empty complex literal");
  if (s.back() != 'i' && s.back() != 'I') return {num_all(s), 0.0};
  s.pop_back();
  if (s.empty() || s == "+") return {0.0, 1.0};
  if (s == "-") return {0.0, -1.0};
  int split = -1;
  for (int i = static_cast<int>(s.size()) - 1; i > 0; --i) {
    char c = s[std::size_t(i)];
    if ((c == '+' || c == '-') && s[std::size_t(i - 1)] != 'e' && s[std::size_t(i - 1)] != 'E') {
      split = i;
      break;
    }
  }
  if (split < 0) return {0.0, num_all(s)};
  std::string im = s.substr(std::size_t(split));
  double imv = (im == "+") ? 1.0 : (im == "-") ? -1.0 : num_all(im);
  return {num_all(s.substr(0, std::size_t(split))), imv};
}

BasisFamily parse_family(const std::string& s) {
  if (s == "mono1d") return BasisFamily::Monomial1D;
  if (s == "mono2d") return BasisFamily::Monomial2D;
  if (s == "h1d") return BasisFamily::HolHermiteH1D;
  if (s == "k1d") return BasisFamily::HolHermiteK1D;
  if (s == "h2d") return BasisFamily::HolHermiteH2D;
  if (s == "k2d") return BasisFamily::HolHermiteK2D;
  if (s == "psi1d") return BasisFamily::OscillatorPsi1D;
  if (s == "psi2d") return BasisFamily::OscillatorPsi2D;
  if (s == "szego") return BasisFamily::SzegoDisk;
  if (s == "bergman") return BasisFamily::BergmanDisk;
  if (s == "ratio") return BasisFamily::FactorialRatio;
  throw hcs::domain_error(
      "unknown family '" + s +
      "' (mono1d mono2d h1d k1d h2d k2d psi1d psi2d szego bergman ratio)");
}

KernelKind parse_kernel(const std::string& s) {
  if (s == "bargmann1d") return KernelKind::Bargmann1D;
  if (s == "bargmann2d") return KernelKind::Bargmann2D;
  if (s == "vanem1d") return KernelKind::VanEM1D;
  if (s == "vanem2d") return KernelKind::VanEM2D;
  if (s == "szego") return KernelKind::Szego;
  if (s == "bergman") return KernelKind::Bergman;
  if (s == "ratio3f2") return KernelKind::FactorialRatio3F2;
  throw hcs::domain_error("unknown kernel '" + s +
                          "' (bargmann1d bargmann2d vanem1d vanem2d szego bergman ratio3f2)");
}

TransformKind parse_transform(const std::string& s) {
  if (s == "a1") return TransformKind::A1;
  if (s == "b1") return TransformKind::B1;
  if (s == "c1") return TransformKind::C1;
  if (s == "c1hat") return TransformKind::C1hat;
  if (s == "a2") return TransformKind::A2;
  if (s == "b2") return TransformKind::B2;
  if (s == "c2") return TransformKind::C2;
  if (s == "c2hat") return TransformKind::C2hat;
  throw hcs::domain_error("unknown transform '" + s + "' (a1 b1 c1 c1hat a2 b2 c2 c2hat)");
}

BasisSpec make_basis(BasisFamily fam, double alpha, double a = 1.0, double b = 1.0) {
  BasisSpec s;
  s.family = fam;
  s.alpha = alpha;
  s.osc_a = a;
  s.osc_b = b;
  return s;
}

double identity_defect(const Eigen::MatrixXcd& m) {
  return (m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

double block_max_2(const Eigen::MatrixXcd& m, int N, int keep) {
  double mx = 0.0;
  for (int a = 0; a < keep; ++a)
    for (int b = 0; b < keep; ++b)
      for (int c = 0; c < keep; ++c)
        for (int d = 0; d < keep; ++d)
          mx = std::max(mx, std::abs(m(a * N + b, c * N + d)));
  return mx;
}

// ------------------------------------------------------------ shared options

struct Opts {
  std::string family, kernel, kind, pair, quantity = "both", log_form = "oneminus";
  std::string format;  // json|csv, sweep commands only
  std::string z = "0", z2, w = "0", w1 = "0", w2 = "0", z1 = "0", xi;
  std::string moments;
  double alpha = 0.5;
  double osc_a = 1.0, osc_b = 1.0;
  double tol = -1.0;       // <0: per-command default
  double rank_tol = 1e-10;
  int n = -1;              // <0: per-command default
  int m = 0;
  int order = -1;
  int terms = -1;
  int arity = 1;
  int block = -1;
  int factorials = -1;
  std::vector<double> alphas;
  bool normalize = false;
};

void echo_point(Report& rep, const std::string& key, Cplx v) { rep.param(key, js_cplx(v)); }

// ------------------------------------------------------------------ handlers

void cmd_eval_basis(const Opts& o, Report& rep) {
  BasisFamily fam = parse_family(o.family);
  BasisSpec spec = make_basis(fam, o.alpha, o.osc_a, o.osc_b);
  int n = o.n < 0 ? 0 : o.n;
  rep.param("family", js_str(o.family));
  if (hcs::uses_alpha(fam)) rep.param("alpha", js_num(o.alpha));
  if (fam == BasisFamily::OscillatorPsi1D || fam == BasisFamily::OscillatorPsi2D) {
    rep.param("osc_a", js_num(o.osc_a));
    if (fam == BasisFamily::OscillatorPsi2D) rep.param("osc_b", js_num(o.osc_b));
  }
  if (hcs::is_two_variable(fam)) {
    Cplx z1 = parse_complex(o.z), z2 = parse_complex(o.z2.empty() ? "0" : o.z2);
    rep.param("m", js_int(o.m));
    rep.param("n", js_int(n));
    echo_point(rep, "z1", z1);
    echo_point(rep, "z2", z2);
    rep.result("value", js_cplx(hcs::basis_eval(spec, o.m, n, z1, z2)));
  } else {
    Cplx z = parse_complex(o.z);
    rep.param("n", js_int(n));
    echo_point(rep, "z", z);
    rep.result("value", js_cplx(hcs::basis_eval(spec, n, z)));
  }
}

void cmd_kernel(const Opts& o, Report& rep) {
  KernelKind kind = parse_kernel(o.kernel);
  KernelSpec spec{kind, {}};
  if (hcs::kernel_uses_alpha(kind)) spec.alpha = AlphaParam(o.alpha);
  rep.param("spec", js_str(o.kernel));
  if (hcs::kernel_uses_alpha(kind)) rep.param("alpha", js_num(o.alpha));
  if (hcs::kernel_is_two_mode(kind)) {
    Cplx z1 = parse_complex(o.z1), z2 = parse_complex(o.z2.empty() ? "0" : o.z2);
    Cplx w1 = parse_complex(o.w1), w2 = parse_complex(o.w2);
    echo_point(rep, "z1", z1);
    echo_point(rep, "z2", z2);
    echo_point(rep, "w1", w1);
    echo_point(rep, "w2", w2);
    rep.result("value", js_cplx(hcs::closed_kernel(spec, z1, z2, w1, w2)));
  } else {
    Cplx z = parse_complex(o.z), w = parse_complex(o.w);
    echo_point(rep, "z", z);
    echo_point(rep, "w", w);
    rep.result("value", js_cplx(hcs::closed_kernel(spec, z, w)));
  }
}

KernelSpec natural_kernel(BasisFamily fam, double alpha) {
  switch (fam) {
    case BasisFamily::Monomial1D:
    case BasisFamily::HolHermiteK1D: return {KernelKind::Bargmann1D, {}};
    case BasisFamily::HolHermiteH1D: return {KernelKind::VanEM1D, AlphaParam(alpha)};
    case BasisFamily::Monomial2D:
    case BasisFamily::HolHermiteK2D: return {KernelKind::Bargmann2D, {}};
    case BasisFamily::HolHermiteH2D: return {KernelKind::VanEM2D, AlphaParam(alpha)};
    case BasisFamily::SzegoDisk: return {KernelKind::Szego, {}};
    case BasisFamily::BergmanDisk: return {KernelKind::Bergman, {}};
    case BasisFamily::FactorialRatio: return {KernelKind::FactorialRatio3F2, {}};
    default:
      throw hcs::domain_error(hcs::family_name(fam) + " has no closed kernel to compare against");
  }
}

void cmd_zaremba_compare(const Opts& o, Report& rep) {
  BasisFamily fam = parse_family(o.family);
  KernelSpec kernel = natural_kernel(fam, o.alpha);
  bool ratio = fam == BasisFamily::FactorialRatio;
  int terms = o.terms > 0 ? o.terms : (ratio ? 2000 : 80);
  double tol = o.tol > 0 ? o.tol : (ratio ? 1e-8 : 1e-9);
  BasisSpec spec = make_basis(fam, o.alpha);
  spec.max_index = std::max(terms + 100, 200);

  rep.param("family", js_str(o.family));
  if (hcs::uses_alpha(fam)) rep.param("alpha", js_num(o.alpha));
  rep.param("terms", js_int(terms));
  rep.param("tolerance", js_num(tol));

  hcs::ZarembaResult r;
  Cplx closed;
  if (hcs::is_two_variable(fam)) {
    Cplx z1 = parse_complex(o.z1), z2 = parse_complex(o.z2.empty() ? "0" : o.z2);
    Cplx w1 = parse_complex(o.w1), w2 = parse_complex(o.w2);
    echo_point(rep, "z1", z1);
    echo_point(rep, "z2", z2);
    echo_point(rep, "w1", w1);
    echo_point(rep, "w2", w2);
    r = hcs::zaremba_kernel(spec, z1, z2, w1, w2, terms);
    closed = hcs::closed_kernel(kernel, z1, z2, w1, w2);
  } else {
    Cplx z = parse_complex(o.z), w = parse_complex(o.w);
    echo_point(rep, "z", z);
    echo_point(rep, "w", w);
    r = hcs::zaremba_kernel(spec, z, w, terms);
    closed = hcs::closed_kernel(kernel, z, w);
  }
  rep.result("closed_form", js_cplx(closed));
  if (!r.diagnostic.empty()) rep.warnings.push_back(r.diagnostic);
  if (!r.converged()) {
    rep.check("series-converged", 0.0, 0.5, false);
    return;
  }
  rep.result("partial_sum", js_cplx(*r.value));
  double diff = std::abs(*r.value - closed);
  if (ratio) diff /= std::abs(closed);
  rep.result(ratio ? "relative_difference" : "difference", js_num(diff));
  rep.check_le("closed-form-agreement", diff, tol);
}

void cmd_verify_orthogonality(const Opts& o, Report& rep) {
  BasisFamily fam = parse_family(o.family);
  bool two = hcs::is_two_variable(fam);
  int n = o.n > 0 ? o.n : (two ? 4 : 10);
  int order = o.order > 0 ? o.order : (two ? 40 : 80);
  double tol = o.tol > 0 ? o.tol : (two ? 1e-6 : 1e-8);
  BasisSpec spec = make_basis(fam, o.alpha, o.osc_a, o.osc_b);

  rep.param("family", js_str(o.family));
  if (hcs::uses_alpha(fam)) rep.param("alpha", js_num(o.alpha));
  rep.param("n", js_int(n));
  rep.param("order", js_int(order));
  rep.param("tolerance", js_num(tol));

  Eigen::MatrixXcd g =
      hcs::gram_matrix(spec, hcs::natural_gram_weight(fam), n, order, &rep.warnings);
  double off = 0.0, diag = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i == j)
        diag = std::max(diag, std::abs(g(i, j) - 1.0));
      else
        off = std::max(off, std::abs(g(i, j)));
    }
  rep.result("max_off_diagonal", js_num(off));
  rep.result("max_diagonal_deviation", js_num(diag));
  rep.check_le("gram-identity", std::max(off, diag), tol);
}

void cmd_transform_check(const Opts& o, Report& rep) {
  TransformKind kind = parse_transform(o.kind);
  bool two = hcs::transform_is_two_mode(kind);
  int n = o.n > 0 ? o.n : (two ? 4 : 8);
  int order = o.order > 0 ? o.order : (two ? 12 : 80);
  double tol = o.tol > 0 ? o.tol : 1e-5;

  TransformSpec ts{kind, o.osc_a, o.osc_b, {}};
  if (hcs::transform_uses_alpha(kind)) ts.alpha = AlphaParam(o.alpha);
  BasisSpec src = make_basis(hcs::transform_source_family(kind), o.alpha, o.osc_a, o.osc_b);
  BasisSpec tgt = make_basis(hcs::transform_target_family(kind), o.alpha, o.osc_a, o.osc_b);

  rep.param("kind", js_str(o.kind));
  if (hcs::transform_uses_alpha(kind)) rep.param("alpha", js_num(o.alpha));
  rep.param("n", js_int(n));
  rep.param("order", js_int(order));
  rep.param("tolerance", js_num(tol));

  hcs::QuadratureGrid grid = hcs::build_grid(order, 1.0, 1.0);
  Eigen::MatrixXcd m = hcs::transform_matrix(ts, src, tgt, n, grid);
  double unit = identity_defect(m.adjoint() * m);
  rep.result("identity_defect", js_num(identity_defect(m)));
  rep.result("unitarity_defect", js_num(unit));
  rep.check_le("unitarity", unit, tol);
}

void cmd_compose_check(const Opts& o, Report& rep) {
  bool two;
  if (o.pair == "a1b1")
    two = false;
  else if (o.pair == "a2b2")
    two = true;
  else
    throw hcs::domain_error("unknown pair '" + o.pair + "' (a1b1 a2b2)");
  int order = o.order > 0 ? o.order : (two ? 40 : 80);
  double tol = o.tol > 0 ? o.tol : (two ? 1e-6 : 1e-8);

  rep.param("pair", js_str(o.pair));
  rep.param("alpha", js_num(o.alpha));
  rep.param("order", js_int(order));
  rep.param("tolerance", js_num(tol));

  hcs::QuadratureGrid grid = hcs::build_grid(order, 1.0, 1.0);
  double worst = 0.0;
  if (!two) {
    TransformSpec a1{TransformKind::A1, 1.0, 1.0, {}};
    TransformSpec b1{TransformKind::B1, 1.0, 1.0, AlphaParam(o.alpha)};
    TransformSpec c1{TransformKind::C1, 1.0, 1.0, AlphaParam(o.alpha)};
    for (double q : {-0.5, 0.0, 0.5})
      for (double w : {-0.5, 0.0, 0.5})
        worst = std::max(worst, std::abs(hcs::compose_kernels(a1, b1, q, w, grid) -
                                         hcs::sb_kernel(c1, q, w)));
  } else {
    TransformSpec a2{TransformKind::A2, 1.0, 1.0, {}};
    TransformSpec b2{TransformKind::B2, 1.0, 1.0, AlphaParam(o.alpha)};
    TransformSpec c2{TransformKind::C2, 1.0, 1.0, AlphaParam(o.alpha)};
    const double pts[4][4] = {{0.0, 0.0, 0.0, 0.0},
                              {0.4, -0.3, 0.2, 0.1},
                              {0.3, 0.3, -0.2, 0.4},
                              {-0.2, 0.5, 0.3, -0.3}};
    for (const auto& p : pts)
      worst = std::max(worst, std::abs(hcs::compose_kernels(a2, b2, p[0], p[1], p[2], p[3], grid) -
                                       hcs::sb_kernel(c2, p[0], p[1], p[2], p[3])));
  }
  rep.result("max_difference", js_num(worst));
  rep.check_le("composition", worst, tol);
}

void cmd_coherent_state(const Opts& o, Report& rep) {
  AlphaParam ap(o.alpha);
  int n = o.n > 0 ? o.n : 16;
  rep.param("alpha", js_num(o.alpha));
  rep.param("n", js_int(n));
  if (o.normalize) rep.param("normalize", js_bool(true));
  if (!o.z2.empty()) {
    Cplx z1 = parse_complex(o.z), z2 = parse_complex(o.z2);
    echo_point(rep, "z1", z1);
    echo_point(rep, "z2", z2);
    hcs::CoeffMatrix c = hcs::coherent_state(z1, z2, ap, n, o.normalize);
    std::vector<std::string> rows;
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> row;
      for (int j = 0; j < n; ++j) row.push_back(js_cplx(c.coeffs(i, j)));
      rows.push_back(js_arr(row));
    }
    rep.result("coefficients", js_arr(rows));
    rep.result("norm", js_num(c.norm()));
    rep.result("tail_fraction", js_num(c.tail_fraction));
    if (c.truncation_warning)
      rep.warnings.push_back("coefficient tail exceeds 1e-6 of the peak; increase --n");
  } else {
    Cplx z = parse_complex(o.z);
    echo_point(rep, "z", z);
    hcs::FockVector c = hcs::coherent_state(z, ap, n, o.normalize);
    std::vector<std::string> vals;
    for (const Cplx& v : c.coeffs) vals.push_back(js_cplx(v));
    rep.result("coefficients", js_arr(vals));
    rep.result("norm", js_num(c.norm()));
    rep.result("tail_fraction", js_num(c.tail_fraction));
    if (c.truncation_warning)
      rep.warnings.push_back("coefficient tail exceeds 1e-6 of the peak; increase --n");
  }
}

void cmd_eigen_residual(const Opts& o, Report& rep) {
  AlphaParam ap(o.alpha);
  bool two = !o.z2.empty();
  int n = o.n > 0 ? o.n : (two ? 24 : 40);
  double tol = o.tol > 0 ? o.tol : (two ? 1e-7 : 1e-8);
  rep.param("alpha", js_num(o.alpha));
  rep.param("n", js_int(n));
  rep.param("tolerance", js_num(tol));
  if (two) {
    Cplx z1 = parse_complex(o.z1), z2 = parse_complex(o.z2);
    echo_point(rep, "z1", z1);
    echo_point(rep, "z2", z2);
    std::vector<hcs::OperatorMatrix> ops = hcs::bogoliubov_ops(ap, n, 2);
    hcs::CoeffMatrix c = hcs::coherent_state(z1, z2, ap, n);
    double r1 = hcs::annihilation_residual(c, ops[0], z1);
    double r2 = hcs::annihilation_residual(c, ops[1], z2);
    rep.result("mode1_residual", js_num(r1));
    rep.result("mode2_residual", js_num(r2));
    rep.check_le("mode1-residual", r1, tol);
    rep.check_le("mode2-residual", r2, tol);
  } else {
    Cplx z = parse_complex(o.z);
    echo_point(rep, "z", z);
    std::vector<hcs::OperatorMatrix> ops = hcs::bogoliubov_ops(ap, n, 1);
    double r = hcs::annihilation_residual(hcs::coherent_state(z, ap, n), ops[0], z);
    rep.result("residual", js_num(r));
    rep.check_le("annihilation-residual", r, tol);
  }
}

void cmd_squeeze_compare(const Opts& o, Report& rep) {
  Cplx xi = parse_complex(o.xi);
  int n = o.n > 0 ? o.n : 30;
  int block = o.block > 0 ? o.block : (o.arity == 2 ? 4 : 8);
  double tol = o.tol > 0 ? o.tol : 1e-8;
  hcs::ZassenhausLog lf;
  if (o.log_form == "oneminus")
    lf = hcs::ZassenhausLog::OneMinus;
  else if (o.log_form == "oneplus")
    lf = hcs::ZassenhausLog::OnePlus;
  else
    throw hcs::domain_error("unknown log form '" + o.log_form + "' (oneminus oneplus)");

  echo_point(rep, "xi", xi);
  rep.param("n", js_int(n));
  rep.param("arity", js_int(o.arity));
  rep.param("block", js_int(block));
  rep.param("log_form", js_str(o.log_form));
  rep.param("tolerance", js_num(tol));

  Eigen::MatrixXcd e = hcs::squeeze_matrix(xi, n, o.arity, hcs::SqueezeMethod::Exact).m;
  Eigen::MatrixXcd z = hcs::squeeze_matrix(xi, n, o.arity, hcs::SqueezeMethod::Zassenhaus, lf).m;
  double diff = o.arity == 2 ? block_max_2(e - z, n, block)
                             : (e - z).topLeftCorner(block, block).cwiseAbs().maxCoeff();
  rep.result("zeta", js_cplx(hcs::squeeze_zeta(xi)));
  rep.result("max_block_difference", js_num(diff));
  rep.check_le("exact-vs-ordered", diff, tol);
}

void cmd_resolution_check(const Opts& o, Report& rep) {
  AlphaParam ap(o.alpha);
  bool two = o.arity == 2;
  int n = o.n > 0 ? o.n : (two ? 4 : 8);
  int order = o.order > 0 ? o.order : (two ? 40 : 80);
  double tol = o.tol > 0 ? o.tol : (two ? 1e-5 : 1e-6);
  rep.param("alpha", js_num(o.alpha));
  rep.param("n", js_int(n));
  rep.param("order", js_int(order));
  rep.param("arity", js_int(o.arity));
  rep.param("tolerance", js_num(tol));
  double r =
      hcs::resolution_identity_residual(ap, n, hcs::build_grid(order, 1.0, 1.0), o.arity);
  rep.result("residual", js_num(r));
  rep.check_le("resolution-identity", r, tol);
}

void cmd_schmidt(const Opts& o, Report& rep) {
  AlphaParam ap(o.alpha);
  int n = o.n > 0 ? o.n : 12;
  Cplx z1 = parse_complex(o.z1), z2 = parse_complex(o.z2.empty() ? "0" : o.z2);
  rep.param("alpha", js_num(o.alpha));
  echo_point(rep, "z1", z1);
  echo_point(rep, "z2", z2);
  rep.param("n", js_int(n));
  rep.param("rank_tolerance", js_num(o.rank_tol));

  hcs::CoeffMatrix c = hcs::coherent_state(z1, z2, ap, n);
  if (c.truncation_warning)
    rep.warnings.push_back("coefficient tail exceeds 1e-6 of the peak; increase --n");
  hcs::SchmidtResult s = hcs::schmidt(c, o.rank_tol);
  hcs::FactorizationWitness w = hcs::factorization_witness(c, o.rank_tol);
  std::vector<std::string> sv;
  for (double v : s.singular_values) sv.push_back(js_num(v));
  rep.result("singular_values", js_arr(sv));
  rep.result("entropy", js_num(s.entropy));
  rep.result("entropy_log2", js_num(s.entropy_log2));
  rep.result("effective_rank", js_int(s.effective_rank));
  rep.result("factorizable", js_bool(w.factors.has_value()));
  rep.result("factorization_residual", js_num(w.residual));
}

void cmd_entropy_sweep(const Opts& o, Report& rep) {
  if (o.alphas.empty()) throw hcs::domain_error("--alphas is required");
  int n = o.n > 0 ? o.n : 12;
  Cplx z1 = parse_complex(o.z1), z2 = parse_complex(o.z2.empty() ? "0" : o.z2);
  std::string fmt = o.format.empty() ? "csv" : o.format;
  echo_point(rep, "z1", z1);
  echo_point(rep, "z2", z2);
  {
    std::vector<std::string> av;
    for (double a : o.alphas) av.push_back(js_num(a));
    rep.param("alphas", js_arr(av));
  }
  rep.param("n", js_int(n));

  std::vector<hcs::EntropyPoint> curve = hcs::alpha_entropy_sweep(z1, z2, o.alphas, n);
  if (fmt == "csv") {
    std::string out = "alpha,entropy,entropy_log2,tail_fraction,truncation_warning\n";
    for (const hcs::EntropyPoint& p : curve)
      out += js_num(p.alpha) + "," + js_num(p.entropy) + "," + js_num(p.entropy_log2) + "," +
             js_num(p.tail_fraction) + "," + (p.truncation_warning ? "1" : "0") + "\n";
    rep.csv = out;
  } else if (fmt == "json") {
    std::vector<std::string> rows;
    for (const hcs::EntropyPoint& p : curve)
      rows.push_back("{\"alpha\":" + js_num(p.alpha) + ",\"entropy\":" + js_num(p.entropy) +
                     ",\"entropy_log2\":" + js_num(p.entropy_log2) +
                     ",\"tail_fraction\":" + js_num(p.tail_fraction) +
                     ",\"truncation_warning\":" + js_bool(p.truncation_warning) + "}");
    rep.result("curve", js_arr(rows));
  } else {
    throw hcs::domain_error("unknown format '" + fmt + "' (json csv)");
  }
}

void cmd_logconvexity(const Opts& o, Report& rep) {
  hcs::MomentSequence seq;
  if (!o.moments.empty()) {
    std::string item;
    std::stringstream ss(o.moments);
    while (std::getline(ss, item, ',')) seq.values.push_back(num_all(item));
    rep.param("moments", js_str(o.moments));
  } else if (o.factorials >= 2) {
    double f = 1.0;
    for (int k = 0; k <= o.factorials; ++k) {
      seq.values.push_back(f);
      f *= k + 1;
    }
    rep.param("factorials", js_int(o.factorials));
  } else {
    throw hcs::domain_error("provide --moments v0,v1,... or --factorials N (N >= 2)");
  }
  hcs::ConvexityReport r = hcs::log_convexity_check(seq);
  std::vector<std::string> rows;
  for (const hcs::ConvexityViolation& v : r.violations)
    rows.push_back("{\"m\":" + js_int(v.m) + ",\"n\":" + js_int(v.n) +
                   ",\"lhs\":" + js_num(v.lhs) + ",\"rhs\":" + js_num(v.rhs) + "}");
  rep.result("pass", js_bool(r.pass));
  rep.result("violations", js_arr(rows));
  rep.result("note", js_str(r.note));
  rep.check("log-convexity", double(r.violations.size()), 0.0, r.pass);
}

void cmd_limit_scan(const Opts& o, Report& rep) {
  std::vector<double> alphas = o.alphas.empty() ? std::vector<double>{0.9, 0.99, 0.999} : o.alphas;
  int nmax = o.n > 0 ? o.n : 10;
  double tol = o.tol > 0 ? o.tol : 1e-2;
  std::string fmt = o.format.empty() ? "csv" : o.format;
  bool do_hat = o.quantity == "hatkernel" || o.quantity == "both";
  bool do_ladder = o.quantity == "ladder" || o.quantity == "both";
  if (!do_hat && !do_ladder)
    throw hcs::domain_error("unknown quantity '" + o.quantity + "' (hatkernel ladder both)");
  {
    std::vector<std::string> av;
    for (double a : alphas) av.push_back(js_num(a));
    rep.param("alphas", js_arr(av));
  }
  rep.param("quantity", js_str(o.quantity));
  rep.param("tolerance", js_num(tol));

  auto hat_gap = [](double al) {
    TransformSpec a1{TransformKind::A1, 1.0, 1.0, {}};
    TransformSpec c1h{TransformKind::C1hat, 1.0, 1.0, AlphaParam(al)};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        double q = -1.0 + 0.5 * i, t = -1.0 + 0.5 * j;
        worst = std::max(worst, std::abs(hcs::sb_kernel(c1h, q, t) - hcs::sb_kernel(a1, q, t)));
      }
    return worst;
  };
  auto ladder_gap = [nmax](double al) {
    BasisSpec kfam = make_basis(BasisFamily::HolHermiteK1D, al);
    BasisSpec mono = make_basis(BasisFamily::Monomial1D, 0.5);
    double worst = 0.0;
    for (int n = 0; n <= nmax; ++n)
      for (int j = 0; j < 8; ++j) {
        Cplx z = std::polar(1.0, hcs::kPi * j / 4.0);
        worst =
            std::max(worst, std::abs(hcs::basis_eval(kfam, n, z) - hcs::basis_eval(mono, n, z)));
      }
    return worst;
  };

  struct Row {
    std::string quantity;
    double alpha, gap;
  };
  std::vector<Row> rows;
  auto scan = [&](const std::string& name, auto&& gap_fn) {
    std::vector<double> gaps;
    for (double a : alphas) {
      gaps.push_back(gap_fn(a));
      rows.push_back({name, a, gaps.back()});
    }
    if (gaps.size() > 1) {
      double worst_step = -1e300;
      for (std::size_t i = 1; i < gaps.size(); ++i)
        worst_step = std::max(worst_step, gaps[i] - gaps[i - 1]);
      rep.check(name + "-strictly-decreasing", worst_step, 0.0, worst_step < 0.0);
    }
    rep.check_le(name + "-final-gap", gaps.back(), tol);
  };
  if (do_hat) scan("hatkernel", hat_gap);
  if (do_ladder) scan("ladder", ladder_gap);

  if (fmt == "csv") {
    std::string out = "quantity,alpha,gap\n";
    for (const Row& r : rows)
      out += r.quantity + "," + js_num(r.alpha) + "," + js_num(r.gap) + "\n";
    rep.csv = out;
  } else if (fmt == "json") {
    std::vector<std::string> frags;
    for (const Row& r : rows)
      frags.push_back("{\"quantity\":" + js_str(r.quantity) + ",\"alpha\":" + js_num(r.alpha) +
                      ",\"gap\":" + js_num(r.gap) + "}");
    rep.result("curve", js_arr(frags));
  } else {
    throw hcs::domain_error("unknown format '" + fmt + "' (json csv)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hermite-cs: numerical checks for deformed holomorphic-Hermite coherent states.\n"
      "Reports are deterministic JSON (CSV for sweeps); exit 0 = success,\n"
      "1 = a check failed, 2 = usage error."};
  app.fallthrough();
  app.set_config("--config", "", "key=value config file; use a [subcommand] section");

  Opts o;
  std::string out_path;
  bool timing = false;
  app.add_option("--out", out_path, "write the report to this file instead of stdout");
  app.add_flag("--timing", timing, "measure wall_time_s (off by default to keep output stable)");

  auto add_points_1 = [&](CLI::App* sc) {
    sc->add_option("--z", o.z, "complex point, e.g. 0.3+0.2i");
    sc->add_option("--w", o.w, "second complex point");
  };
  auto add_points_2 = [&](CLI::App* sc) {
    sc->add_option("--z1", o.z1, "first-mode point");
    sc->add_option("--z2", o.z2, "second-mode point");
    sc->add_option("--w1", o.w1, "first-mode second point");
    sc->add_option("--w2", o.w2, "second-mode second point");
  };

  CLI::App* eval = app.add_subcommand("eval-basis", "evaluate one basis function");
  eval->add_option("--family", o.family, "basis family")->required();
  eval->add_option("--alpha", o.alpha, "deformation parameter in (0,1)");
  eval->add_option("--m", o.m, "first index (two-variable families)");
  eval->add_option("--n", o.n, "index (or second index)");
  eval->add_option("--osc-a", o.osc_a, "oscillator scale a");
  eval->add_option("--osc-b", o.osc_b, "oscillator scale b");
  eval->add_option("--z", o.z, "evaluation point (z1 for two-variable)");
  eval->add_option("--z2", o.z2, "second evaluation point");

  CLI::App* ker = app.add_subcommand("kernel", "evaluate a closed-form reproducing kernel");
  ker->add_option("--spec", o.kernel, "kernel name")->required();
  ker->add_option("--alpha", o.alpha, "deformation parameter (vanem kernels)");
  add_points_1(ker);
  add_points_2(ker);

  CLI::App* zar = app.add_subcommand("zaremba-compare",
                                     "partial basis sum against the closed kernel");
  zar->add_option("--family", o.family, "basis family")->required();
  zar->add_option("--alpha", o.alpha, "deformation parameter");
  zar->add_option("--terms", o.terms, "number of series terms");
  zar->add_option("--tol", o.tol, "agreement tolerance");
  add_points_1(zar);
  add_points_2(zar);

  CLI::App* orth = app.add_subcommand("verify-orthogonality",
                                      "Gram matrix of a family against the identity");
  orth->add_option("--family", o.family, "basis family")->required();
  orth->add_option("--alpha", o.alpha, "deformation parameter");
  orth->add_option("--n", o.n, "number of basis elements");
  orth->add_option("--order", o.order, "quadrature order per axis");
  orth->add_option("--tol", o.tol, "identity tolerance");
  orth->add_option("--osc-a", o.osc_a, "oscillator scale a");
  orth->add_option("--osc-b", o.osc_b, "oscillator scale b");

  CLI::App* tch = app.add_subcommand("transform-check", "unitarity of a transform matrix");
  tch->add_option("--kind", o.kind, "transform kind")->required();
  tch->add_option("--alpha", o.alpha, "deformation parameter");
  tch->add_option("--n", o.n, "matrix size (per mode)");
  tch->add_option("--order", o.order, "quadrature order");
  tch->add_option("--tol", o.tol, "unitarity tolerance");
  tch->add_option("--osc-a", o.osc_a, "oscillator scale a");
  tch->add_option("--osc-b", o.osc_b, "oscillator scale b");

  CLI::App* cch = app.add_subcommand("compose-check",
                                     "two-step kernel composition against the direct kernel");
  cch->add_option("--pair", o.pair, "a1b1 or a2b2")->required();
  cch->add_option("--alpha", o.alpha, "deformation parameter");
  cch->add_option("--order", o.order, "quadrature order");
  cch->add_option("--tol", o.tol, "agreement tolerance");

  CLI::App* coh = app.add_subcommand("coherent-state", "coefficient expansion of a coherent state");
  coh->add_option("--alpha", o.alpha, "deformation parameter");
  coh->add_option("--z", o.z, "point (one mode)");
  coh->add_option("--z2", o.z2, "second-mode point (switches to two modes, --z is z1)");
  coh->add_option("--n", o.n, "truncation size per mode");
  coh->add_flag("--normalize", o.normalize, "scale to unit norm");

  CLI::App* eig = app.add_subcommand("eigen-residual",
                                     "annihilation residual of a coherent state");
  eig->add_option("--alpha", o.alpha, "deformation parameter");
  eig->add_option("--z", o.z, "point (one mode)");
  eig->add_option("--z1", o.z1, "first-mode point (two modes)");
  eig->add_option("--z2", o.z2, "second-mode point (switches to two modes)");
  eig->add_option("--n", o.n, "truncation size per mode");
  eig->add_option("--tol", o.tol, "residual tolerance");

  CLI::App* sqz = app.add_subcommand("squeeze-compare",
                                     "exact squeeze exponential against the ordered product");
  sqz->add_option("--xi", o.xi, "squeeze parameter (complex)")->required();
  sqz->add_option("--n", o.n, "truncation size per mode");
  sqz->add_option("--arity", o.arity, "1 or 2 modes");
  sqz->add_option("--block", o.block, "interior comparison block (per mode)");
  sqz->add_option("--log-form", o.log_form, "middle-factor constant: oneminus or oneplus");
  sqz->add_option("--tol", o.tol, "agreement tolerance");

  CLI::App* res = app.add_subcommand("resolution-check",
                                     "coherent-state resolution of the identity");
  res->add_option("--alpha", o.alpha, "deformation parameter");
  res->add_option("--n", o.n, "truncation size per mode");
  res->add_option("--order", o.order, "quadrature order per axis");
  res->add_option("--arity", o.arity, "1 or 2 modes");
  res->add_option("--tol", o.tol, "residual tolerance");

  CLI::App* sch = app.add_subcommand("schmidt", "Schmidt spectrum of a two-mode coherent state");
  sch->add_option("--alpha", o.alpha, "deformation parameter");
  sch->add_option("--z1", o.z1, "first-mode point");
  sch->add_option("--z2", o.z2, "second-mode point");
  sch->add_option("--n", o.n, "truncation size per mode");
  sch->add_option("--rank-tol", o.rank_tol, "relative rank tolerance");

  CLI::App* swp = app.add_subcommand("entropy-sweep", "entanglement entropy per alpha");
  swp->add_option("--z1", o.z1, "first-mode point");
  swp->add_option("--z2", o.z2, "second-mode point");
  swp->add_option("--alphas", o.alphas, "comma-separated alpha list")
      ->required()
      ->delimiter(',');
  swp->add_option("--n", o.n, "truncation size per mode");
  swp->add_option("--format", o.format, "csv (default) or json");

  CLI::App* lcx = app.add_subcommand("logconvexity",
                                     "log-convexity verdict for a moment sequence");
  lcx->add_option("--moments", o.moments, "comma-separated values v0,v1,...");
  lcx->add_option("--factorials", o.factorials, "use 0!..N! as the sequence");

  CLI::App* lim = app.add_subcommand("limit-scan", "deformation gaps along an alpha list");
  lim->add_option("--quantity", o.quantity, "hatkernel, ladder, or both");
  lim->add_option("--alphas", o.alphas, "comma-separated alpha list")->delimiter(',');
  lim->add_option("--n", o.n, "maximum ladder index");
  lim->add_option("--tol", o.tol, "final-gap tolerance");
  lim->add_option("--format", o.format, "csv (default) or json");

  for (CLI::App* sc : app.get_subcommands({})) sc->configurable();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    std::fprintf(stderr,
                 "commands: eval-basis kernel zaremba-compare verify-orthogonality "
                 "transform-check compose-check coherent-state eigen-residual "
                 "squeeze-compare resolution-check schmidt entropy-sweep logconvexity "
                 "limit-scan\n");
    return 2;
  }

  Report rep;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (eval->parsed()) rep.command = "eval-basis", cmd_eval_basis(o, rep);
    else if (ker->parsed()) rep.command = "kernel", cmd_kernel(o, rep);
    else if (zar->parsed()) rep.command = "zaremba-compare", cmd_zaremba_compare(o, rep);
    else if (orth->parsed()) rep.command = "verify-orthogonality", cmd_verify_orthogonality(o, rep);
    else if (tch->parsed()) rep.command = "transform-check", cmd_transform_check(o, rep);
    else if (cch->parsed()) rep.command = "compose-check", cmd_compose_check(o, rep);
    else if (coh->parsed()) rep.command = "coherent-state", cmd_coherent_state(o, rep);
    else if (eig->parsed()) rep.command = "eigen-residual", cmd_eigen_residual(o, rep);
    else if (sqz->parsed()) rep.command = "squeeze-compare", cmd_squeeze_compare(o, rep);
    else if (res->parsed()) rep.command = "resolution-check", cmd_resolution_check(o, rep);
    else if (sch->parsed()) rep.command = "schmidt", cmd_schmidt(o, rep);
    else if (swp->parsed()) rep.command = "entropy-sweep", cmd_entropy_sweep(o, rep);
    else if (lcx->parsed()) rep.command = "logconvexity", cmd_logconvexity(o, rep);
    else if (lim->parsed()) rep.command = "limit-scan", cmd_limit_scan(o, rep);
  } catch (const hcs::domain_error& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  double wall = 0.0;
  if (timing)
    wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::string text = rep.render(wall);
  if (text.empty() || text.back() != '\n') text += '\n';
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "cannot open output file %s\n", out_path.c_str());
      return 2;
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
  return rep.all_pass() ? 0 : 1;
}
