#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hermite.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace hcs {

// ---------------------------------------------------------------------------
// Integral kernels connecting three pictures of the oscillator ladder: the
// real line L^2(dq), the Bargmann plane (weight e^{-|z|^2}/pi), and the
// anisotropic plane (weight e^{alpha x^2 - y^2/alpha}).  Every kernel is the
// exponential of a quadratic, so evaluation assembles the full log (prefactor
// included) and exponentiates once.
//
//   A1, A2      line -> Bargmann, psi_n |-> z^n/sqrt(n!)
//   B1, B2      anisotropic plane -> Bargmann, h_n |-> z^n/sqrt(n!)
//   C1, C2      line -> anisotropic plane, psi_n |-> h_n
//   C1hat, C2hat line -> Bargmann, psi_n |-> k_n; tends to A as alpha -> 1
//
// Slot convention: kernels are written K(p, t) with t standing for the
// conjugated variable of the target inner product.  sb_kernel takes the
// unconjugated point and conjugates the trailing half of its arguments
// itself.  Applying a transform substitutes plainly: for the line-source
// kinds (Tf)(z) = int f(q) K(q, t)|_{t=z} dq, and for the B kinds
// (Tf)(z) = int K(z, conj(w)) f(w) W(w) dA(w).
//
// The two-mode C/Chat kernels couple the modes through a q1 q2 cross term,
// B2 through z1 z2 and conj(w1) conj(w2); none of the three factor into
// one-mode kernels.  A2 is exactly the product of two A1 factors.
// ---------------------------------------------------------------------------

enum class TransformKind { A1, B1, C1, C1hat, A2, B2, C2, C2hat };

inline std::string transform_name(TransformKind k) {
  switch (k) {
    case TransformKind::A1: return "a1";
    case TransformKind::B1: return "b1";
    case TransformKind::C1: return "c1";
    case TransformKind::C1hat: return "c1hat";
    case TransformKind::A2: return "a2";
    case TransformKind::B2: return "b2";
    case TransformKind::C2: return "c2";
    case TransformKind::C2hat: return "c2hat";
  }
  throw domain_error("unknown transform kind");
}

inline bool transform_is_two_mode(TransformKind k) {
  return k == TransformKind::A2 || k == TransformKind::B2 || k == TransformKind::C2 ||
         k == TransformKind::C2hat;
}

inline bool transform_uses_alpha(TransformKind k) {
  return k != TransformKind::A1 && k != TransformKind::A2;
}

struct TransformSpec {
  TransformKind kind = TransformKind::A1;
  double osc_a = 1.0;  // oscillator length scale, first mode
  double osc_b = 1.0;  // second mode, two-mode kinds only
  std::optional<AlphaParam> alpha;
};

inline void check_transform_spec(const TransformSpec& spec) {
  require_domain(std::isfinite(spec.osc_a) && spec.osc_a > 0.0,
                 "oscillator scale a must be positive, got " + std::to_string(spec.osc_a));
  if (transform_is_two_mode(spec.kind))
    require_domain(std::isfinite(spec.osc_b) && spec.osc_b > 0.0,
                   "oscillator scale b must be positive, got " + std::to_string(spec.osc_b));
  if (transform_uses_alpha(spec.kind))
    require_domain(spec.alpha.has_value(), "transform " + transform_name(spec.kind) +
                                               " needs an alpha parameter");
  else
    require_domain(!spec.alpha.has_value(), "transform " + transform_name(spec.kind) +
                                                " takes no alpha parameter");
}

// Basis pair each kind carries to each other: source family and target family.
inline BasisFamily transform_source_family(TransformKind k) {
  switch (k) {
    case TransformKind::A1:
    case TransformKind::C1:
    case TransformKind::C1hat: return BasisFamily::OscillatorPsi1D;
    case TransformKind::B1: return BasisFamily::HolHermiteH1D;
    case TransformKind::A2:
    case TransformKind::C2:
    case TransformKind::C2hat: return BasisFamily::OscillatorPsi2D;
    case TransformKind::B2: return BasisFamily::HolHermiteH2D;
  }
  throw domain_error("unknown transform kind");
}

inline BasisFamily transform_target_family(TransformKind k) {
  switch (k) {
    case TransformKind::A1:
    case TransformKind::B1: return BasisFamily::Monomial1D;
    case TransformKind::C1: return BasisFamily::HolHermiteH1D;
    case TransformKind::C1hat: return BasisFamily::HolHermiteK1D;
    case TransformKind::A2:
    case TransformKind::B2: return BasisFamily::Monomial2D;
    case TransformKind::C2: return BasisFamily::HolHermiteH2D;
    case TransformKind::C2hat: return BasisFamily::HolHermiteK2D;
  }
  throw domain_error("unknown transform kind");
}

namespace detail {

// log K = log_pref + a11 p1^2 + a22 p2^2 + a12 p1 p2       (first-slot vars)
//       + b11 t1^2 + b22 t2^2 + b12 t1 t2                  (second-slot vars)
//       + x11 p1 t1 + x22 p2 t2 + x12 p1 t2 + x21 p2 t1    (cross)
// One-mode kinds use only a11, b11, x11.  All coefficients are real.
struct KernelCoeffs {
  double log_pref = 0.0;
  double a11 = 0.0, a22 = 0.0, a12 = 0.0;
  double b11 = 0.0, b22 = 0.0, b12 = 0.0;
  double x11 = 0.0, x22 = 0.0, x12 = 0.0, x21 = 0.0;
};

inline KernelCoeffs kernel_coeffs(const TransformSpec& spec) {
  const double a = spec.osc_a, b = spec.osc_b;
  const double lnpi = std::log(kPi);
  KernelCoeffs c;
  switch (spec.kind) {
    case TransformKind::A1:
      c.log_pref = 0.5 * std::log(a) - 0.25 * lnpi;
      c.a11 = -0.5 * a * a;
      c.b11 = -0.5;
      c.x11 = std::sqrt(2.0) * a;
      return c;
    case TransformKind::B1: {
      AlphaParam ap = *spec.alpha;
      c.log_pref = 0.5 * (std::log1p(-ap.alpha) - lnpi - 0.5 * std::log(ap.alpha));
      c.a11 = -0.5 * ap.eps;
      c.b11 = -0.5;
      c.x11 = std::sqrt(2.0 * ap.eps);
      return c;
    }
    case TransformKind::C1: {
      AlphaParam ap = *spec.alpha;
      double al = ap.alpha;
      c.log_pref = 0.5 * std::log(a) - 0.25 * lnpi +
                   0.5 * std::log1p(-al * al) - 0.5 * std::log(2.0 * kPi) -
                   0.75 * std::log(al);
      c.a11 = -a * a / (2.0 * al);
      c.b11 = -1.0 / (2.0 * al);
      c.x11 = std::sqrt(1.0 - al * al) * a / al;
      return c;
    }
    case TransformKind::C1hat: {
      AlphaParam ap = *spec.alpha;
      double al = ap.alpha;
      c.log_pref = 0.5 * std::log(a) - 0.25 * (lnpi + std::log(al));
      c.a11 = -a * a / (2.0 * al);
      c.b11 = -0.5;
      c.x11 = std::sqrt(2.0 / al) * a;
      return c;
    }
    case TransformKind::A2:
      c.log_pref = 0.5 * (std::log(a) + std::log(b)) - 0.5 * lnpi;
      c.a11 = -0.5 * a * a;
      c.a22 = -0.5 * b * b;
      c.b11 = c.b22 = -0.5;
      c.x11 = std::sqrt(2.0) * a;
      c.x22 = std::sqrt(2.0) * b;
      return c;
    case TransformKind::B2: {
      AlphaParam ap = *spec.alpha;
      c.log_pref = std::log1p(-ap.alpha) - lnpi - 0.5 * std::log(ap.alpha);
      c.a12 = -ap.eps;
      c.b12 = -0.5;
      c.x11 = c.x22 = std::sqrt(ap.eps);
      return c;
    }
    case TransformKind::C2: {
      AlphaParam ap = *spec.alpha;
      double al = ap.alpha;
      c.log_pref = 0.5 * (std::log(a) + std::log(b) - lnpi) + std::log1p(-al * al) -
                   std::log(2.0 * kPi) - std::log(al);
      c.a11 = -(1.0 + al * al) * a * a / (4.0 * al);
      c.a22 = -(1.0 + al * al) * b * b / (4.0 * al);
      c.a12 = -(1.0 - al * al) * a * b / (2.0 * al);
      c.b11 = c.b22 = -(1.0 - al * al) / (8.0 * al);
      c.b12 = -(1.0 + al * al) / (4.0 * al);
      double root = std::sqrt(2.0 * (1.0 - al * al)) / (4.0 * al);
      c.x11 = root * (1.0 + al) * a;
      c.x22 = root * (1.0 + al) * b;
      c.x12 = root * (1.0 - al) * a;
      c.x21 = root * (1.0 - al) * b;
      return c;
    }
    case TransformKind::C2hat: {
      AlphaParam ap = *spec.alpha;
      double al = ap.alpha;
      c.log_pref = 0.5 * (std::log(a) + std::log(b) - lnpi);
      c.a11 = -(1.0 + al * al) * a * a / (4.0 * al);
      c.a22 = -(1.0 + al * al) * b * b / (4.0 * al);
      c.a12 = -(1.0 - al * al) * a * b / (2.0 * al);
      c.b11 = c.b22 = -0.5;
      double root = 1.0 / std::sqrt(2.0 * al);
      c.x11 = root * (1.0 + al) * a;
      c.x22 = root * (1.0 + al) * b;
      c.x12 = root * (1.0 - al) * a;
      c.x21 = root * (1.0 - al) * b;
      return c;
    }
  }
  throw domain_error("unknown transform kind");
}

inline Cplx sb_log1(const KernelCoeffs& c, Cplx p, Cplx t) {
  return c.log_pref + c.a11 * p * p + c.b11 * t * t + c.x11 * p * t;
}

inline Cplx sb_log2(const KernelCoeffs& c, Cplx p1, Cplx p2, Cplx t1, Cplx t2) {
  return c.log_pref + c.a11 * p1 * p1 + c.a22 * p2 * p2 + c.a12 * p1 * p2 +
         c.b11 * t1 * t1 + c.b22 * t2 * t2 + c.b12 * t1 * t2 + c.x11 * p1 * t1 +
         c.x22 * p2 * t2 + c.x12 * p1 * t2 + c.x21 * p2 * t1;
}

inline Cplx checked_exp(Cplx log_value, const char* what) {
  Cplx v = std::exp(log_value);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw numeric_error(std::string(what) + " overflows double range (log magnitude " +
                        std::to_string(log_value.real()) + ")");
  return v;
}

}  // namespace detail

inline Cplx sb_kernel(const TransformSpec& spec, Cplx p, Cplx w) {
  check_transform_spec(spec);
  require_domain(!transform_is_two_mode(spec.kind),
                 "transform " + transform_name(spec.kind) + " takes two-mode arguments");
  detail::KernelCoeffs c = detail::kernel_coeffs(spec);
  return detail::checked_exp(detail::sb_log1(c, p, std::conj(w)), "kernel value");
}

inline Cplx sb_kernel(const TransformSpec& spec, Cplx p1, Cplx p2, Cplx w1, Cplx w2) {
  check_transform_spec(spec);
  require_domain(transform_is_two_mode(spec.kind),
                 "transform " + transform_name(spec.kind) + " takes one-mode arguments");
  detail::KernelCoeffs c = detail::kernel_coeffs(spec);
  return detail::checked_exp(detail::sb_log2(c, p1, p2, std::conj(w1), std::conj(w2)),
                             "kernel value");
}

// ---------------------------------------------------------------------------
// Quadrature application.  transform_matrix(spec, source, target, N, grid)
// returns the matrix of <target_m, T source_n> where T applies the kernel
// against the source family's own measure and the inner product uses the
// target family's.  For the listed pairings the matrix approaches the
// identity as the order grows.  N counts basis elements per mode, so the
// two-mode kinds return an N^2 x N^2 matrix, row-major over (m, n).
//
// The grid argument fixes the per-axis quadrature order; each side's rule is
// rebuilt at that order with scales matched to its own weight, because source
// and target live against different measures.  Line rules cost O(order), so
// their order is floored at 64: the target points the kernel is evaluated at
// sit far out on the plane grids and shift the line Gaussian, and the floor
// keeps the shifted integrand resolved at no measurable cost.
//
// Assembly: basis columns are renormalized per node (largest log factored
// out) and the leftover per-node log, the rule weight, the measure-vs-grid
// compensation, and the kernel's same-side quadratic are summed and
// exponentiated once, so no intermediate overflows.  The kernel's cross
// terms exp(c p t) factor over the real axes of the product rules; the
// resulting per-axis exponential matrices turn the double quadrature into
// dense matrix products.
// ---------------------------------------------------------------------------

namespace detail {

// One side (source or target) of a transform contraction.
struct TransformSide {
  std::vector<Cplx> arg1, arg2;  // basis evaluation arguments (arg2 two-variable only)
  std::vector<Cplx> v1, v2;      // kernel slot values for this side
  std::vector<double> logw;      // ln(rule weight) + (true measure log - grid Gaussian)
  std::vector<int> sub1, sub2;   // component-rule indices, for cross factoring
  std::size_t comp1 = 0, comp2 = 0;
  bool two_var = false;
  // Source-side cross factoring: slot var `axis_var[k]` decomposes additively
  // as sum over axes of axis_unit[k] * axis_vals[k][node].
  int n_axes = 0;
  std::vector<double> axis_vals[2];
  Cplx axis_unit[2];
  int axis_var[2] = {1, 1};
};

inline TransformSide side_line1(const GaussHermiteRule& r) {
  TransformSide s;
  const std::size_t n = r.nodes.size();
  s.comp1 = n;
  for (std::size_t i = 0; i < n; ++i) {
    double q = r.nodes[i];
    s.arg1.push_back(Cplx(q, 0.0));
    s.v1.push_back(Cplx(q, 0.0));
    s.logw.push_back(std::log(r.weights[i]) + r.scale * q * q);
    s.sub1.push_back(int(i));
  }
  s.n_axes = 1;
  s.axis_vals[0] = r.nodes;
  s.axis_unit[0] = 1.0;
  s.axis_var[0] = 1;
  return s;
}

inline TransformSide side_line2(const GaussHermiteRule& r1, const GaussHermiteRule& r2) {
  TransformSide s;
  s.two_var = true;
  s.comp1 = r1.nodes.size();
  s.comp2 = r2.nodes.size();
  for (std::size_t i = 0; i < s.comp1; ++i)
    for (std::size_t j = 0; j < s.comp2; ++j) {
      double q1 = r1.nodes[i], q2 = r2.nodes[j];
      s.arg1.push_back(Cplx(q1, 0.0));
      s.arg2.push_back(Cplx(q2, 0.0));
      s.v1.push_back(Cplx(q1, 0.0));
      s.v2.push_back(Cplx(q2, 0.0));
      s.logw.push_back(std::log(r1.weights[i] * r2.weights[j]) + r1.scale * q1 * q1 +
                       r2.scale * q2 * q2);
      s.sub1.push_back(int(i));
      s.sub2.push_back(int(j));
    }
  s.n_axes = 2;
  s.axis_vals[0] = r1.nodes;
  s.axis_vals[1] = r2.nodes;
  s.axis_unit[0] = s.axis_unit[1] = 1.0;
  s.axis_var[0] = 1;
  s.axis_var[1] = 2;
  return s;
}

// Single plane against the Bargmann measure e^{-|z|^2}/pi.
inline TransformSide side_bargmann_plane(const QuadratureGrid& g, bool conj_slot) {
  TransformSide s;
  s.comp1 = std::size_t(g.order);
  s.comp2 = std::size_t(g.order);
  const double lnpi = std::log(kPi);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x = g.node_x[i], y = g.node_y[i];
    Cplx z(x, y);
    s.arg1.push_back(z);
    s.v1.push_back(conj_slot ? std::conj(z) : z);
    s.logw.push_back(std::log(g.weight[i]) + (g.sx - 1.0) * x * x + (g.sy - 1.0) * y * y -
                     lnpi);
    s.sub1.push_back(int(i / std::size_t(g.order)));
    s.sub2.push_back(int(i % std::size_t(g.order)));
  }
  s.n_axes = 2;
  s.axis_vals[0] = g.ax.nodes;
  s.axis_vals[1] = g.ay.nodes;
  s.axis_unit[0] = 1.0;
  s.axis_unit[1] = conj_slot ? Cplx(0.0, -1.0) : Cplx(0.0, 1.0);
  s.axis_var[0] = s.axis_var[1] = 1;
  return s;
}

// Single plane against the anisotropic measure e^{alpha x^2 - y^2/alpha}.
inline TransformSide side_aniso_plane(const QuadratureGrid& g, double alpha, bool conj_slot) {
  TransformSide s;
  s.comp1 = std::size_t(g.order);
  s.comp2 = std::size_t(g.order);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x = g.node_x[i], y = g.node_y[i];
    Cplx z(x, y);
    s.arg1.push_back(z);
    s.v1.push_back(conj_slot ? std::conj(z) : z);
    s.logw.push_back(std::log(g.weight[i]) + (alpha + g.sx) * x * x +
                     (g.sy - 1.0 / alpha) * y * y);
    s.sub1.push_back(int(i / std::size_t(g.order)));
    s.sub2.push_back(int(i % std::size_t(g.order)));
  }
  s.n_axes = 2;
  s.axis_vals[0] = g.ax.nodes;
  s.axis_vals[1] = g.ay.nodes;
  s.axis_unit[0] = 1.0;
  s.axis_unit[1] = conj_slot ? Cplx(0.0, -1.0) : Cplx(0.0, 1.0);
  s.axis_var[0] = s.axis_var[1] = 1;
  return s;
}

// Two plain Bargmann planes, slots (z1, z2).
inline TransformSide side_bargmann_planes2(const QuadratureGrid& g1, const QuadratureGrid& g2,
                                           bool conj_slot) {
  TransformSide s;
  s.two_var = true;
  s.comp1 = g1.size();
  s.comp2 = g2.size();
  const double lnpi = std::log(kPi);
  for (std::size_t i = 0; i < g1.size(); ++i)
    for (std::size_t j = 0; j < g2.size(); ++j) {
      Cplx z1(g1.node_x[i], g1.node_y[i]);
      Cplx z2(g2.node_x[j], g2.node_y[j]);
      s.arg1.push_back(z1);
      s.arg2.push_back(z2);
      s.v1.push_back(conj_slot ? std::conj(z1) : z1);
      s.v2.push_back(conj_slot ? std::conj(z2) : z2);
      s.logw.push_back(std::log(g1.weight[i] * g2.weight[j]) +
                       (g1.sx - 1.0) * g1.node_x[i] * g1.node_x[i] +
                       (g1.sy - 1.0) * g1.node_y[i] * g1.node_y[i] +
                       (g2.sx - 1.0) * g2.node_x[j] * g2.node_x[j] +
                       (g2.sy - 1.0) * g2.node_y[j] * g2.node_y[j] - 2.0 * lnpi);
      s.sub1.push_back(int(i));
      s.sub2.push_back(int(j));
    }
  return s;
}

// Rotated Bargmann planes p = (z1+z2)/sqrt(2), q = (z1-z2)/sqrt(2), which
// diagonalize the e^{2 eps Re(z1 z2)} growth of the two-mode k family.
inline TransformSide side_bargmann_rotated(const QuadratureGrid& gp, const QuadratureGrid& gq) {
  TransformSide s;
  s.two_var = true;
  s.comp1 = gp.size();
  s.comp2 = gq.size();
  const double lnpi = std::log(kPi);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < gp.size(); ++i)
    for (std::size_t j = 0; j < gq.size(); ++j) {
      Cplx p(gp.node_x[i], gp.node_y[i]);
      Cplx q(gq.node_x[j], gq.node_y[j]);
      Cplx z1 = (p + q) * inv_sqrt2;
      Cplx z2 = (p - q) * inv_sqrt2;
      s.arg1.push_back(z1);
      s.arg2.push_back(z2);
      s.v1.push_back(z1);
      s.v2.push_back(z2);
      s.logw.push_back(std::log(gp.weight[i] * gq.weight[j]) +
                       (gp.sx - 1.0) * gp.node_x[i] * gp.node_x[i] +
                       (gp.sy - 1.0) * gp.node_y[i] * gp.node_y[i] +
                       (gq.sx - 1.0) * gq.node_x[j] * gq.node_x[j] +
                       (gq.sy - 1.0) * gq.node_y[j] * gq.node_y[j] - 2.0 * lnpi);
      s.sub1.push_back(int(i));
      s.sub2.push_back(int(j));
    }
  return s;
}

// (u, v) planes of the two-variable h family: z1 = u - v, z2 = conj(u + v),
// measure e^{alpha|u|^2 - |v|^2/alpha} d^2u d^2v.
inline TransformSide side_h2_planes(const QuadratureGrid& gu, const QuadratureGrid& gv,
                                    double alpha, bool conj_slot) {
  TransformSide s;
  s.two_var = true;
  s.comp1 = gu.size();
  s.comp2 = gv.size();
  for (std::size_t i = 0; i < gu.size(); ++i)
    for (std::size_t j = 0; j < gv.size(); ++j) {
      Cplx u(gu.node_x[i], gu.node_y[i]);
      Cplx v(gv.node_x[j], gv.node_y[j]);
      Cplx z1 = u - v;
      Cplx z2 = std::conj(u + v);
      s.arg1.push_back(z1);
      s.arg2.push_back(z2);
      s.v1.push_back(conj_slot ? std::conj(z1) : z1);
      s.v2.push_back(conj_slot ? std::conj(z2) : z2);
      s.logw.push_back(std::log(gu.weight[i] * gv.weight[j]) +
                       (alpha + gu.sx) * gu.node_x[i] * gu.node_x[i] +
                       (alpha + gu.sy) * gu.node_y[i] * gu.node_y[i] +
                       (gv.sx - 1.0 / alpha) * gv.node_x[j] * gv.node_x[j] +
                       (gv.sy - 1.0 / alpha) * gv.node_y[j] * gv.node_y[j]);
      s.sub1.push_back(int(i));
      s.sub2.push_back(int(j));
    }
  return s;
}

// Cross-coefficient matrix oriented (source var, target var).  x12 multiplies
// p1 t2, so when the source owns the first slot it couples source var 1 with
// target var 2; when the source owns the second slot the roles swap.
struct CrossMatrix {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

inline CrossMatrix cross_matrix(const KernelCoeffs& c, bool source_owns_slot1) {
  CrossMatrix x;
  if (source_owns_slot1) {
    x.m[0][0] = c.x11;
    x.m[0][1] = c.x12;
    x.m[1][0] = c.x21;
    x.m[1][1] = c.x22;
  } else {
    x.m[0][0] = c.x11;
    x.m[0][1] = c.x21;
    x.m[1][0] = c.x12;
    x.m[1][1] = c.x22;
  }
  return x;
}

// Same-side quadratic c1 v1^2 + c2 v2^2 + c12 v1 v2 for whichever slot this
// side owns.
inline Cplx side_quadratic(const KernelCoeffs& c, bool owns_slot1, Cplx v1, Cplx v2) {
  if (owns_slot1) return c.a11 * v1 * v1 + c.a22 * v2 * v2 + c.a12 * v1 * v2;
  return c.b11 * v1 * v1 + c.b22 * v2 * v2 + c.b12 * v1 * v2;
}

// Basis values at every node of a side, largest log per node factored out:
// out(i, n) holds the normalized mantissa and logw(i) the combined complex
// log (leftover basis log + rule weight + measure compensation + the
// kernel's same-side quadratic).  Exponentiation is left to the caller so
// cross-factor shifts can be folded in first.
inline void side_values(const TransformSide& side, const BasisSpec& spec, int N,
                        const KernelCoeffs& kc, bool owns_slot1, Eigen::MatrixXcd& out,
                        Eigen::VectorXcd& logw) {
  const std::size_t npts = side.arg1.size();
  const int ncols = side.two_var ? N * N : N;
  out.resize(Eigen::Index(npts), ncols);
  logw.resize(Eigen::Index(npts));
  std::vector<ScaledValue> stack;
  for (std::size_t i = 0; i < npts; ++i) {
    if (side.two_var)
      basis_stack(spec, N, side.arg1[i], side.arg2[i], stack);
    else
      basis_stack(spec, N, side.arg1[i], stack);
    double top = 0.0;
    bool seen = false;
    for (int n = 0; n < ncols; ++n) {
      const ScaledValue& v = stack[std::size_t(n)];
      if (v.mantissa != Cplx(0.0, 0.0) && (!seen || v.log_scale > top)) {
        top = v.log_scale;
        seen = true;
      }
    }
    for (int n = 0; n < ncols; ++n) {
      const ScaledValue& v = stack[std::size_t(n)];
      out(Eigen::Index(i), n) = v.mantissa * std::exp(v.log_scale - top);
    }
    Cplx quad = side_quadratic(kc, owns_slot1,
                               side.v1[i], side.two_var ? side.v2[i] : Cplx(0.0, 0.0));
    logw(Eigen::Index(i)) = quad + (top + side.logw[i]);
  }
}

// Streaming contraction Tv = K * Sw with K produced row-blockwise.
template <class KFn>
Eigen::MatrixXcd contract_rows(std::size_t n_t, std::size_t n_s, const Eigen::MatrixXcd& Sw,
                               const KFn& kij) {
  using RowMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXcd Tv(Eigen::Index(n_t), Sw.cols());
  constexpr std::size_t kBlock = 96;
  RowMat K(Eigen::Index(std::min(kBlock, n_t)), Eigen::Index(n_s));
  for (std::size_t lo = 0; lo < n_t; lo += kBlock) {
    const std::size_t rows = std::min(kBlock, n_t - lo);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < n_s; ++j) K(Eigen::Index(r), Eigen::Index(j)) = kij(lo + r, j);
    Tv.middleRows(Eigen::Index(lo), Eigen::Index(rows)) =
        K.topRows(Eigen::Index(rows)) * Sw;
  }
  return Tv;
}

// Source cross factoring: the kernel's cross part at (target i, source j) is
// the product over source axes of exp(unit * node * tau), tau the composite
// target coupling of that axis's slot var.
inline Eigen::MatrixXcd transform_assemble_axes(const KernelCoeffs& kc, bool source_owns_slot1,
                                                const TransformSide& src, const BasisSpec& sspec,
                                                const TransformSide& tgt, const BasisSpec& tspec,
                                                int N) {
  Eigen::MatrixXcd Sw, Tn;
  Eigen::VectorXcd clog, dlog;
  side_values(src, sspec, N, kc, source_owns_slot1, Sw, clog);
  side_values(tgt, tspec, N, kc, !source_owns_slot1, Tn, dlog);
  const std::size_t n_s = src.arg1.size(), n_t = tgt.arg1.size();
  for (std::size_t j = 0; j < n_s; ++j)
    Sw.row(Eigen::Index(j)) *= checked_exp(clog(Eigen::Index(j)), "transform source weight");
  CrossMatrix X = cross_matrix(kc, source_owns_slot1);
  // Composite couplings tau_var(i) = sum_t X(var, t) tvar_t(i).
  std::vector<Cplx> tau[2];
  for (int v = 0; v < 2; ++v) tau[v].resize(n_t);
  for (std::size_t i = 0; i < n_t; ++i) {
    Cplx t1 = tgt.v1[i], t2 = tgt.two_var ? tgt.v2[i] : Cplx(0.0, 0.0);
    tau[0][i] = X.m[0][0] * t1 + X.m[0][1] * t2;
    tau[1][i] = X.m[1][0] * t1 + X.m[1][1] * t2;
  }
  // Per-axis factor matrices, shifted per target point so no entry exceeds
  // unit magnitude; the shift moves into the target log weight.
  Eigen::MatrixXcd E[2];
  for (int k = 0; k < src.n_axes; ++k) {
    const auto& vals = src.axis_vals[k];
    const Cplx unit = src.axis_unit[k];
    const auto& t = tau[src.axis_var[k] - 1];
    E[k].resize(Eigen::Index(vals.size()), Eigen::Index(n_t));
    for (std::size_t i = 0; i < n_t; ++i) {
      Cplx base = unit * t[i];
      double shift = 0.0;
      for (double v : vals) shift = std::max(shift, base.real() * v);
      for (std::size_t a = 0; a < vals.size(); ++a)
        E[k](Eigen::Index(a), Eigen::Index(i)) = std::exp(base * vals[a] - shift);
      dlog(Eigen::Index(i)) += shift;
    }
  }
  Eigen::VectorXcd dw;
  dw.resize(Eigen::Index(n_t));
  for (std::size_t i = 0; i < n_t; ++i)
    dw(Eigen::Index(i)) = checked_exp(dlog(Eigen::Index(i)), "transform target weight");
  Eigen::MatrixXcd Tv;
  if (src.n_axes == 1) {
    const Eigen::MatrixXcd& E0 = E[0];
    Tv = contract_rows(n_t, n_s, Sw, [&](std::size_t i, std::size_t j) {
      return E0(src.sub1[j], Eigen::Index(i));
    });
  } else {
    const Eigen::MatrixXcd& E0 = E[0];
    const Eigen::MatrixXcd& E1 = E[1];
    Tv = contract_rows(n_t, n_s, Sw, [&](std::size_t i, std::size_t j) {
      return E0(src.sub1[j], Eigen::Index(i)) * E1(src.sub2[j], Eigen::Index(i));
    });
  }
  Eigen::MatrixXcd M = Tn.adjoint() * (dw.asDiagonal() * Tv);
  return std::exp(kc.log_pref) * M;
}

// Target cross factoring for the plane-source two-mode kind: target slot
// values depend on one target plane each, so exp factors as
// E1(j, plane-1 node) E2(j, plane-2 node).
inline Eigen::MatrixXcd transform_assemble_pair(const KernelCoeffs& kc,
                                                const TransformSide& src, const BasisSpec& sspec,
                                                const TransformSide& tgt, const BasisSpec& tspec,
                                                int N, const QuadratureGrid& tg1,
                                                const QuadratureGrid& tg2) {
  Eigen::MatrixXcd Sw, Tn;
  Eigen::VectorXcd clog, dlog;
  side_values(src, sspec, N, kc, false, Sw, clog);
  side_values(tgt, tspec, N, kc, true, Tn, dlog);
  const std::size_t n_s = src.arg1.size(), n_t = tgt.arg1.size();
  for (std::size_t j = 0; j < n_s; ++j)
    Sw.row(Eigen::Index(j)) *= checked_exp(clog(Eigen::Index(j)), "transform source weight");
  CrossMatrix X = cross_matrix(kc, false);
  // Composite source couplings sigma_l(j), one per target plane, and the
  // factor matrices exp(z_l sigma_l) shifted per target node to unit size.
  std::vector<Cplx> sig1(n_s), sig2(n_s);
  for (std::size_t j = 0; j < n_s; ++j) {
    sig1[j] = X.m[0][0] * src.v1[j] + X.m[1][0] * src.v2[j];
    sig2[j] = X.m[0][1] * src.v1[j] + X.m[1][1] * src.v2[j];
  }
  Eigen::MatrixXcd E1(Eigen::Index(n_s), Eigen::Index(tg1.size()));
  Eigen::MatrixXcd E2(Eigen::Index(n_s), Eigen::Index(tg2.size()));
  std::vector<double> shift1(tg1.size(), 0.0), shift2(tg2.size(), 0.0);
  for (std::size_t c = 0; c < tg1.size(); ++c) {
    Cplx z1(tg1.node_x[c], tg1.node_y[c]);
    double m = 0.0;
    for (std::size_t j = 0; j < n_s; ++j) m = std::max(m, (z1 * sig1[j]).real());
    shift1[c] = m;
    for (std::size_t j = 0; j < n_s; ++j)
      E1(Eigen::Index(j), Eigen::Index(c)) = std::exp(z1 * sig1[j] - m);
  }
  for (std::size_t c = 0; c < tg2.size(); ++c) {
    Cplx z2(tg2.node_x[c], tg2.node_y[c]);
    double m = 0.0;
    for (std::size_t j = 0; j < n_s; ++j) m = std::max(m, (z2 * sig2[j]).real());
    shift2[c] = m;
    for (std::size_t j = 0; j < n_s; ++j)
      E2(Eigen::Index(j), Eigen::Index(c)) = std::exp(z2 * sig2[j] - m);
  }
  Eigen::VectorXcd dw;
  dw.resize(Eigen::Index(n_t));
  for (std::size_t i = 0; i < n_t; ++i)
    dw(Eigen::Index(i)) = checked_exp(
        dlog(Eigen::Index(i)) + (shift1[std::size_t(tgt.sub1[i])] +
                                 shift2[std::size_t(tgt.sub2[i])]),
        "transform target weight");
  Eigen::MatrixXcd Tv = contract_rows(n_t, n_s, Sw, [&](std::size_t i, std::size_t j) {
    return E1(Eigen::Index(j), tgt.sub1[i]) * E2(Eigen::Index(j), tgt.sub2[i]);
  });
  Eigen::MatrixXcd M = Tn.adjoint() * (dw.asDiagonal() * Tv);
  return std::exp(kc.log_pref) * M;
}

inline void check_transform_basis(const TransformSpec& spec, const BasisSpec& b,
                                  BasisFamily expected, const char* role) {
  if (b.family != expected)
    throw domain_error("transform " + transform_name(spec.kind) + " carries " +
                       family_name(expected) + " as its " + role + ", got " +
                       family_name(b.family));
  if (uses_alpha(expected) && b.alpha != spec.alpha->alpha)
    throw domain_error(std::string("transform and ") + role +
                       " basis disagree on alpha: " + std::to_string(spec.alpha->alpha) +
                       " vs " + std::to_string(b.alpha));
  if (expected == BasisFamily::OscillatorPsi1D || expected == BasisFamily::OscillatorPsi2D) {
    if (b.osc_a != spec.osc_a)
      throw domain_error(std::string("transform and ") + role +
                         " basis disagree on the oscillator scale a");
    if (expected == BasisFamily::OscillatorPsi2D && b.osc_b != spec.osc_b)
      throw domain_error(std::string("transform and ") + role +
                         " basis disagree on the oscillator scale b");
  }
}

}  // namespace detail

inline Eigen::MatrixXcd transform_matrix(const TransformSpec& spec, const BasisSpec& source,
                                         const BasisSpec& target, int N,
                                         const QuadratureGrid& grid) {
  check_transform_spec(spec);
  require_domain(N >= 1, "transform_matrix: N must be >= 1, got " + std::to_string(N));
  detail::check_transform_basis(spec, source, transform_source_family(spec.kind), "source");
  detail::check_transform_basis(spec, target, transform_target_family(spec.kind), "target");
  const int order = grid.order;
  const int line_order = std::max(order, 64);
  const double a = spec.osc_a, b = spec.osc_b;
  detail::KernelCoeffs kc = detail::kernel_coeffs(spec);
  using detail::TransformSide;
  switch (spec.kind) {
    case TransformKind::A1: {
      TransformSide src = detail::side_line1(gauss_hermite(line_order, a * a));
      TransformSide tgt = detail::side_bargmann_plane(build_grid(order, 1.0, 1.0), false);
      return detail::transform_assemble_axes(kc, true, src, source, tgt, target, N);
    }
    case TransformKind::B1: {
      AlphaParam ap = *spec.alpha;
      TransformSide src = detail::side_aniso_plane(
          build_grid(order, 1.0 - ap.alpha, 1.0 / ap.alpha - 1.0), ap.alpha, true);
      TransformSide tgt = detail::side_bargmann_plane(build_grid(order, 1.0, 1.0), false);
      return detail::transform_assemble_axes(kc, false, src, source, tgt, target, N);
    }
    case TransformKind::C1: {
      AlphaParam ap = *spec.alpha;
      double sq = a * a * (1.0 + ap.alpha) / (2.0 * ap.alpha);
      TransformSide src = detail::side_line1(gauss_hermite(line_order, sq));
      TransformSide tgt = detail::side_aniso_plane(
          build_grid(order, 1.0 - ap.alpha, 1.0 / ap.alpha - 1.0), ap.alpha, false);
      return detail::transform_assemble_axes(kc, true, src, source, tgt, target, N);
    }
    case TransformKind::C1hat: {
      AlphaParam ap = *spec.alpha;
      double sq = a * a * (1.0 + ap.alpha) / (2.0 * ap.alpha);
      TransformSide src = detail::side_line1(gauss_hermite(line_order, sq));
      TransformSide tgt = detail::side_bargmann_plane(
          build_grid(order, 1.0 - ap.eps, 1.0 + ap.eps), false);
      return detail::transform_assemble_axes(kc, true, src, source, tgt, target, N);
    }
    case TransformKind::A2: {
      TransformSide src = detail::side_line2(gauss_hermite(line_order, a * a),
                                             gauss_hermite(line_order, b * b));
      QuadratureGrid g = build_grid(order, 1.0, 1.0);
      TransformSide tgt = detail::side_bargmann_planes2(g, g, false);
      return detail::transform_assemble_axes(kc, true, src, source, tgt, target, N);
    }
    case TransformKind::B2: {
      AlphaParam ap = *spec.alpha;
      double su = 1.0 - ap.alpha, sv = (1.0 - ap.alpha) / ap.alpha;
      TransformSide src = detail::side_h2_planes(build_grid(order, su, su),
                                                 build_grid(order, sv, sv), ap.alpha, true);
      QuadratureGrid g = build_grid(order, 1.0, 1.0);
      TransformSide tgt = detail::side_bargmann_planes2(g, g, false);
      return detail::transform_assemble_pair(kc, src, source, tgt, target, N, g, g);
    }
    case TransformKind::C2: {
      AlphaParam ap = *spec.alpha;
      double sq = (1.0 + ap.alpha) * (1.0 + ap.alpha) / (4.0 * ap.alpha);
      TransformSide src = detail::side_line2(gauss_hermite(line_order, a * a * sq),
                                             gauss_hermite(line_order, b * b * sq));
      double su = 1.0 - ap.alpha, sv = (1.0 - ap.alpha) / ap.alpha;
      TransformSide tgt = detail::side_h2_planes(build_grid(order, su, su),
                                                 build_grid(order, sv, sv), ap.alpha, false);
      return detail::transform_assemble_axes(kc, true, src, source, tgt, target, N);
    }
    case TransformKind::C2hat: {
      AlphaParam ap = *spec.alpha;
      double sq = (1.0 + ap.alpha) * (1.0 + ap.alpha) / (4.0 * ap.alpha);
      TransformSide src = detail::side_line2(gauss_hermite(line_order, a * a * sq),
                                             gauss_hermite(line_order, b * b * sq));
      TransformSide tgt = detail::side_bargmann_rotated(
          build_grid(order, 1.0 - ap.eps, 1.0 + ap.eps),
          build_grid(order, 1.0 + ap.eps, 1.0 - ap.eps));
      return detail::transform_assemble_axes(kc, true, src, source, tgt, target, N);
    }
  }
  throw domain_error("unknown transform kind");
}

// ---------------------------------------------------------------------------
// Kernel composition over the Bargmann plane:
//   (A o B)(q, conj(w)) = int A(q, conj(z)) B(z, conj(w)) e^{-|z|^2}/pi dA(z)
// collapses to the C kernel of the same parameters.  Only the A-with-B pair
// composes; the grid carries the intermediate plane (its scale difference
// from the Bargmann Gaussian is compensated per node).
// ---------------------------------------------------------------------------

inline Cplx compose_kernels(const TransformSpec& k1, const TransformSpec& k2, Cplx q, Cplx w,
                            const QuadratureGrid& grid) {
  check_transform_spec(k1);
  check_transform_spec(k2);
  require_domain(k1.kind == TransformKind::A1 && k2.kind == TransformKind::B1,
                 "one-mode composition is defined for the a1, b1 pair only, got " +
                     transform_name(k1.kind) + ", " + transform_name(k2.kind));
  detail::KernelCoeffs ca = detail::kernel_coeffs(k1);
  detail::KernelCoeffs cb = detail::kernel_coeffs(k2);
  const double lnpi = std::log(kPi);
  const Cplx wbar = std::conj(w);
  return integrate_plane(
      [&](Cplx z) {
        double x = z.real(), y = z.imag();
        Cplx lg = detail::sb_log1(ca, q, std::conj(z)) + detail::sb_log1(cb, z, wbar) +
                  ((grid.sx - 1.0) * x * x + (grid.sy - 1.0) * y * y - lnpi);
        return std::exp(lg);
      },
      grid);
}

inline Cplx compose_kernels(const TransformSpec& k1, const TransformSpec& k2, Cplx q1, Cplx q2,
                            Cplx w1, Cplx w2, const QuadratureGrid& grid) {
  check_transform_spec(k1);
  check_transform_spec(k2);
  require_domain(k1.kind == TransformKind::A2 && k2.kind == TransformKind::B2,
                 "two-mode composition is defined for the a2, b2 pair only, got " +
                     transform_name(k1.kind) + ", " + transform_name(k2.kind));
  detail::KernelCoeffs ca = detail::kernel_coeffs(k1);
  detail::KernelCoeffs cb = detail::kernel_coeffs(k2);
  const double lnpi = std::log(kPi);
  const Cplx w1bar = std::conj(w1), w2bar = std::conj(w2);
  return integrate_plane2(
      [&](Cplx za, Cplx zb) {
        double comp = (grid.sx - 1.0) * (za.real() * za.real() + zb.real() * zb.real()) +
                      (grid.sy - 1.0) * (za.imag() * za.imag() + zb.imag() * zb.imag());
        Cplx lg = detail::sb_log2(ca, q1, q2, std::conj(za), std::conj(zb)) +
                  detail::sb_log2(cb, za, zb, w1bar, w2bar) + (comp - 2.0 * lnpi);
        return std::exp(lg);
      },
      grid, grid);
}

}  // namespace hcs
