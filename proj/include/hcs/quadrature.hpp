#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hermite.hpp"
#include "reduce.hpp"
#include "types.hpp"

namespace hcs {

// ---------------------------------------------------------------------------
// Gauss-Hermite rules.  A rule of a given order against weight exp(-s t^2)
// integrates polynomials through degree 2*order - 1 exactly; nodes come from
// the symmetric tridiagonal Jacobi matrix (diagonal 0, off-diagonal
// sqrt(k/2)), weights from the squared first eigenvector components times
// sqrt(pi).  The +-node symmetry is restored exactly after the eigensolve so
// odd integrands cancel to the last bit.
// ---------------------------------------------------------------------------

struct GaussHermiteRule {
  int order = 0;
  double scale = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Orthonormal Hermite values p_0(t) .. p_n(t) against exp(-t^2) dt, so
// p_0 = pi^{-1/4} and t p_k = sqrt((k+1)/2) p_{k+1} + sqrt(k/2) p_{k-1}.
// Magnitudes stay within double range for t^2 < ~700, far beyond the node
// span of any order in scope.
inline void hermite_orthonormal(int n, double t, std::vector<double>& p) {
  p.resize(std::size_t(n) + 1);
  p[0] = std::pow(kPi, -0.25);
  if (n == 0) return;
  p[1] = std::sqrt(2.0) * t * p[0];
  for (int k = 1; k < n; ++k)
    p[std::size_t(k) + 1] = (t * p[std::size_t(k)] -
                             std::sqrt(0.5 * double(k)) * p[std::size_t(k) - 1]) /
                            std::sqrt(0.5 * double(k + 1));
}

}  // namespace detail

inline GaussHermiteRule gauss_hermite(int order, double scale) {
  require_domain(order >= 2, "quadrature order must be >= 2, got " + std::to_string(order));
  require_domain(scale > 0.0, "Gaussian weight scale must be positive, got " +
                                  std::to_string(scale));
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numeric_error("tridiagonal eigensolve failed for quadrature order " +
                        std::to_string(order));
  GaussHermiteRule rule;
  rule.order = order;
  rule.scale = scale;
  rule.nodes.resize(std::size_t(order));
  rule.weights.resize(std::size_t(order));
  std::vector<double> p;
  for (int i = 0; i < order; ++i) {
    // Newton-polish the eigenvalue on p_order (its roots are the nodes;
    // p_order' = sqrt(2 order) p_{order-1}), then take the Christoffel weight
    // 1 / sum_{k<order} p_k^2.  Unlike the squared first eigenvector
    // component, this gives every weight full relative accuracy, which the
    // top-degree exactness of the rule depends on.
    double t = es.eigenvalues()(i);
    for (int pass = 0; pass < 2; ++pass) {
      detail::hermite_orthonormal(order, t, p);
      t -= p[std::size_t(order)] /
           (std::sqrt(2.0 * double(order)) * p[std::size_t(order) - 1]);
    }
    detail::hermite_orthonormal(order - 1, t, p);
    double sum = 0.0;
    for (int k = 0; k < order; ++k) sum += p[std::size_t(k)] * p[std::size_t(k)];
    rule.nodes[std::size_t(i)] = t;
    rule.weights[std::size_t(i)] = 1.0 / sum;
  }
  // Nodes arrive sorted; pair them off so x_{n-1-i} = -x_i holds exactly and
  // paired weights agree exactly, making odd integrands cancel bitwise.
  for (int i = 0; i < order / 2; ++i) {
    int j = order - 1 - i;
    double x = 0.5 * (rule.nodes[std::size_t(j)] - rule.nodes[std::size_t(i)]);
    rule.nodes[std::size_t(i)] = -x;
    rule.nodes[std::size_t(j)] = x;
    double w = 0.5 * (rule.weights[std::size_t(i)] + rule.weights[std::size_t(j)]);
    rule.weights[std::size_t(i)] = w;
    rule.weights[std::size_t(j)] = w;
  }
  if (order % 2 == 1) rule.nodes[std::size_t(order / 2)] = 0.0;
  // Rescale from weight exp(-t^2) to exp(-scale x^2): x = t/sqrt(scale).
  double r = 1.0 / std::sqrt(scale);
  for (auto& x : rule.nodes) x *= r;
  for (auto& w : rule.weights) w *= r;
  return rule;
}

// ---------------------------------------------------------------------------
// Product grid over the plane, weight exp(-sx x^2 - sy y^2).
// ---------------------------------------------------------------------------

struct QuadratureGrid {
  int order = 0;
  double sx = 1.0, sy = 1.0;
  GaussHermiteRule ax, ay;
  // Flattened product rule, row-major over (ix, iy).
  std::vector<double> node_x, node_y, weight;

  std::size_t size() const { return weight.size(); }
};

inline QuadratureGrid build_grid(int order, double sx, double sy) {
  QuadratureGrid g;
  g.order = order;
  g.sx = sx;
  g.sy = sy;
  g.ax = gauss_hermite(order, sx);
  g.ay = gauss_hermite(order, sy);
  std::size_t total = std::size_t(order) * std::size_t(order);
  g.node_x.resize(total);
  g.node_y.resize(total);
  g.weight.resize(total);
  for (int ix = 0; ix < order; ++ix)
    for (int iy = 0; iy < order; ++iy) {
      std::size_t i = std::size_t(ix) * std::size_t(order) + std::size_t(iy);
      g.node_x[i] = g.ax.nodes[std::size_t(ix)];
      g.node_y[i] = g.ay.nodes[std::size_t(iy)];
      g.weight[i] = g.ax.weights[std::size_t(ix)] * g.ay.weights[std::size_t(iy)];
    }
  return g;
}

namespace detail {

inline void check_node_value(Cplx v, double x, double y, std::size_t i) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw numeric_error("integrand is not finite at node (" + std::to_string(x) + ", " +
                        std::to_string(y) + "), flat index " + std::to_string(i));
}

}  // namespace detail

// Sum of w_i f(z_i) over the grid.  The Gaussian weight the grid was built
// with is NOT applied here; the caller folds the target integrand's Gaussian
// either into f or into the grid scales (and compensates the difference).
// f must be pure: nodes are summed by a deterministic pairwise tree that may
// evaluate f concurrently.
template <class F>
Cplx integrate_plane(const F& f, const QuadratureGrid& grid) {
  return tree_sum<Cplx>(grid.size(), [&](std::size_t i) {
    Cplx v = f(Cplx(grid.node_x[i], grid.node_y[i]));
    detail::check_node_value(v, grid.node_x[i], grid.node_y[i], i);
    return grid.weight[i] * v;
  });
}

// Two-plane product rule: sum of w_i w_j f(z_i, z_j).
template <class F>
Cplx integrate_plane2(const F& f, const QuadratureGrid& g1, const QuadratureGrid& g2) {
  std::size_t n2 = g2.size();
  return tree_sum<Cplx>(g1.size() * n2, [&](std::size_t k) {
    std::size_t i = k / n2, j = k % n2;
    Cplx v = f(Cplx(g1.node_x[i], g1.node_y[i]), Cplx(g2.node_x[j], g2.node_y[j]));
    detail::check_node_value(v, g1.node_x[i], g1.node_y[i], k);
    return g1.weight[i] * g2.weight[j] * v;
  });
}

// ---------------------------------------------------------------------------
// Gram matrices.  Each family is paired with the measure it is orthonormal
// under; asking for any other pairing is an argument error.
//
//   Monomial1D, HolHermiteK1D   Bargmann1D   e^{-|z|^2}/pi dx dy
//   HolHermiteH1D               VanEM1D      e^{alpha x^2 - y^2/alpha} dx dy
//   OscillatorPsi1D             Line1D       dq on the real line
//   Monomial2D, HolHermiteK2D   Bargmann2D   product of two Bargmann planes
//   HolHermiteH2D               Hermite2D    anisotropic two-plane weight in
//                                            the variables u = (conj(z2)+z1)/2,
//                                            v = (conj(z2)-z1)/2, measure
//                                            d^2u d^2v
//   OscillatorPsi2D             Line2D       dq1 dq2
//
// The quadrature variables for the two-plane weights are NOT (z1, z2):
//   Bargmann2D integrates over the rotated planes p = (z1+z2)/sqrt(2),
//   q = (z1-z2)/sqrt(2) (unit Jacobian), which diagonalizes the cross
//   Gaussian e^{2 eps Re(z1 z2)} carried by the k families;
//   Hermite2D integrates over the (u, v) planes named above, in which the
//   family's weight is a product of axis Gaussians.
// Grid scales matching the total Gaussian decay of each integrand make the
// compensated integrand a polynomial, so the default grids integrate these
// Grams exactly up to rounding.  Caller-supplied grids of any scale are
// accepted; the scale difference is compensated in log space per node.
// ---------------------------------------------------------------------------

enum class GramWeight {
  Bargmann1D,
  VanEM1D,
  Line1D,
  Bargmann2D,
  Hermite2D,
  Line2D,
};

inline std::string gram_weight_name(GramWeight w) {
  switch (w) {
    case GramWeight::Bargmann1D: return "Bargmann1D";
    case GramWeight::VanEM1D: return "VanEM1D";
    case GramWeight::Line1D: return "Line1D";
    case GramWeight::Bargmann2D: return "Bargmann2D";
    case GramWeight::Hermite2D: return "Hermite2D";
    case GramWeight::Line2D: return "Line2D";
  }
  throw domain_error("unknown gram weight");
}

inline GramWeight natural_gram_weight(BasisFamily f) {
  switch (f) {
    case BasisFamily::Monomial1D:
    case BasisFamily::HolHermiteK1D: return GramWeight::Bargmann1D;
    case BasisFamily::HolHermiteH1D: return GramWeight::VanEM1D;
    case BasisFamily::OscillatorPsi1D: return GramWeight::Line1D;
    case BasisFamily::Monomial2D:
    case BasisFamily::HolHermiteK2D: return GramWeight::Bargmann2D;
    case BasisFamily::HolHermiteH2D: return GramWeight::Hermite2D;
    case BasisFamily::OscillatorPsi2D: return GramWeight::Line2D;
    default:
      throw domain_error(family_name(f) +
                         " has no Gaussian plane measure; its kernel identities are "
                         "handled analytically, not by quadrature");
  }
}

inline void check_gram_pairing(const BasisSpec& spec, GramWeight w) {
  if (natural_gram_weight(spec.family) != w)
    throw domain_error("family " + family_name(spec.family) +
                       " is not orthonormal under weight " + gram_weight_name(w));
}

inline void warn_alpha_range(double alpha, std::vector<std::string>* warnings) {
  if (warnings && (alpha < 0.05 || alpha > 0.95))
    warnings->push_back("alpha = " + std::to_string(alpha) +
                        " is outside [0.05, 0.95]; quadrature grid scales are extreme "
                        "and stated tolerances degrade");
}

inline int default_gram_order(const BasisSpec& spec) {
  return is_two_variable(spec.family) ? 40 : 80;
}

namespace detail {

// Columns of released basis values scaled by sqrt(w e^{logw + comp}) are
// accumulated chunkwise as G += V V^H; chunk boundaries depend only on the
// node count, and the chunk partials combine pairwise, so the result is
// bit-stable across thread counts.
constexpr std::size_t kGramChunk = 512;

template <class ColumnFn>
Eigen::MatrixXcd gram_accumulate(int nrows, std::size_t nnodes, const ColumnFn& fill_column) {
  std::size_t nblocks = (nnodes + kGramChunk - 1) / kGramChunk;
  return tree_sum<Eigen::MatrixXcd>(nblocks, [&](std::size_t b) {
    std::size_t lo = b * kGramChunk;
    std::size_t hi = std::min(lo + kGramChunk, nnodes);
    Eigen::MatrixXcd V(nrows, Eigen::Index(hi - lo));
    std::vector<ScaledValue> stack;
    for (std::size_t i = lo; i < hi; ++i) fill_column(i, stack, V.col(Eigen::Index(i - lo)));
    return Eigen::MatrixXcd(V * V.adjoint());
  });
}

inline double plane1_log_weight(GramWeight w, const BasisSpec& spec, double x, double y) {
  if (w == GramWeight::Bargmann1D) return -(x * x + y * y) - std::log(kPi);
  AlphaParam ap = spec.alpha_param();
  return ap.alpha * x * x - y * y / ap.alpha;  // VanEM1D
}

inline Eigen::MatrixXcd gram_plane1(const BasisSpec& spec, GramWeight w, int N,
                                    const QuadratureGrid& g) {
  return gram_accumulate(N, g.size(), [&](std::size_t i, std::vector<ScaledValue>& stack,
                                          Eigen::MatrixXcd::ColXpr col) {
    double x = g.node_x[i], y = g.node_y[i];
    basis_stack(spec, N, Cplx(x, y), stack);
    double half_log = 0.5 * (plane1_log_weight(w, spec, x, y) + g.sx * x * x +
                             g.sy * y * y + std::log(g.weight[i]));
    for (int n = 0; n < N; ++n) {
      ScaledValue v = stack[std::size_t(n)];
      v.log_scale += half_log;
      col(n) = v.value();
    }
  });
}

inline Eigen::MatrixXcd gram_plane2(const BasisSpec& spec, GramWeight w, int N,
                                    const QuadratureGrid& g1, const QuadratureGrid& g2) {
  const std::size_t n2 = g2.size();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const bool rotated = (w == GramWeight::Bargmann2D);
  return gram_accumulate(N * N, g1.size() * n2, [&](std::size_t k,
                                                    std::vector<ScaledValue>& stack,
                                                    Eigen::MatrixXcd::ColXpr col) {
    std::size_t i = k / n2, j = k % n2;
    Cplx a(g1.node_x[i], g1.node_y[i]);
    Cplx b(g2.node_x[j], g2.node_y[j]);
    Cplx z1, z2;
    double logw;
    if (rotated) {
      z1 = (a + b) * inv_sqrt2;
      z2 = (a - b) * inv_sqrt2;
      logw = -std::norm(a) - std::norm(b) - 2.0 * std::log(kPi);
    } else {
      z1 = a - b;
      z2 = std::conj(a + b);
      logw = spec.alpha * std::norm(a) - std::norm(b) / spec.alpha;
    }
    basis_stack(spec, N, z1, z2, stack);
    double comp = g1.sx * g1.node_x[i] * g1.node_x[i] + g1.sy * g1.node_y[i] * g1.node_y[i] +
                  g2.sx * g2.node_x[j] * g2.node_x[j] + g2.sy * g2.node_y[j] * g2.node_y[j];
    double half_log = 0.5 * (logw + comp + std::log(g1.weight[i] * g2.weight[j]));
    for (int r = 0; r < N * N; ++r) {
      ScaledValue v = stack[std::size_t(r)];
      v.log_scale += half_log;
      col(r) = v.value();
    }
  });
}

inline Eigen::MatrixXcd gram_line1(const BasisSpec& spec, int N, const GaussHermiteRule& r) {
  return gram_accumulate(N, r.nodes.size(), [&](std::size_t i, std::vector<ScaledValue>& stack,
                                                Eigen::MatrixXcd::ColXpr col) {
    double q = r.nodes[i];
    basis_stack(spec, N, Cplx(q, 0.0), stack);
    double half_log = 0.5 * (r.scale * q * q + std::log(r.weights[i]));
    for (int n = 0; n < N; ++n) {
      ScaledValue v = stack[std::size_t(n)];
      v.log_scale += half_log;
      col(n) = v.value();
    }
  });
}

inline Eigen::MatrixXcd gram_line2(const BasisSpec& spec, int N, const GaussHermiteRule& r1,
                                   const GaussHermiteRule& r2) {
  const std::size_t n2 = r2.nodes.size();
  return gram_accumulate(N * N, r1.nodes.size() * n2,
                         [&](std::size_t k, std::vector<ScaledValue>& stack,
                             Eigen::MatrixXcd::ColXpr col) {
    std::size_t i = k / n2, j = k % n2;
    double q1 = r1.nodes[i], q2 = r2.nodes[j];
    basis_stack(spec, N, Cplx(q1, 0.0), Cplx(q2, 0.0), stack);
    double half_log = 0.5 * (r1.scale * q1 * q1 + r2.scale * q2 * q2 +
                             std::log(r1.weights[i] * r2.weights[j]));
    for (int r = 0; r < N * N; ++r) {
      ScaledValue v = stack[std::size_t(r)];
      v.log_scale += half_log;
      col(r) = v.value();
    }
  });
}

}  // namespace detail

// Quadrature Gram matrix with caller-supplied grids; one-plane weights.
inline Eigen::MatrixXcd gram_matrix(const BasisSpec& spec, GramWeight w, int N,
                                    const QuadratureGrid& grid) {
  require_domain(N >= 1, "gram_matrix: N must be >= 1");
  check_gram_pairing(spec, w);
  require_domain(w == GramWeight::Bargmann1D || w == GramWeight::VanEM1D,
                 gram_weight_name(w) + " does not integrate over a single plane");
  return detail::gram_plane1(spec, w, N, grid);
}

// Two-plane weights; grid1/grid2 integrate over the transformed variables
// documented above (rotated planes for Bargmann2D, (u, v) planes for
// Hermite2D).  The result is (N^2)x(N^2), row-major over (m, n).
inline Eigen::MatrixXcd gram_matrix(const BasisSpec& spec, GramWeight w, int N,
                                    const QuadratureGrid& grid1, const QuadratureGrid& grid2) {
  require_domain(N >= 1, "gram_matrix: N must be >= 1");
  check_gram_pairing(spec, w);
  require_domain(w == GramWeight::Bargmann2D || w == GramWeight::Hermite2D,
                 gram_weight_name(w) + " does not integrate over two planes");
  return detail::gram_plane2(spec, w, N, grid1, grid2);
}

// Line weights (oscillator eigenfunctions).
inline Eigen::MatrixXcd gram_matrix(const BasisSpec& spec, GramWeight w, int N,
                                    const GaussHermiteRule& rule) {
  require_domain(N >= 1, "gram_matrix: N must be >= 1");
  check_gram_pairing(spec, w);
  require_domain(w == GramWeight::Line1D, gram_weight_name(w) + " is not a line weight");
  return detail::gram_line1(spec, N, rule);
}

inline Eigen::MatrixXcd gram_matrix(const BasisSpec& spec, GramWeight w, int N,
                                    const GaussHermiteRule& rule1,
                                    const GaussHermiteRule& rule2) {
  require_domain(N >= 1, "gram_matrix: N must be >= 1");
  check_gram_pairing(spec, w);
  require_domain(w == GramWeight::Line2D, gram_weight_name(w) + " is not a two-line weight");
  return detail::gram_line2(spec, N, rule1, rule2);
}

// Builds the documented matched-scale grids for the family/weight pair and
// evaluates the Gram at the given per-axis order (default 80 one-variable,
// 40 two-variable).
inline Eigen::MatrixXcd gram_matrix(const BasisSpec& spec, GramWeight w, int N, int order,
                                    std::vector<std::string>* warnings = nullptr) {
  require_domain(N >= 1, "gram_matrix: N must be >= 1");
  check_gram_pairing(spec, w);
  if (uses_alpha(spec.family)) warn_alpha_range(spec.alpha, warnings);
  switch (w) {
    case GramWeight::Bargmann1D: {
      if (spec.family == BasisFamily::HolHermiteK1D) {
        AlphaParam ap = spec.alpha_param();
        return detail::gram_plane1(spec, w, N, build_grid(order, 1.0 - ap.eps, 1.0 + ap.eps));
      }
      return detail::gram_plane1(spec, w, N, build_grid(order, 1.0, 1.0));
    }
    case GramWeight::VanEM1D: {
      AlphaParam ap = spec.alpha_param();
      return detail::gram_plane1(spec, w, N,
                                 build_grid(order, 1.0 - ap.alpha, 1.0 / ap.alpha - 1.0));
    }
    case GramWeight::Line1D:
      return detail::gram_line1(spec, N, gauss_hermite(order, spec.osc_a * spec.osc_a));
    case GramWeight::Bargmann2D: {
      if (spec.family == BasisFamily::HolHermiteK2D) {
        AlphaParam ap = spec.alpha_param();
        return detail::gram_plane2(spec, w, N,
                                   build_grid(order, 1.0 - ap.eps, 1.0 + ap.eps),
                                   build_grid(order, 1.0 + ap.eps, 1.0 - ap.eps));
      }
      QuadratureGrid g = build_grid(order, 1.0, 1.0);
      return detail::gram_plane2(spec, w, N, g, g);
    }
    case GramWeight::Hermite2D: {
      AlphaParam ap = spec.alpha_param();
      double su = 1.0 - ap.alpha;
      double sv = (1.0 - ap.alpha) / ap.alpha;
      return detail::gram_plane2(spec, w, N, build_grid(order, su, su),
                                 build_grid(order, sv, sv));
    }
    case GramWeight::Line2D:
      return detail::gram_line2(spec, N, gauss_hermite(order, spec.osc_a * spec.osc_a),
                                gauss_hermite(order, spec.osc_b * spec.osc_b));
  }
  throw domain_error("unknown gram weight");
}

// Raw one-variable orthogonality integral
//   int H_m(z) conj(H_n(z)) exp(-(1-alpha)x^2 - (1/alpha-1)y^2) dx dy,
// diagonal value (pi sqrt(alpha)/(1-alpha)) (2(1+alpha)/(1-alpha))^n n!.
inline Cplx hermite1d_orthogonality_integral(double alpha, int m, int n, int order,
                                             std::vector<std::string>* warnings = nullptr) {
  require_domain(m >= 0 && n >= 0, "indices must be >= 0");
  AlphaParam ap(alpha);
  warn_alpha_range(alpha, warnings);
  QuadratureGrid g = build_grid(order, 1.0 - ap.alpha, 1.0 / ap.alpha - 1.0);
  int N = std::max(m, n) + 1;
  return tree_sum<Cplx>(g.size(), [&](std::size_t i) {
    Cplx z(g.node_x[i], g.node_y[i]);
    std::vector<ScaledValue> stack;
    scaled_hermite_stack(N, z, stack);
    ScaledValue a = stack[std::size_t(m)], b = stack[std::size_t(n)];
    b.mantissa = std::conj(b.mantissa);
    ScaledValue prod = a * b;
    prod.log_scale += std::log(g.weight[i]);
    return prod.value();
  });
}

// Raw two-variable orthogonality integral
//   int H_{m,n}(z1,z2) conj(H_{p,q}(z1,z2))
//       exp(-(1-alpha)|u|^2 - ((1-alpha)/alpha)|v|^2) d^2u d^2v
// over u = (conj(z2)+z1)/2, v = (conj(z2)-z1)/2, i.e. z1 = u - v,
// z2 = conj(u + v).  Diagonal value: pi^2 alpha/(1-alpha)^2
// ((1+alpha)/(1-alpha))^{m+n} m! n!.
inline Cplx hermite2d_orthogonality_integral(double alpha, int m, int n, int p, int q,
                                             int order,
                                             std::vector<std::string>* warnings = nullptr) {
  require_domain(m >= 0 && n >= 0 && p >= 0 && q >= 0, "indices must be >= 0");
  AlphaParam ap(alpha);
  warn_alpha_range(alpha, warnings);
  double su = 1.0 - ap.alpha;
  double sv = (1.0 - ap.alpha) / ap.alpha;
  QuadratureGrid gu = build_grid(order, su, su);
  QuadratureGrid gv = build_grid(order, sv, sv);
  int Nm = std::max(m, p) + 1, Nn = std::max(n, q) + 1;
  const std::size_t n2 = gv.size();
  return tree_sum<Cplx>(gu.size() * n2, [&](std::size_t k) {
    std::size_t i = k / n2, j = k % n2;
    Cplx u(gu.node_x[i], gu.node_y[i]);
    Cplx v(gv.node_x[j], gv.node_y[j]);
    Cplx z1 = u - v, z2 = std::conj(u + v);
    std::vector<ScaledValue> table;
    scaled_hermite2_table(Nm, Nn, z1, z2, table);
    ScaledValue prod = table[std::size_t(m) * std::size_t(Nn) + std::size_t(n)];
    ScaledValue other = table[std::size_t(p) * std::size_t(Nn) + std::size_t(q)];
    other.mantissa = std::conj(other.mantissa);
    prod = prod * other;
    // The weight exp(-su|u|^2 - sv|v|^2) cancels the grid Gaussian exactly,
    // so only the node weight remains.
    prod.log_scale += std::log(gu.weight[i] * gv.weight[j]);
    return prod.value();
  });
}

}  // namespace hcs
