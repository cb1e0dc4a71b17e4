#pragma once

// Truncated Fock-space states and operators for the deformed coherent family.
//
// Everything lives on C^N, or C^{N^2} for two modes with the (m, n) pair
// flattened row-major to m*N + n.  Provided here:
//
//   * coherent coefficient vectors k_n^{(alpha)}(z), built from the
//     three-term recurrence, plus the undeformed e^{-|z|^2/2} z^n/sqrt(n!)
//     vectors for reference;
//   * the ladder pair b, b^dag and the alpha-dependent Bogoliubov rotations
//     B_- = u b + v b^dag (u = (1+alpha)/2 sqrt(alpha), v = (1-alpha)/2
//     sqrt(alpha), u^2 - v^2 = 1) whose annihilators have the coherent
//     vectors as eigenvectors; in two modes the rotation mixes the modes,
//     B_{1,-} = u b_1 + v b_2^dag;
//   * the su(1,1) generators K_+, K_-, K_0 ([K_-, K_+] = 2 K_0,
//     [K_0, K_pm] = pm K_pm) in one mode (half z^2, half d^2/dz^2) and two
//     modes (z_1 z_2, d^2/dz_1 dz_2);
//   * the squeeze S(xi) = exp(xi K_+ - conj(xi) K_-), both as an exact
//     matrix exponential and as the normal-ordered three-factor product,
//     together with closed-form evaluators for the squeezed basis functions
//     S(xi) z^n/sqrt(n!) and finite-difference checks of their ladder
//     operators A_pm;
//   * the first-order differential representation of b, b^dag on the
//     coherent-family side, and the quadrature residual of the resolution
//     of the identity integral |c_z><c_z| W dA = I.
//
// Truncation corners: a shift operator on the truncated space corrupts its
// last rows, so operator identities and eigenvector residuals are taken on
// an interior block that drops the last two rows per mode.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "hcs/hermite.hpp"
#include "hcs/quadrature.hpp"
#include "hcs/types.hpp"

namespace hcs {

// Coefficient vector of a one-mode state in the number basis.  tail_fraction
// is |c_{dim-1}| / max_n |c_n|, a cheap estimate of how much the truncation
// cuts off; past 1e-6 the warning flag is set.
struct FockVector {
  int dim = 0;
  std::vector<Cplx> coeffs;
  double tail_fraction = 0.0;
  bool truncation_warning = false;

  double norm() const {
    double s = 0.0;
    for (const Cplx& c : coeffs) s += std::norm(c);
    return std::sqrt(s);
  }
};

// Coefficient matrix of a two-mode state: coeffs(m, n) multiplies e_m x e_n.
// The tail estimate scans the last row and column, the two edges the
// truncation cuts.
struct CoeffMatrix {
  int dim = 0;  // per mode
  Eigen::MatrixXcd coeffs;
  double tail_fraction = 0.0;
  bool truncation_warning = false;

  double norm() const { return coeffs.norm(); }
};

enum class OpLabel {
  b, bdag, Bminus, Bplus, B1minus, B2minus, B1plus, B2plus, Kplus, Kminus, K0, Squeeze
};

inline std::string op_label_name(OpLabel l) {
  switch (l) {
    case OpLabel::b: return "b";
    case OpLabel::bdag: return "bdag";
    case OpLabel::Bminus: return "Bminus";
    case OpLabel::Bplus: return "Bplus";
    case OpLabel::B1minus: return "B1minus";
    case OpLabel::B2minus: return "B2minus";
    case OpLabel::B1plus: return "B1plus";
    case OpLabel::B2plus: return "B2plus";
    case OpLabel::Kplus: return "Kplus";
    case OpLabel::Kminus: return "Kminus";
    case OpLabel::K0: return "K0";
    case OpLabel::Squeeze: return "Squeeze";
  }
  throw domain_error("unknown operator label");
}

struct OperatorMatrix {
  OpLabel label;
  Eigen::MatrixXcd m;
};

namespace detail {

inline void check_arity(int arity) {
  require_domain(arity == 1 || arity == 2,
                 "arity must be 1 or 2, got " + std::to_string(arity));
}

inline void finish_tail_1(FockVector& v, bool normalize) {
  double mx = 0.0;
  for (const Cplx& c : v.coeffs) mx = std::max(mx, std::abs(c));
  v.tail_fraction = std::abs(v.coeffs.back()) / mx;  // c_0 never vanishes here
  v.truncation_warning = v.tail_fraction > 1e-6;
  if (normalize) {
    double nr = v.norm();
    for (Cplx& c : v.coeffs) c /= nr;
  }
}

inline void finish_tail_2(CoeffMatrix& v, bool normalize) {
  int N = v.dim;
  double mx = v.coeffs.cwiseAbs().maxCoeff();
  double edge = std::max(v.coeffs.row(N - 1).cwiseAbs().maxCoeff(),
                         v.coeffs.col(N - 1).cwiseAbs().maxCoeff());
  v.tail_fraction = edge / mx;
  v.truncation_warning = v.tail_fraction > 1e-6;
  if (normalize) v.coeffs /= v.coeffs.norm();
}

}  // namespace detail

// Coherent coefficient vector (k_0(z), ..., k_{N-1}(z)) from the recurrence
//   k_{n+1} = (sigma z k_n - eps sqrt(n) k_{n-1}) / sqrt(n+1),
// sigma = 2 sqrt(alpha)/(1+alpha), seeded by k_0 = sqrt(sigma) e^{eps z^2/2}.
// Unnormalized by default; B_- applied to the vector gives z times it, up to
// the truncation tail.
inline FockVector coherent_state(Cplx z, const AlphaParam& ap, int N, bool normalize = false) {
  require_domain(N >= 2, "coherent_state needs dim >= 2, got " + std::to_string(N));
  double sigma = 2.0 * std::sqrt(ap.alpha) / (1.0 + ap.alpha);
  FockVector out;
  out.dim = N;
  out.coeffs.resize(std::size_t(N));
  out.coeffs[0] = std::sqrt(sigma) * std::exp(0.5 * ap.eps * z * z);
  out.coeffs[1] = sigma * z * out.coeffs[0];
  for (int n = 1; n + 1 < N; ++n)
    out.coeffs[std::size_t(n) + 1] =
        (sigma * z * out.coeffs[std::size_t(n)] -
         ap.eps * std::sqrt(double(n)) * out.coeffs[std::size_t(n) - 1]) /
        std::sqrt(double(n) + 1.0);
  detail::finish_tail_1(out, normalize);
  return out;
}

// Two-mode coherent coefficients k_{m,n}(z1, z2).  The raising recurrences
// couple the modes crosswise, mirroring the B_{i,pm} structure:
//   sqrt(m+1) k_{m+1,n} = sigma z1 k_{m,n} - eps sqrt(n) k_{m,n-1},
//   sqrt(n+1) k_{m,n+1} = sigma z2 k_{m,n} - eps sqrt(m) k_{m-1,n}.
inline CoeffMatrix coherent_state(Cplx z1, Cplx z2, const AlphaParam& ap, int N,
                                  bool normalize = false) {
  require_domain(N >= 2, "coherent_state needs dim >= 2 per mode, got " + std::to_string(N));
  double sigma = 2.0 * std::sqrt(ap.alpha) / (1.0 + ap.alpha);
  CoeffMatrix out;
  out.dim = N;
  out.coeffs.resize(N, N);
  out.coeffs(0, 0) = sigma * std::exp(ap.eps * z1 * z2);
  for (int n = 0; n + 1 < N; ++n)
    out.coeffs(0, n + 1) = sigma * z2 * out.coeffs(0, n) / std::sqrt(double(n) + 1.0);
  for (int m = 0; m + 1 < N; ++m)
    for (int n = 0; n < N; ++n) {
      Cplx cross = (n > 0) ? ap.eps * std::sqrt(double(n)) * out.coeffs(m, n - 1)
                           : Cplx(0.0, 0.0);
      out.coeffs(m + 1, n) = (sigma * z1 * out.coeffs(m, n) - cross) / std::sqrt(double(m) + 1.0);
    }
  detail::finish_tail_2(out, normalize);
  return out;
}

// Undeformed coherent vector, c_n = e^{-|z|^2/2} z^n / sqrt(n!); normalized by
// construction up to the truncation tail.
inline FockVector standard_cs(Cplx z, int N) {
  require_domain(N >= 2, "standard_cs needs dim >= 2, got " + std::to_string(N));
  FockVector out;
  out.dim = N;
  out.coeffs.resize(std::size_t(N));
  out.coeffs[0] = std::exp(-0.5 * std::norm(z));
  for (int n = 0; n + 1 < N; ++n)
    out.coeffs[std::size_t(n) + 1] = out.coeffs[std::size_t(n)] * z / std::sqrt(double(n) + 1.0);
  detail::finish_tail_1(out, false);
  return out;
}

// b and b^dag on C^N: b e_n = sqrt(n) e_{n-1}.
inline std::pair<OperatorMatrix, OperatorMatrix> ladder_ops(int N) {
  require_domain(N >= 2, "ladder_ops needs dim >= 2, got " + std::to_string(N));
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(N, N);
  for (int n = 1; n < N; ++n) b(n - 1, n) = std::sqrt(double(n));
  return {OperatorMatrix{OpLabel::b, b}, OperatorMatrix{OpLabel::bdag, b.adjoint()}};
}

// Bogoliubov rotations.  One mode: {B_-, B_+} with B_- = u b + v b^dag.
// Two modes (dim N^2): {B_{1,-}, B_{2,-}, B_{1,+}, B_{2,+}} with
// B_{1,-} = u b_1 + v b_2^dag and B_{2,-} = v b_1^dag + u b_2; the commutator
// [B_{1,-}, B_{2,-}] vanishes away from the truncation corner.
inline std::vector<OperatorMatrix> bogoliubov_ops(const AlphaParam& ap, int N, int arity) {
  require_domain(N >= 4, "bogoliubov_ops needs dim >= 4 per mode, got " + std::to_string(N));
  detail::check_arity(arity);
  double u = (1.0 + ap.alpha) / (2.0 * std::sqrt(ap.alpha));
  double v = (1.0 - ap.alpha) / (2.0 * std::sqrt(ap.alpha));
  auto [b, bd] = ladder_ops(N);
  if (arity == 1)
    return {OperatorMatrix{OpLabel::Bminus, u * b.m + v * bd.m},
            OperatorMatrix{OpLabel::Bplus, u * bd.m + v * b.m}};
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(N, N);
  Eigen::MatrixXcd b1 = Eigen::kroneckerProduct(b.m, id);
  Eigen::MatrixXcd b2 = Eigen::kroneckerProduct(id, b.m);
  Eigen::MatrixXcd b1d = b1.adjoint();
  Eigen::MatrixXcd b2d = b2.adjoint();
  return {OperatorMatrix{OpLabel::B1minus, u * b1 + v * b2d},
          OperatorMatrix{OpLabel::B2minus, v * b1d + u * b2},
          OperatorMatrix{OpLabel::B1plus, u * b1d + v * b2},
          OperatorMatrix{OpLabel::B2plus, v * b1 + u * b2d}};
}

struct Su11Generators {
  OperatorMatrix kplus, kminus, kzero;
};

// su(1,1) generators.  One mode: K_+ = z^2/2, K_- = (d/dz)^2/2, K_0 with
// spectrum (n + 1/2)/2.  Two modes: K_+ = z_1 z_2, K_- = d^2/dz_1 dz_2, K_0
// with spectrum (1 + m + n)/2.
inline Su11Generators su11_generators(int arity, int N) {
  require_domain(N >= 4, "su11_generators needs dim >= 4 per mode, got " + std::to_string(N));
  detail::check_arity(arity);
  if (arity == 1) {
    Eigen::MatrixXcd kp = Eigen::MatrixXcd::Zero(N, N);
    Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 0; n + 2 < N; ++n)
      kp(n + 2, n) = 0.5 * std::sqrt(double(n + 1) * double(n + 2));
    for (int n = 0; n < N; ++n) k0(n, n) = 0.5 * (double(n) + 0.5);
    return {OperatorMatrix{OpLabel::Kplus, kp}, OperatorMatrix{OpLabel::Kminus, kp.adjoint()},
            OperatorMatrix{OpLabel::K0, k0}};
  }
  int NN = N * N;
  Eigen::MatrixXcd kp = Eigen::MatrixXcd::Zero(NN, NN);
  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(NN, NN);
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n) {
      if (m + 1 < N && n + 1 < N)
        kp((m + 1) * N + n + 1, m * N + n) = std::sqrt(double(m + 1) * double(n + 1));
      k0(m * N + n, m * N + n) = 0.5 * (1.0 + double(m) + double(n));
    }
  return {OperatorMatrix{OpLabel::Kplus, kp}, OperatorMatrix{OpLabel::Kminus, kp.adjoint()},
          OperatorMatrix{OpLabel::K0, k0}};
}

// Squeeze amplitude map xi -> zeta = xi tanh|xi| / |xi|; |zeta| = tanh|xi|.
inline Cplx squeeze_zeta(Cplx xi) {
  double r = std::abs(xi);
  if (r == 0.0) return {0.0, 0.0};
  return xi * (std::tanh(r) / r);
}

enum class SqueezeMethod { Exact, Zassenhaus };

// Middle factor of the normal-ordered squeeze, e^{c K_0}.  The constant is
// sometimes quoted as c = log(1 + |zeta|^2); the 2x2 defining representation
// fixes c = log(1 - |zeta|^2) = -2 log cosh|xi|, which is the default.  The
// plus variant stays selectable for side-by-side comparison.
enum class ZassenhausLog { OneMinus, OnePlus };

namespace detail {

// exp of a nilpotent shift operator: the power series terminates on its own.
inline Eigen::MatrixXcd nilpotent_exp(const Eigen::MatrixXcd& a) {
  Eigen::Index n = a.rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    term = (term * a / double(k)).eval();
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    sum += term;
  }
  return sum;
}

}  // namespace detail

// S(xi) = exp(xi K_+ - conj(xi) K_-) on the truncated space.  Exact: scaling
// and squaring of the (anti-Hermitian) generator, so the result is unitary to
// rounding.  Zassenhaus: e^{zeta K_+} e^{c K_0} e^{-conj(zeta) K_-}; with the
// lowering factor rightmost, intermediate indices never exceed the incoming
// ones, so the truncated product reproduces the untruncated matrix elements
// entry for entry.
inline OperatorMatrix squeeze_matrix(Cplx xi, int N, int arity,
                                     SqueezeMethod method = SqueezeMethod::Exact,
                                     ZassenhausLog middle = ZassenhausLog::OneMinus) {
  require_domain(N >= 8, "squeeze_matrix needs dim >= 8 per mode, got " + std::to_string(N));
  detail::check_arity(arity);
  require_domain(std::abs(xi) < 5.0,
                 "squeeze_matrix: |xi| = " + std::to_string(std::abs(xi)) +
                     " leaves the truncated exponential too ill-conditioned; need |xi| < 5");
  Su11Generators g = su11_generators(arity, N);
  if (method == SqueezeMethod::Exact) {
    Eigen::MatrixXcd x = xi * g.kplus.m - std::conj(xi) * g.kminus.m;
    return {OpLabel::Squeeze, x.exp()};
  }
  Cplx zeta = squeeze_zeta(xi);
  double c = (middle == ZassenhausLog::OneMinus) ? std::log1p(-std::norm(zeta))
                                                 : std::log1p(std::norm(zeta));
  Eigen::MatrixXcd up = detail::nilpotent_exp(zeta * g.kplus.m);
  Eigen::MatrixXcd down = detail::nilpotent_exp(-std::conj(zeta) * g.kminus.m);
  Eigen::VectorXcd mid = (c * g.kzero.m.diagonal().array()).exp();
  return {OpLabel::Squeeze, up * mid.asDiagonal() * down};
}

namespace detail {

inline Cplx ipow(Cplx z, int p) {
  Cplx r{1.0, 0.0};
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

}  // namespace detail

// Squeezed basis function S(xi) z^n/sqrt(n!) evaluated at z, parametrized by
// zeta = squeeze_zeta(xi):
//   Phi_n^zeta(z) = (1-|zeta|^2)^{1/4} conj(zeta)^{n/2} / sqrt(2^n n!)
//                   e^{zeta z^2/2} H_n(z sqrt((1-|zeta|^2)/(2 conj(zeta)))).
// The half-integer powers pair the same principal square root, and H_n's
// parity makes the product branch-independent.  Near zeta = 0 the Hermite
// argument diverges, so below |zeta| = 1e-6 the evaluation switches to the
// expanded polynomial, which is finite there and reduces to z^n/sqrt(n!) at
// zeta = 0.
inline Cplx squeezed_basis(int n, Cplx z, Cplx zeta) {
  require_domain(n >= 0, "basis index must be >= 0");
  double az2 = std::norm(zeta);
  require_domain(az2 < 1.0, "squeezed_basis needs |zeta| < 1, got |zeta| = " +
                                std::to_string(std::abs(zeta)));
  double om = 1.0 - az2;
  if (std::abs(zeta) < 1e-6) {
    Cplx zb = std::conj(zeta);
    Cplx sum{0.0, 0.0};
    double binom = 1.0;  // n! / (k! (n-2k)!)
    for (int k = 0; 2 * k <= n; ++k) {
      sum += binom * detail::ipow(-0.5 * zb, k) * std::pow(om, 0.5 * double(n - 2 * k)) *
             detail::ipow(z, n - 2 * k);
      binom *= double(n - 2 * k) * double(n - 2 * k - 1) / double(k + 1);
    }
    return std::pow(om, 0.25) * std::exp(0.5 * zeta * z * z) * sum *
           std::exp(-0.5 * log_factorial(n));
  }
  Cplx s = std::sqrt(std::conj(zeta));
  double as = std::abs(s);
  ScaledValue h = scaled_hermite(n, z * std::sqrt(om) / (std::sqrt(2.0) * s));
  h.mul(detail::ipow(s / as, n) * std::pow(om, 0.25));
  h.log_scale += double(n) * std::log(as) -
                 0.5 * (double(n) * std::log(2.0) + log_factorial(n));
  h.mul_exp(0.5 * zeta * z * z);
  return h.value();
}

// Two-mode squeezed basis function:
//   Phi_{m,n}^zeta = sqrt(1-|zeta|^2) conj(zeta)^{(m+n)/2} / sqrt(m! n!)
//                    e^{zeta z1 z2} H_{m,n}(c z1, c z2),
// c = sqrt((1-|zeta|^2)/conj(zeta)).  At zeta = eps(alpha) this is k_{m,n}.
inline Cplx squeezed_basis(int m, int n, Cplx z1, Cplx z2, Cplx zeta) {
  require_domain(m >= 0 && n >= 0, "basis indices must be >= 0");
  double az2 = std::norm(zeta);
  require_domain(az2 < 1.0, "squeezed_basis needs |zeta| < 1, got |zeta| = " +
                                std::to_string(std::abs(zeta)));
  double om = 1.0 - az2;
  if (std::abs(zeta) < 1e-6) {
    Cplx zb = std::conj(zeta);
    Cplx sum{0.0, 0.0};
    double coef = 1.0;  // k! C(m,k) C(n,k)
    for (int k = 0; k <= std::min(m, n); ++k) {
      sum += coef * detail::ipow(-zb, k) * std::pow(om, 0.5 * double(m + n - 2 * k)) *
             detail::ipow(z1, m - k) * detail::ipow(z2, n - k);
      coef *= double(m - k) * double(n - k) / double(k + 1);
    }
    return std::sqrt(om) * std::exp(zeta * z1 * z2) * sum *
           std::exp(-0.5 * (log_factorial(m) + log_factorial(n)));
  }
  Cplx s = std::sqrt(std::conj(zeta));
  double as = std::abs(s);
  Cplx c = std::sqrt(om) / s;
  ScaledValue h = scaled_hermite2(m, n, c * z1, c * z2);
  h.mul(detail::ipow(s / as, m + n));
  h.log_scale += double(m + n) * std::log(as) + 0.5 * std::log(om) -
                 0.5 * (log_factorial(m) + log_factorial(n));
  h.mul_exp(zeta * z1 * z2);
  return h.value();
}

struct SqueezedLadderReport {
  double raise_defect = 0.0;   // worst |A_+ Phi_n - sqrt(n+1) Phi_{n+1}|
  double lower_defect = 0.0;   // worst |A_- Phi_n - sqrt(n) Phi_{n-1}|, n >= 1
  double ground_defect = 0.0;  // worst |A_- Phi_0|
  double max_defect = 0.0;
};

// Finite-difference check that the squeezed ladder operators
//   A_+ = (z - conj(zeta) d/dz) / sqrt(1-|zeta|^2),
//   A_- = (d/dz - zeta z) / sqrt(1-|zeta|^2)
// shift the squeezed basis the way b^dag and b shift the number basis.  Two
// modes couple crosswise: A_{1,+} = (z_1 - conj(zeta) d/dz_2) / sqrt(...),
// A_{1,-} = (d/dz_1 - zeta z_2) / sqrt(...).  Derivatives are central
// differences with the given step, taken along the real direction, which is
// the full complex derivative for these entire functions.
inline SqueezedLadderReport squeezed_ladder_check(Cplx zeta, int nmax, int arity,
                                                  double step = 1e-5) {
  require_domain(nmax >= 1, "need nmax >= 1");
  require_domain(std::norm(zeta) < 1.0, "squeezed ladder check needs |zeta| < 1");
  detail::check_arity(arity);
  double rs = 1.0 / std::sqrt(1.0 - std::norm(zeta));
  Cplx zb = std::conj(zeta);
  SqueezedLadderReport rep;
  auto record = [&](int n, Cplx up_got, Cplx up_want, Cplx dn_got, Cplx dn_want) {
    rep.raise_defect = std::max(rep.raise_defect, std::abs(up_got - up_want));
    if (n == 0)
      rep.ground_defect = std::max(rep.ground_defect, std::abs(dn_got));
    else
      rep.lower_defect = std::max(rep.lower_defect, std::abs(dn_got - dn_want));
  };
  if (arity == 1) {
    const Cplx pts[] = {{0.3, 0.2}, {-0.5, 0.4}, {0.7, 0.0}, {0.1, -0.6}, {-0.85, -0.3}};
    for (int n = 0; n <= nmax; ++n)
      for (Cplx z : pts) {
        Cplx f = squeezed_basis(n, z, zeta);
        Cplx df = (squeezed_basis(n, z + step, zeta) - squeezed_basis(n, z - step, zeta)) /
                  (2.0 * step);
        record(n, rs * (z * f - zb * df), std::sqrt(double(n) + 1.0) * squeezed_basis(n + 1, z, zeta),
               rs * (df - zeta * z * f),
               n > 0 ? std::sqrt(double(n)) * squeezed_basis(n - 1, z, zeta) : Cplx{0.0, 0.0});
      }
  } else {
    const std::pair<Cplx, Cplx> pts[] = {{{0.4, 0.1}, {-0.3, 0.5}}, {{-0.6, -0.2}, {0.7, 0.15}}};
    for (int m = 0; m <= nmax; ++m)
      for (int n = 0; n <= nmax; ++n)
        for (auto [z1, z2] : pts) {
          Cplx f = squeezed_basis(m, n, z1, z2, zeta);
          Cplx d1 = (squeezed_basis(m, n, z1 + step, z2, zeta) -
                     squeezed_basis(m, n, z1 - step, z2, zeta)) /
                    (2.0 * step);
          Cplx d2 = (squeezed_basis(m, n, z1, z2 + step, zeta) -
                     squeezed_basis(m, n, z1, z2 - step, zeta)) /
                    (2.0 * step);
          // mode 1: raise with z_1 and d/dz_2, lower with d/dz_1 and z_2
          record(m, rs * (z1 * f - zb * d2),
                 std::sqrt(double(m) + 1.0) * squeezed_basis(m + 1, n, z1, z2, zeta),
                 rs * (d1 - zeta * z2 * f),
                 m > 0 ? std::sqrt(double(m)) * squeezed_basis(m - 1, n, z1, z2, zeta)
                       : Cplx{0.0, 0.0});
          // mode 2, mirrored
          record(n, rs * (z2 * f - zb * d1),
                 std::sqrt(double(n) + 1.0) * squeezed_basis(m, n + 1, z1, z2, zeta),
                 rs * (d2 - zeta * z1 * f),
                 n > 0 ? std::sqrt(double(n)) * squeezed_basis(m, n - 1, z1, z2, zeta)
                       : Cplx{0.0, 0.0});
        }
  }
  rep.max_defect = std::max({rep.raise_defect, rep.lower_defect, rep.ground_defect});
  return rep;
}

// Coefficient pair for the first-order differential representation of b and
// b^dag on the coherent-family side.  LadderAction is the pair
// (u, v) = (cosh r, sinh r) with tanh r = eps, which reproduces
// b k_n = sqrt(n) k_{n-1} (checked by finite differences in the tests).
// DoubleAngle is the circulating pair (cosh 2r, sinh 2r) =
// ((1+alpha^2)/2alpha, (1-alpha^2)/2alpha); it arises when the squeeze
// conjugation is applied twice and does not shift the k family, but stays
// selectable for comparison.
enum class RepForm { LadderAction, DoubleAngle };

// One operator: deriv * d/dz + mult * z.  For annihilators the derivative
// acts on the operator's own mode and the multiplication on the partner
// mode; for creators the roles swap.  (One mode: both act on z.)
struct BargmannRepOp {
  double deriv = 0.0;
  double mult = 0.0;
};

struct BargmannRep {
  int arity = 1;
  BargmannRepOp b1, b1dag;
  BargmannRepOp b2, b2dag;  // filled when arity == 2
};

inline BargmannRep bargmann_rep_bdag_b(const AlphaParam& ap, int arity,
                                       RepForm form = RepForm::LadderAction) {
  detail::check_arity(arity);
  double u, v;
  if (form == RepForm::LadderAction) {
    u = (1.0 + ap.alpha) / (2.0 * std::sqrt(ap.alpha));
    v = (1.0 - ap.alpha) / (2.0 * std::sqrt(ap.alpha));
  } else {
    u = (1.0 + ap.alpha * ap.alpha) / (2.0 * ap.alpha);
    v = (1.0 - ap.alpha * ap.alpha) / (2.0 * ap.alpha);
  }
  BargmannRep rep;
  rep.arity = arity;
  rep.b1 = {u, -v};
  rep.b1dag = {-v, u};
  if (arity == 2) {
    rep.b2 = rep.b1;
    rep.b2dag = rep.b1dag;
  }
  return rep;
}

// Relative eigenvector residual ||op state - eigenvalue state|| / ||state||,
// with the numerator norm taken over the interior rows (all but the last two
// per mode), where the truncated operator still acts like its untruncated
// parent.
inline double annihilation_residual(const FockVector& state, const OperatorMatrix& op,
                                    Cplx eigenvalue) {
  int N = state.dim;
  require_domain(N >= 3, "annihilation_residual needs dim >= 3");
  require_domain(op.m.rows() == N && op.m.cols() == N,
                 "operator dimension " + std::to_string(op.m.rows()) +
                     " does not match state dimension " + std::to_string(N));
  Eigen::Map<const Eigen::VectorXcd> v(state.coeffs.data(), N);
  double nrm = v.norm();
  require_domain(nrm > 0.0, "annihilation_residual: state has zero norm");
  Eigen::VectorXcd r = op.m * v - eigenvalue * v;
  return r.head(N - 2).norm() / nrm;
}

inline double annihilation_residual(const CoeffMatrix& state, const OperatorMatrix& op,
                                    Cplx eigenvalue) {
  int N = state.dim;
  require_domain(N >= 3, "annihilation_residual needs dim >= 3 per mode");
  require_domain(op.m.rows() == N * N && op.m.cols() == N * N,
                 "operator dimension " + std::to_string(op.m.rows()) +
                     " does not match flattened state dimension " + std::to_string(N * N));
  Eigen::VectorXcd v(N * N);
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n) v(m * N + n) = state.coeffs(m, n);
  double nrm = v.norm();
  require_domain(nrm > 0.0, "annihilation_residual: state has zero norm");
  Eigen::VectorXcd r = op.m * v - eigenvalue * v;
  double s = 0.0;
  for (int m = 0; m + 2 < N; ++m)
    for (int n = 0; n + 2 < N; ++n) s += std::norm(r(m * N + n));
  return std::sqrt(s) / nrm;
}

// Quadrature residual || integral c(z) c(z)^H W(z) dA - I ||_max with the
// coherent vectors taken raw (unnormalized) on the weight-matched plane; the
// grid argument only supplies the order, the scales are rebuilt to match the
// Gaussian factors of the family.
inline double resolution_identity_residual(const AlphaParam& ap, int N,
                                           const QuadratureGrid& grid, int arity) {
  require_domain(N >= 2, "resolution_identity_residual needs dim >= 2 per mode");
  detail::check_arity(arity);
  int order = grid.order;
  if (arity == 1) {
    QuadratureGrid g = build_grid(order, 1.0 - ap.eps, 1.0 + ap.eps);
    Eigen::MatrixXcd acc = detail::gram_accumulate(
        N, g.size(),
        [&](std::size_t i, std::vector<ScaledValue>&, Eigen::MatrixXcd::ColXpr col) {
          double x = g.node_x[i], y = g.node_y[i];
          FockVector c = coherent_state(Cplx(x, y), ap, N);
          double f = std::exp(0.5 * (-ap.eps * x * x + ap.eps * y * y - std::log(kPi) +
                                     std::log(g.weight[i])));
          for (int n = 0; n < N; ++n) col(n) = c.coeffs[std::size_t(n)] * f;
        });
    return (acc - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
  }
  QuadratureGrid g1 = build_grid(order, 1.0 - ap.eps, 1.0 + ap.eps);
  QuadratureGrid g2 = build_grid(order, 1.0 + ap.eps, 1.0 - ap.eps);
  const std::size_t n2 = g2.size();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd acc = detail::gram_accumulate(
      N * N, g1.size() * n2,
      [&](std::size_t k, std::vector<ScaledValue>&, Eigen::MatrixXcd::ColXpr col) {
        std::size_t i = k / n2, j = k % n2;
        Cplx a(g1.node_x[i], g1.node_y[i]);
        Cplx b(g2.node_x[j], g2.node_y[j]);
        CoeffMatrix c = coherent_state((a + b) * inv_sqrt2, (a - b) * inv_sqrt2, ap, N);
        double comp = g1.sx * a.real() * a.real() + g1.sy * a.imag() * a.imag() +
                      g2.sx * b.real() * b.real() + g2.sy * b.imag() * b.imag();
        double f = std::exp(0.5 * (-std::norm(a) - std::norm(b) - 2.0 * std::log(kPi) + comp +
                                   std::log(g1.weight[i] * g2.weight[j])));
        for (int m = 0; m < N; ++m)
          for (int n = 0; n < N; ++n) col(m * N + n) = c.coeffs(m, n) * f;
      });
  return (acc - Eigen::MatrixXcd::Identity(N * N, N * N)).cwiseAbs().maxCoeff();
}

}  // namespace hcs
