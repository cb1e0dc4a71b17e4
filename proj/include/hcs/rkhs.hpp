#pragma once

// Reproducing-kernel layer: partial kernel sums over any basis family, the
// matching closed-form kernels, sample-matrix positivity checks, and the
// moment-sequence diagnostics (log-convexity, radial norms, weighted shifts).
//
// Kernel/basis pairings with a closed form:
//   Bargmann1D        <- Monomial1D, HolHermiteK1D     e^{z conj(w)}
//   Bargmann2D        <- Monomial2D, HolHermiteK2D     e^{z1 conj(w1) + z2 conj(w2)}
//   VanEM1D(alpha)    <- HolHermiteH1D                 Gaussian-quadratic exponent
//   VanEM2D(alpha)    <- HolHermiteH2D                 Gaussian-quadratic exponent
//   Szego             <- SzegoDisk                     1/(2 pi (1 - z conj(w)))
//   Bergman           <- BergmanDisk                   1/(2 pi (1 - z conj(w))^2)
//   FactorialRatio3F2 <- FactorialRatio                3F2(1,1,1; z+1, conj(w)+1; 1)/(z conj(w))
// The oscillator family has no pointwise-summable kernel (its formal sum is a
// delta distribution) and is rejected by zaremba_kernel's tail test.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hcs/hermite.hpp"
#include "hcs/types.hpp"

namespace hcs {

enum class KernelKind {
  Bargmann1D,
  Bargmann2D,
  VanEM1D,
  VanEM2D,
  Szego,
  Bergman,
  FactorialRatio3F2,
};

inline const char* kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Bargmann1D: return "bargmann1d";
    case KernelKind::Bargmann2D: return "bargmann2d";
    case KernelKind::VanEM1D: return "vanem1d";
    case KernelKind::VanEM2D: return "vanem2d";
    case KernelKind::Szego: return "szego";
    case KernelKind::Bergman: return "bergman";
    case KernelKind::FactorialRatio3F2: return "factorial3f2";
  }
  return "?";
}

inline bool kernel_is_two_mode(KernelKind kind) {
  return kind == KernelKind::Bargmann2D || kind == KernelKind::VanEM2D;
}

inline bool kernel_uses_alpha(KernelKind kind) {
  return kind == KernelKind::VanEM1D || kind == KernelKind::VanEM2D;
}

struct KernelSpec {
  KernelKind kind = KernelKind::Bargmann1D;
  std::optional<AlphaParam> alpha;  // present exactly when the kind needs it
};

inline void check_kernel_spec(const KernelSpec& spec) {
  if (kernel_uses_alpha(spec.kind) && !spec.alpha.has_value())
    throw domain_error(std::string(kernel_name(spec.kind)) + " needs an alpha parameter");
  if (!kernel_uses_alpha(spec.kind) && spec.alpha.has_value())
    throw domain_error(std::string(kernel_name(spec.kind)) + " takes no alpha parameter");
}

namespace detail {

// 3F2(1,1,1; z+1, w+1; 1) by its defining series; terms obey
// t_{n+1} = t_n (n+1)^2 / ((z+n+1)(w+n+1)), so t_n ~ n^{-Re(z+w)} and the
// remaining tail after term n is roughly t_n * n / (Re(z+w) - 1).
inline Cplx hyp3f2_unit(Cplx z, Cplx w) {
  const double p = z.real() + w.real();  // > 1 on the admissible half-planes
  Cplx t = 1.0;
  Cplx s = 1.0;
  for (int n = 0; n < 100000; ++n) {
    t *= double(n + 1) * double(n + 1) / ((z + double(n + 1)) * (w + double(n + 1)));
    s += t;
    const double tail = std::abs(t) * double(n + 1) / (p - 1.0);
    if (tail <= 1e-14 * std::abs(s)) return s;
  }
  throw numeric_error("hypergeometric series still above the 1e-14 tail target after 1e5 terms");
}

inline void check_disk_args(KernelKind kind, Cplx z, Cplx w) {
  if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
    throw domain_error(std::string(kernel_name(kind)) + " kernel needs |z| < 1 and |w| < 1");
}

}  // namespace detail

// Closed-form kernel, one-mode kinds.
inline Cplx closed_kernel(const KernelSpec& spec, Cplx z, Cplx w) {
  check_kernel_spec(spec);
  const Cplx wb = std::conj(w);
  switch (spec.kind) {
    case KernelKind::Bargmann1D:
      return std::exp(z * wb);
    case KernelKind::VanEM1D: {
      const double a = spec.alpha->alpha;
      const Cplx sq = z * z + wb * wb;
      const Cplx expo =
          -0.5 * sq - (1.0 - a) * (1.0 - a) / (4.0 * a) * sq + (1.0 - a * a) / (2.0 * a) * z * wb;
      return (1.0 - a * a) / (2.0 * kPi * a) * std::exp(expo);
    }
    case KernelKind::Szego:
      detail::check_disk_args(spec.kind, z, w);
      return 1.0 / (2.0 * kPi * (1.0 - z * wb));
    case KernelKind::Bergman: {
      detail::check_disk_args(spec.kind, z, w);
      const Cplx d = 1.0 - z * wb;
      return 1.0 / (2.0 * kPi * d * d);
    }
    case KernelKind::FactorialRatio3F2:
      require_domain(z.real() > 0.5 && w.real() > 0.5,
                     "factorial-ratio kernel needs Re z > 1/2 and Re w > 1/2");
      return detail::hyp3f2_unit(z, wb) / (z * wb);
    default:
      throw domain_error(std::string(kernel_name(spec.kind)) + " takes two-mode arguments");
  }
}

// Closed-form kernel, two-mode kinds.
inline Cplx closed_kernel(const KernelSpec& spec, Cplx z1, Cplx z2, Cplx w1, Cplx w2) {
  check_kernel_spec(spec);
  const Cplx w1b = std::conj(w1), w2b = std::conj(w2);
  switch (spec.kind) {
    case KernelKind::Bargmann2D:
      return std::exp(z1 * w1b + z2 * w2b);
    case KernelKind::VanEM2D: {
      const double a = spec.alpha->alpha;
      const double c = (1.0 - a * a) / (2.0 * kPi * a);
      const Cplx expo = (1.0 - a * a) / (4.0 * a) * (z1 * w1b + z2 * w2b) -
                        (1.0 + a * a) / (4.0 * a) * (z1 * z2 + w1b * w2b);
      return c * c * std::exp(expo);
    }
    default:
      throw domain_error(std::string(kernel_name(spec.kind)) + " takes one-mode arguments");
  }
}

// Partial kernel sum sum_n Phi_n(x) conj(Phi_n(y)).  The sum only means
// anything where the family is pointwise square-summable, so the diagonal
// square sums at both points are put through a Cauchy test over the last 10
// terms (relative threshold 1e-13).  A failed Cauchy test alone does not
// prove divergence: slowly converging families (the factorial-ratio basis
// near its half-plane boundary) fail it at any attainable N while their tail
// still decays.  The verdict therefore also estimates the tail's decay order
// from the last two 10-term windows: order >= 1 keeps the value and attaches
// an unresolved-tail warning; order < 1 (square-summability violated, e.g.
// the oscillator family whose terms decay like n^{-1/2}) withholds the value
// and returns the diagnostic alone.  Both judgments need N >= 21; below that
// the partial sum is returned untested.
struct ZarembaResult {
  std::optional<Cplx> value;
  std::string diagnostic;
  bool converged() const { return value.has_value(); }
};

namespace detail {

inline constexpr int kZarembaWindow = 10;
inline constexpr double kZarembaRelTail = 1e-13;

struct TailVerdict {
  enum Kind { Ok, SlowTail, Diverging, Overflow } kind = Ok;
  double rel_tail = 0.0;
  double order = 0.0;
};

// shells[k] holds |Phi_k(x)|^2 (one mode) or the max(m,n)=k shell sum (two
// modes).
inline TailVerdict zaremba_tail_verdict(const std::vector<double>& shells) {
  TailVerdict v;
  double total = 0.0;
  for (double s : shells) {
    if (!std::isfinite(s)) {
      v.kind = TailVerdict::Overflow;
      return v;
    }
    total += s;
  }
  const int n = int(shells.size());
  if (n < 2 * kZarembaWindow + 1) return v;
  double last = 0.0, prev = 0.0;
  for (int k = n - kZarembaWindow; k < n; ++k) last += shells[std::size_t(k)];
  for (int k = n - 2 * kZarembaWindow; k < n - kZarembaWindow; ++k) prev += shells[std::size_t(k)];
  v.rel_tail = last / std::max(total, 1e-300);
  if (last <= kZarembaRelTail * std::max(total, 1e-300)) return v;
  // window sums of c k^{-p} scale like the window-center ratio to the -p
  if (prev <= 0.0) {
    v.kind = TailVerdict::Diverging;
    return v;
  }
  const double centers = (double(n) - 5.5) / (double(n) - 5.5 - double(kZarembaWindow));
  v.order = std::log(prev / last) / std::log(centers);
  v.kind = v.order >= 1.0 ? TailVerdict::SlowTail : TailVerdict::Diverging;
  return v;
}

inline std::string zaremba_tail_message(const TailVerdict& v, const char* which, int n) {
  char buf[240];
  switch (v.kind) {
    case TailVerdict::Ok:
      return {};
    case TailVerdict::Overflow:
      std::snprintf(buf, sizeof buf,
                    "square-sum terms overflow in double at the %s argument; no verdict", which);
      return buf;
    case TailVerdict::SlowTail:
      std::snprintf(buf, sizeof buf,
                    "square-sum tail at the %s argument is unresolved at N=%d (last 10 terms are "
                    "%.3g of the total, decay order %.2f); partial sum still carries truncation "
                    "error",
                    which, n, v.rel_tail, v.order);
      return buf;
    default:
      std::snprintf(buf, sizeof buf,
                    "square sum at the %s argument is not Cauchy at N=%d (last 10 terms are %.3g "
                    "of the total, decay order %.2f < 1); the family is not square-summable here",
                    which, n, v.rel_tail, v.order);
      return buf;
  }
}

inline double scaled_abs2(const ScaledValue& v) {
  return std::norm(v.mantissa) * std::exp(2.0 * v.log_scale);
}

inline Cplx scaled_pair(const ScaledValue& a, const ScaledValue& b) {
  return a.mantissa * std::conj(b.mantissa) * std::exp(a.log_scale + b.log_scale);
}

}  // namespace detail

namespace detail {

inline ZarembaResult zaremba_from_stacks(const std::vector<ScaledValue>& fx,
                                         const std::vector<ScaledValue>& fy,
                                         const std::vector<double>& sx,
                                         const std::vector<double>& sy, int N) {
  ZarembaResult out;
  const TailVerdict vx = zaremba_tail_verdict(sx);
  const TailVerdict vy = zaremba_tail_verdict(sy);
  const TailVerdict& worst = vy.kind > vx.kind ? vy : vx;
  const char* which = vy.kind > vx.kind ? "second" : "first";
  out.diagnostic = zaremba_tail_message(worst, which, N);
  if (worst.kind == TailVerdict::Diverging || worst.kind == TailVerdict::Overflow) return out;
  Cplx sum = 0.0;
  for (std::size_t j = 0; j < fx.size(); ++j) sum += scaled_pair(fx[j], fy[j]);
  out.value = sum;
  return out;
}

}  // namespace detail

inline ZarembaResult zaremba_kernel(const BasisSpec& spec, Cplx x, Cplx y, int N) {
  require_domain(N >= 1, "zaremba_kernel needs N >= 1");
  require_domain(!is_two_variable(spec.family),
                 "two-variable family needs the four-point zaremba_kernel overload");
  std::vector<ScaledValue> fx, fy;
  basis_stack(spec, N, x, fx);
  basis_stack(spec, N, y, fy);
  const auto count = static_cast<std::size_t>(N);
  std::vector<double> sx(count), sy(count);
  for (std::size_t n = 0; n < count; ++n) {
    sx[n] = detail::scaled_abs2(fx[n]);
    sy[n] = detail::scaled_abs2(fy[n]);
  }
  return detail::zaremba_from_stacks(fx, fy, sx, sy, N);
}

// Two-mode partial sum over all m, n < N; tail shells follow max(m, n).
inline ZarembaResult zaremba_kernel(const BasisSpec& spec, Cplx x1, Cplx x2, Cplx y1, Cplx y2,
                                    int N) {
  require_domain(N >= 1, "zaremba_kernel needs N >= 1");
  require_domain(is_two_variable(spec.family),
                 "one-variable family needs the two-point zaremba_kernel overload");
  std::vector<ScaledValue> fx, fy;
  basis_stack(spec, N, x1, x2, fx);
  basis_stack(spec, N, y1, y2, fy);
  auto shells = [N](const std::vector<ScaledValue>& f) {
    std::vector<double> s(std::size_t(N), 0.0);
    for (int m = 0; m < N; ++m)
      for (int n = 0; n < N; ++n)
        s[std::size_t(std::max(m, n))] += detail::scaled_abs2(f[std::size_t(m * N + n)]);
    return s;
  };
  return detail::zaremba_from_stacks(fx, fy, shells(fx), shells(fy), N);
}

// Sample-matrix positivity: Hermitian-symmetry defect of K(x_i, x_j) and the
// smallest eigenvalue of its Hermitian part.
struct PositivityReport {
  double hermitian_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool pass = false;
};

namespace detail {

inline PositivityReport positivity_from_matrix(const Eigen::MatrixXcd& K, double tol) {
  PositivityReport rep;
  rep.hermitian_defect = (K - K.adjoint()).cwiseAbs().maxCoeff();
  Eigen::MatrixXcd H = 0.5 * (K + K.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.pass = rep.hermitian_defect < tol && rep.min_eigenvalue > -tol;
  return rep;
}

}  // namespace detail

inline PositivityReport hermitian_pd_check(const KernelSpec& spec, const std::vector<Cplx>& pts,
                                           double tol) {
  require_domain(pts.size() >= 2, "positivity check needs at least 2 sample points");
  const int n = int(pts.size());
  Eigen::MatrixXcd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      K(i, j) = closed_kernel(spec, pts[std::size_t(i)], pts[std::size_t(j)]);
  return detail::positivity_from_matrix(K, tol);
}

inline PositivityReport hermitian_pd_check(const KernelSpec& spec,
                                           const std::vector<std::array<Cplx, 2>>& pts,
                                           double tol) {
  require_domain(pts.size() >= 2, "positivity check needs at least 2 sample points");
  const int n = int(pts.size());
  Eigen::MatrixXcd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      K(i, j) = closed_kernel(spec, pts[std::size_t(i)][0], pts[std::size_t(i)][1],
                              pts[std::size_t(j)][0], pts[std::size_t(j)][1]);
  return detail::positivity_from_matrix(K, tol);
}

// Moment-sequence diagnostics.

struct MomentSequence {
  std::vector<double> values;  // a_n, all required > 0
};

struct ConvexityViolation {
  int m = 0, n = 0;
  double lhs = 0.0;  // v_{m+n}^2
  double rhs = 0.0;  // v_{2m} v_{2n}
};

struct ConvexityReport {
  bool pass = false;
  std::vector<ConvexityViolation> violations;
  // A pass is necessary for the weights to come from a rotation-invariant
  // measure; it is not sufficient.
  std::string note;
};

// Interprets the sequence as v_n = k_n^{-1} and checks v_{m+n}^2 <= v_{2m} v_{2n}
// for every pair with m+n <= L/2 whose even indices exist, exactly as the
// inequality is printed (no corrected index variant is substituted).
inline ConvexityReport log_convexity_check(const MomentSequence& k_inv) {
  const auto& v = k_inv.values;
  const int L = int(v.size());
  require_domain(L >= 3, "log-convexity check needs at least 3 entries");
  for (double e : v)
    require_domain(e > 0.0, "log-convexity check needs strictly positive entries");
  ConvexityReport rep;
  for (int m = 0; 2 * m < L; ++m)
    for (int n = 0; 2 * n < L; ++n) {
      if (2 * (m + n) > L) continue;
      const double lhs = v[std::size_t(m + n)] * v[std::size_t(m + n)];
      const double rhs = v[std::size_t(2 * m)] * v[std::size_t(2 * n)];
      if (lhs > rhs) rep.violations.push_back({m, n, lhs, rhs});
    }
  rep.pass = rep.violations.empty();
  rep.note = rep.pass ? "log-convexity holds; necessary for an underlying rotation-invariant "
                        "measure, not sufficient"
                      : "log-convexity fails; no rotation-invariant measure can produce these "
                        "norms";
  return rep;
}

// k_n = 2 pi / a_{2n} for every even-index moment present.
inline std::vector<double> radial_measure_norms(const MomentSequence& moments) {
  const auto& a = moments.values;
  require_domain(a.size() >= 3, "moment sequence needs at least 3 entries");
  for (double e : a) require_domain(e > 0.0, "moments must be strictly positive");
  std::vector<double> k;
  for (std::size_t n = 0; 2 * n < a.size(); ++n) k.push_back(2.0 * kPi / a[2 * n]);
  return k;
}

// Weighted shifts built from a positive weight sequence k_0..k_N.  The
// lowering map is a_- Phi_n = sqrt(sigma_n) Phi_{n-1} with sigma_n = k_n/k_{n+1}
// as printed (for k_n = 1/n! this gives subdiagonal sqrt(n+1), one step off
// the canonical annihilator); Shifted selects sigma_n = k_{n-1}/k_n, which
// restores sqrt(n) for the same weights.  sigma_0 = k_0^{-1/2} in both
// conventions; it normalizes Phi_0 and enters neither matrix.
enum class ShiftConvention { Verbatim, Shifted };

struct WeightedShifts {
  Eigen::MatrixXd raise;  // a_+ : (n+1, n) entry sqrt(sigma_{n+1})
  Eigen::MatrixXd lower;  // a_- : (n-1, n) entry sqrt(sigma_n)
  std::vector<double> sigma;
};

inline WeightedShifts weighted_shift_matrices(const std::vector<double>& k, int N,
                                              ShiftConvention conv = ShiftConvention::Verbatim) {
  require_domain(N >= 1, "weighted shifts need N >= 1");
  require_domain(int(k.size()) >= N + 1, "weighted shifts need N+1 weight entries");
  for (double e : k) require_domain(e > 0.0, "weights must be strictly positive");
  WeightedShifts out;
  out.sigma.assign(std::size_t(N), 0.0);
  out.sigma[0] = 1.0 / std::sqrt(k[0]);
  for (int n = 1; n < N; ++n)
    out.sigma[std::size_t(n)] = conv == ShiftConvention::Verbatim
                                    ? k[std::size_t(n)] / k[std::size_t(n) + 1]
                                    : k[std::size_t(n) - 1] / k[std::size_t(n)];
  out.raise = Eigen::MatrixXd::Zero(N, N);
  out.lower = Eigen::MatrixXd::Zero(N, N);
  for (int n = 1; n < N; ++n) {
    const double s = std::sqrt(out.sigma[std::size_t(n)]);
    out.lower(n - 1, n) = s;
    out.raise(n, n - 1) = s;
  }
  return out;
}

}  // namespace hcs
