#pragma once

#include <string>
#include <vector>

#include "types.hpp"

namespace hcs {

// ---------------------------------------------------------------------------
// Hermite polynomials of a complex variable, one and two indices.
//
// One index:  H_{n+1}(z) = 2 z H_n(z) - 2 n H_{n-1}(z),  H_0 = 1.
// Two indices: H_{m+1,n}(z1,z2) = z1 H_{m,n} - n H_{m,n-1},
//              H_{m,n+1}(z1,z2) = z2 H_{m,n} - m H_{m-1,n},  H_{0,0} = 1,
// so H_{m,0} = z1^m, H_{0,n} = z2^n and H_{1,1} = z1 z2 - 1.
// ---------------------------------------------------------------------------

// Raw value; overflows to inf for large n at large |z| (use scaled_hermite
// when the index runs toward the cap).
inline Cplx hermite_poly(int n, Cplx z) {
  require_domain(n >= 0, "hermite_poly: index must be >= 0");
  if (n == 0) return 1.0;
  Cplx prev = 1.0, cur = 2.0 * z;
  for (int k = 1; k < n; ++k) {
    Cplx next = 2.0 * z * cur - 2.0 * double(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Raw two-index value by the coupled recurrence above.
inline Cplx hermite_poly_2d(int m, int n, Cplx z1, Cplx z2) {
  require_domain(m >= 0 && n >= 0, "hermite_poly_2d: indices must be >= 0");
  // Row H_{i,0} = z1^i, then step the second index n times.
  std::vector<Cplx> row(std::size_t(m) + 1);
  row[0] = 1.0;
  for (int i = 1; i <= m; ++i) row[std::size_t(i)] = row[std::size_t(i) - 1] * z1;
  std::vector<Cplx> next(row.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= m; ++i) {
      Cplx lower = i > 0 ? row[std::size_t(i) - 1] : Cplx(0.0);
      next[std::size_t(i)] = z2 * row[std::size_t(i)] - double(i) * lower;
    }
    row.swap(next);
  }
  return row[std::size_t(m)];
}

// Scaled one-index evaluation: rescales the running pair whenever the
// magnitude leaves [1e-150, 1e150], so any n up to the family cap stays
// representable.
inline ScaledValue scaled_hermite(int n, Cplx z) {
  require_domain(n >= 0, "scaled_hermite: index must be >= 0");
  if (n == 0) return {1.0, 0.0};
  Cplx prev = 1.0, cur = 2.0 * z;
  double log_scale = 0.0;
  for (int k = 1; k < n; ++k) {
    Cplx next = 2.0 * z * cur - 2.0 * double(k) * prev;
    prev = cur;
    cur = next;
    double m = std::abs(cur);
    if (m != 0.0 && (m > 1e150 || m < 1e-150)) {
      cur /= m;
      prev /= m;
      log_scale += std::log(m);
    }
  }
  return {cur, log_scale};
}

// H_0 .. H_{N-1} at one point, sharing a single recurrence sweep.  Each entry
// records the running log scale at the moment it was stored.
inline void scaled_hermite_stack(int N, Cplx z, std::vector<ScaledValue>& out) {
  require_domain(N >= 1, "scaled_hermite_stack: need at least one entry");
  out.resize(std::size_t(N));
  out[0] = {1.0, 0.0};
  if (N == 1) return;
  Cplx prev = 1.0, cur = 2.0 * z;
  double log_scale = 0.0;
  out[1] = {cur, 0.0};
  for (int k = 1; k + 1 < N; ++k) {
    Cplx next = 2.0 * z * cur - 2.0 * double(k) * prev;
    prev = cur;
    cur = next;
    double m = std::abs(cur);
    if (m != 0.0 && (m > 1e150 || m < 1e-150)) {
      cur /= m;
      prev /= m;
      log_scale += std::log(m);
    }
    out[std::size_t(k) + 1] = {cur, log_scale};
  }
}

// Scaled two-index evaluation, same rescaling applied to whole rows.
inline ScaledValue scaled_hermite2(int m, int n, Cplx z1, Cplx z2) {
  require_domain(m >= 0 && n >= 0, "scaled_hermite2: indices must be >= 0");
  std::vector<Cplx> row(std::size_t(m) + 1), next(std::size_t(m) + 1);
  double log_scale = 0.0;
  row[0] = 1.0;
  for (int i = 1; i <= m; ++i) {
    row[std::size_t(i)] = row[std::size_t(i) - 1] * z1;
    double mm = std::abs(row[std::size_t(i)]);
    if (mm != 0.0 && (mm > 1e150 || mm < 1e-150)) {
      for (int t = 0; t <= i; ++t) row[std::size_t(t)] /= mm;
      log_scale += std::log(mm);
    }
  }
  for (int j = 0; j < n; ++j) {
    double maxabs = 0.0;
    for (int i = 0; i <= m; ++i) {
      Cplx lower = i > 0 ? row[std::size_t(i) - 1] : Cplx(0.0);
      next[std::size_t(i)] = z2 * row[std::size_t(i)] - double(i) * lower;
      maxabs = std::max(maxabs, std::abs(next[std::size_t(i)]));
    }
    if (maxabs != 0.0 && (maxabs > 1e150 || maxabs < 1e-150)) {
      for (auto& v : next) v /= maxabs;
      log_scale += std::log(maxabs);
    }
    row.swap(next);
  }
  return {row[std::size_t(m)], log_scale};
}

// Full table of H_{m,n} for 0 <= m < Nm, 0 <= n < Nn, flattened m*Nn + n.
// Rows (fixed n) share one log scale; the second-index recurrence only ever
// consumes the current row, so each row can be rescaled wholesale.
inline void scaled_hermite2_table(int Nm, int Nn, Cplx z1, Cplx z2,
                                  std::vector<ScaledValue>& out) {
  require_domain(Nm >= 1 && Nn >= 1, "scaled_hermite2_table: need at least one entry");
  out.resize(std::size_t(Nm) * std::size_t(Nn));
  std::vector<Cplx> row(static_cast<std::size_t>(Nm)), next(static_cast<std::size_t>(Nm));
  double log_scale = 0.0;
  row[0] = 1.0;
  for (int i = 1; i < Nm; ++i) {
    row[std::size_t(i)] = row[std::size_t(i) - 1] * z1;
    double m = std::abs(row[std::size_t(i)]);
    if (m != 0.0 && (m > 1e150 || m < 1e-150)) {
      for (int t = 0; t <= i; ++t) row[std::size_t(t)] /= m;
      log_scale += std::log(m);
    }
  }
  for (int i = 0; i < Nm; ++i) out[std::size_t(i) * std::size_t(Nn)] = {row[std::size_t(i)], log_scale};
  for (int j = 0; j + 1 < Nn; ++j) {
    double maxabs = 0.0;
    for (int i = 0; i < Nm; ++i) {
      Cplx lower = i > 0 ? row[std::size_t(i) - 1] : Cplx(0.0);
      next[std::size_t(i)] = z2 * row[std::size_t(i)] - double(i) * lower;
      maxabs = std::max(maxabs, std::abs(next[std::size_t(i)]));
    }
    if (maxabs != 0.0 && (maxabs > 1e150 || maxabs < 1e-150)) {
      for (auto& v : next) v /= maxabs;
      log_scale += std::log(maxabs);
    }
    row.swap(next);
    for (int i = 0; i < Nm; ++i)
      out[std::size_t(i) * std::size_t(Nn) + std::size_t(j) + 1] = {row[std::size_t(i)], log_scale};
  }
}

// Partial sum of the two-index generating series
//   sum_{m,n} H_{m,n}(z1,z2) s^m t^n / (m! n!)  ->  exp(z1 s + z2 t - s t),
// truncated rectangularly at m <= M, n <= M.
inline Cplx generating_partial_sum(int M, Cplx s, Cplx t, Cplx z1, Cplx z2) {
  require_domain(M >= 0, "generating_partial_sum: order must be >= 0");
  // Table of H_{m,n} for m, n <= M via the second-index recurrence applied
  // to the seed row H_{m,0} = z1^m.
  std::vector<Cplx> row(std::size_t(M) + 1), next(std::size_t(M) + 1);
  row[0] = 1.0;
  for (int i = 1; i <= M; ++i) row[std::size_t(i)] = row[std::size_t(i) - 1] * z1;
  std::vector<Cplx> spow(std::size_t(M) + 1), tpow(std::size_t(M) + 1);
  for (int i = 0; i <= M; ++i) {
    spow[std::size_t(i)] = (i == 0 ? Cplx(1.0) : spow[std::size_t(i) - 1] * s);
    tpow[std::size_t(i)] = (i == 0 ? Cplx(1.0) : tpow[std::size_t(i) - 1] * t);
  }
  Cplx sum = 0.0;
  for (int j = 0; j <= M; ++j) {
    for (int i = 0; i <= M; ++i)
      sum += row[std::size_t(i)] * spow[std::size_t(i)] * tpow[std::size_t(j)] *
             std::exp(-log_factorial(i) - log_factorial(j));
    for (int i = 0; i <= M; ++i) {
      Cplx lower = i > 0 ? row[std::size_t(i) - 1] : Cplx(0.0);
      next[std::size_t(i)] = z2 * row[std::size_t(i)] - double(i) * lower;
    }
    row.swap(next);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Basis families.
// ---------------------------------------------------------------------------

enum class BasisFamily {
  Monomial1D,       // z^n / sqrt(n!)
  Monomial2D,       // z1^m z2^n / sqrt(m! n!)
  HolHermiteH1D,    // anisotropic-plane orthonormal family h_n
  HolHermiteK1D,    // Gaussian-plane orthonormal deformation k_n
  HolHermiteH2D,    // two-variable family h_{m,n}
  HolHermiteK2D,    // two-variable deformation k_{m,n}
  OscillatorPsi1D,  // real-line Hermite functions psi_n
  OscillatorPsi2D,  // psi_m(q1) psi_n(q2)
  SzegoDisk,        // sqrt(1/2pi) z^n
  BergmanDisk,      // sqrt((n+1)/2pi) z^n
  FactorialRatio,   // n! / (z (z+1) ... (z+n)), Re z > 1/2
};

inline bool is_two_variable(BasisFamily f) {
  return f == BasisFamily::Monomial2D || f == BasisFamily::HolHermiteH2D ||
         f == BasisFamily::HolHermiteK2D || f == BasisFamily::OscillatorPsi2D;
}

inline bool uses_alpha(BasisFamily f) {
  return f == BasisFamily::HolHermiteH1D || f == BasisFamily::HolHermiteK1D ||
         f == BasisFamily::HolHermiteH2D || f == BasisFamily::HolHermiteK2D;
}

inline std::string family_name(BasisFamily f) {
  switch (f) {
    case BasisFamily::Monomial1D: return "Monomial1D";
    case BasisFamily::Monomial2D: return "Monomial2D";
    case BasisFamily::HolHermiteH1D: return "HolHermiteH1D";
    case BasisFamily::HolHermiteK1D: return "HolHermiteK1D";
    case BasisFamily::HolHermiteH2D: return "HolHermiteH2D";
    case BasisFamily::HolHermiteK2D: return "HolHermiteK2D";
    case BasisFamily::OscillatorPsi1D: return "OscillatorPsi1D";
    case BasisFamily::OscillatorPsi2D: return "OscillatorPsi2D";
    case BasisFamily::SzegoDisk: return "SzegoDisk";
    case BasisFamily::BergmanDisk: return "BergmanDisk";
    case BasisFamily::FactorialRatio: return "FactorialRatio";
  }
  throw domain_error("unknown basis family");
}

struct BasisSpec {
  BasisFamily family = BasisFamily::Monomial1D;
  double alpha = 0.5;  // used by the HolHermite* families
  double osc_a = 1.0;  // oscillator length scale, first variable
  double osc_b = 1.0;  // oscillator length scale, second variable
  int max_index = 200; // cap on n (one variable) or m + n (two variables)

  AlphaParam alpha_param() const { return AlphaParam(alpha); }
};

namespace detail {

inline void check_index_cap(const BasisSpec& spec, int total) {
  if (total > spec.max_index)
    throw domain_error("basis index " + std::to_string(total) + " exceeds the cap " +
                       std::to_string(spec.max_index) + " set in BasisSpec::max_index");
}

// z^p as a ScaledValue; p >= 0.
inline ScaledValue scaled_power(Cplx z, int p) {
  if (p == 0) return {1.0, 0.0};
  double m = std::abs(z);
  if (m == 0.0) return {0.0, 0.0};
  ScaledValue out{std::pow(z / m, p), double(p) * std::log(m)};
  return out;
}

inline ScaledValue scaled_psi(double a, int n, Cplx q) {
  // sqrt(a) pi^{-1/4} (2^n n!)^{-1/2} exp(-a^2 q^2 / 2) H_n(a q)
  ScaledValue v = scaled_hermite(n, a * q);
  v.log_scale += 0.5 * std::log(a) - 0.25 * std::log(kPi) -
                 0.5 * (double(n) * std::log(2.0) + log_factorial(n));
  v.mul_exp(-0.5 * a * a * q * q);
  return v;
}

}  // namespace detail

// Scaled evaluation of a one-variable family member.  The exponential factors
// and normalization constants are accumulated in log form; callers combining
// basis values with weights should multiply ScaledValues and release once.
inline ScaledValue basis_eval_scaled(const BasisSpec& spec, int n, Cplx z) {
  require_domain(n >= 0, "basis index must be >= 0");
  require_domain(!is_two_variable(spec.family),
                 family_name(spec.family) + " takes two indices and two points");
  detail::check_index_cap(spec, n);
  switch (spec.family) {
    case BasisFamily::Monomial1D: {
      ScaledValue v = detail::scaled_power(z, n);
      v.log_scale -= 0.5 * log_factorial(n);
      return v;
    }
    case BasisFamily::SzegoDisk: {
      require_domain(std::abs(z) < 1.0, "SzegoDisk needs |z| < 1, got |z| = " +
                                            std::to_string(std::abs(z)));
      ScaledValue v = detail::scaled_power(z, n);
      v.log_scale -= 0.5 * std::log(2.0 * kPi);
      return v;
    }
    case BasisFamily::BergmanDisk: {
      require_domain(std::abs(z) < 1.0, "BergmanDisk needs |z| < 1, got |z| = " +
                                            std::to_string(std::abs(z)));
      ScaledValue v = detail::scaled_power(z, n);
      v.log_scale += 0.5 * std::log(double(n) + 1.0) - 0.5 * std::log(2.0 * kPi);
      return v;
    }
    case BasisFamily::FactorialRatio: {
      require_domain(z.real() > 0.5,
                     "FactorialRatio is defined for Re z > 1/2, got Re z = " +
                         std::to_string(z.real()));
      Cplx logprod = 0.0;
      for (int j = 0; j <= n; ++j) logprod += std::log(z + double(j));
      ScaledValue v{1.0, log_factorial(n)};
      v.mul_exp(-logprod);
      return v;
    }
    case BasisFamily::OscillatorPsi1D: {
      require_domain(spec.osc_a > 0.0, "oscillator scale must be positive");
      return detail::scaled_psi(spec.osc_a, n, z);
    }
    case BasisFamily::HolHermiteH1D: {
      AlphaParam ap = spec.alpha_param();
      // c_n = (pi sqrt(alpha)/(1-alpha)) (2(1+alpha)/(1-alpha))^n n!
      double log_cn = std::log(kPi * std::sqrt(ap.alpha) / (1.0 - ap.alpha)) +
                      double(n) * std::log(2.0 * (1.0 + ap.alpha) / (1.0 - ap.alpha)) +
                      log_factorial(n);
      ScaledValue v = scaled_hermite(n, z);
      v.log_scale -= 0.5 * log_cn;
      v.mul_exp(-0.5 * z * z);
      return v;
    }
    case BasisFamily::HolHermiteK1D: {
      AlphaParam ap = spec.alpha_param();
      double beta = std::sqrt(2.0 * ap.alpha / (1.0 - ap.alpha * ap.alpha));
      ScaledValue v = scaled_hermite(n, beta * z);
      v.log_scale += 0.5 * std::log(2.0 * std::sqrt(ap.alpha) / (1.0 + ap.alpha)) +
                     0.5 * double(n) * std::log(0.5 * ap.eps) - 0.5 * log_factorial(n);
      v.mul_exp(0.5 * ap.eps * z * z);
      return v;
    }
    default:
      throw domain_error(family_name(spec.family) + " is not a one-variable family");
  }
}

// Scaled evaluation of a two-variable family member.
inline ScaledValue basis_eval_scaled(const BasisSpec& spec, int m, int n, Cplx z1, Cplx z2) {
  require_domain(m >= 0 && n >= 0, "basis indices must be >= 0");
  require_domain(is_two_variable(spec.family),
                 family_name(spec.family) + " takes one index and one point");
  detail::check_index_cap(spec, m + n);
  switch (spec.family) {
    case BasisFamily::Monomial2D: {
      ScaledValue v = detail::scaled_power(z1, m) * detail::scaled_power(z2, n);
      v.log_scale -= 0.5 * (log_factorial(m) + log_factorial(n));
      return v;
    }
    case BasisFamily::OscillatorPsi2D: {
      require_domain(spec.osc_a > 0.0 && spec.osc_b > 0.0,
                     "oscillator scales must be positive");
      return detail::scaled_psi(spec.osc_a, m, z1) * detail::scaled_psi(spec.osc_b, n, z2);
    }
    case BasisFamily::HolHermiteH2D: {
      AlphaParam ap = spec.alpha_param();
      ScaledValue v = scaled_hermite2(m, n, z1, z2);
      v.log_scale += std::log((1.0 - ap.alpha) / (kPi * std::sqrt(ap.alpha))) +
                     0.5 * double(m + n) * std::log(ap.eps) -
                     0.5 * (log_factorial(m) + log_factorial(n));
      v.mul_exp(-0.5 * z1 * z2);
      return v;
    }
    case BasisFamily::HolHermiteK2D: {
      AlphaParam ap = spec.alpha_param();
      double lambda = 2.0 * std::sqrt(ap.alpha) / std::sqrt(1.0 - ap.alpha * ap.alpha);
      ScaledValue v = scaled_hermite2(m, n, lambda * z1, lambda * z2);
      v.log_scale += std::log(2.0 * std::sqrt(ap.alpha) / (1.0 + ap.alpha)) +
                     0.5 * double(m + n) * std::log(ap.eps) -
                     0.5 * (log_factorial(m) + log_factorial(n));
      v.mul_exp(ap.eps * z1 * z2);
      return v;
    }
    default:
      throw domain_error(family_name(spec.family) + " is not a two-variable family");
  }
}

inline Cplx basis_eval(const BasisSpec& spec, int n, Cplx z) {
  return basis_eval_scaled(spec, n, z).value();
}

inline Cplx basis_eval(const BasisSpec& spec, int m, int n, Cplx z1, Cplx z2) {
  return basis_eval_scaled(spec, m, n, z1, z2).value();
}

// ---------------------------------------------------------------------------
// Stacks: all members 0..N-1 of a family at one point, sharing the recurrence
// sweep.  Kernel partial sums, Gram matrices and transform columns all walk
// whole index ranges per point, so this is the workhorse entry path.  Ratio
// recurrences here and direct formulas in basis_eval_scaled are deliberately
// separate routes; tests pin them against each other.
// ---------------------------------------------------------------------------

inline void basis_stack(const BasisSpec& spec, int N, Cplx z, std::vector<ScaledValue>& out) {
  require_domain(N >= 1, "basis_stack: need at least one entry");
  require_domain(!is_two_variable(spec.family),
                 family_name(spec.family) + " takes two indices and two points");
  detail::check_index_cap(spec, N - 1);
  out.resize(std::size_t(N));
  switch (spec.family) {
    case BasisFamily::Monomial1D: {
      ScaledValue p{1.0, 0.0};
      for (int n = 0; n < N; ++n) {
        out[std::size_t(n)] = p;
        out[std::size_t(n)].log_scale -= 0.5 * log_factorial(n);
        p.mul(z);
        double m = std::abs(p.mantissa);
        if (m != 0.0 && (m > 1e150 || m < 1e-150)) {
          p.mantissa /= m;
          p.log_scale += std::log(m);
        }
      }
      return;
    }
    case BasisFamily::SzegoDisk: {
      require_domain(std::abs(z) < 1.0, "SzegoDisk needs |z| < 1, got |z| = " +
                                            std::to_string(std::abs(z)));
      ScaledValue p{1.0, -0.5 * std::log(2.0 * kPi)};
      for (int n = 0; n < N; ++n) {
        out[std::size_t(n)] = p;
        p.mul(z);
      }
      return;
    }
    case BasisFamily::BergmanDisk: {
      require_domain(std::abs(z) < 1.0, "BergmanDisk needs |z| < 1, got |z| = " +
                                            std::to_string(std::abs(z)));
      ScaledValue p{1.0, -0.5 * std::log(2.0 * kPi)};
      for (int n = 0; n < N; ++n) {
        out[std::size_t(n)] = p;
        out[std::size_t(n)].log_scale += 0.5 * std::log(double(n) + 1.0);
        p.mul(z);
      }
      return;
    }
    case BasisFamily::FactorialRatio: {
      require_domain(z.real() > 0.5,
                     "FactorialRatio is defined for Re z > 1/2, got Re z = " +
                         std::to_string(z.real()));
      ScaledValue p{1.0, 0.0};
      p.mul_exp(-std::log(z));
      out[0] = p;
      for (int n = 1; n < N; ++n) {
        p.mul_exp(std::log(double(n)) - std::log(z + double(n)));
        out[std::size_t(n)] = p;
      }
      return;
    }
    case BasisFamily::OscillatorPsi1D: {
      require_domain(spec.osc_a > 0.0, "oscillator scale must be positive");
      double a = spec.osc_a;
      scaled_hermite_stack(N, a * z, out);
      for (int n = 0; n < N; ++n) {
        out[std::size_t(n)].log_scale +=
            0.5 * std::log(a) - 0.25 * std::log(kPi) -
            0.5 * (double(n) * std::log(2.0) + log_factorial(n));
        out[std::size_t(n)].mul_exp(-0.5 * a * a * z * z);
      }
      return;
    }
    case BasisFamily::HolHermiteH1D: {
      AlphaParam ap = spec.alpha_param();
      double log_c0 = std::log(kPi * std::sqrt(ap.alpha) / (1.0 - ap.alpha));
      double log_ratio = std::log(2.0 * (1.0 + ap.alpha) / (1.0 - ap.alpha));
      scaled_hermite_stack(N, z, out);
      for (int n = 0; n < N; ++n) {
        out[std::size_t(n)].log_scale -=
            0.5 * (log_c0 + double(n) * log_ratio + log_factorial(n));
        out[std::size_t(n)].mul_exp(-0.5 * z * z);
      }
      return;
    }
    case BasisFamily::HolHermiteK1D: {
      AlphaParam ap = spec.alpha_param();
      double beta = std::sqrt(2.0 * ap.alpha / (1.0 - ap.alpha * ap.alpha));
      double log_pre = 0.5 * std::log(2.0 * std::sqrt(ap.alpha) / (1.0 + ap.alpha));
      scaled_hermite_stack(N, beta * z, out);
      for (int n = 0; n < N; ++n) {
        out[std::size_t(n)].log_scale +=
            log_pre + 0.5 * double(n) * std::log(0.5 * ap.eps) - 0.5 * log_factorial(n);
        out[std::size_t(n)].mul_exp(0.5 * ap.eps * z * z);
      }
      return;
    }
    default:
      throw domain_error(family_name(spec.family) + " is not a one-variable family");
  }
}

// Two-variable stack over 0 <= m, n < N, flattened row-major as m*N + n (the
// same flattening every two-mode matrix in this library uses).
inline void basis_stack(const BasisSpec& spec, int N, Cplx z1, Cplx z2,
                        std::vector<ScaledValue>& out) {
  require_domain(N >= 1, "basis_stack: need at least one entry");
  require_domain(is_two_variable(spec.family),
                 family_name(spec.family) + " takes one index and one point");
  detail::check_index_cap(spec, 2 * (N - 1));
  out.resize(std::size_t(N) * std::size_t(N));
  switch (spec.family) {
    case BasisFamily::Monomial2D: {
      BasisSpec s1 = spec;
      s1.family = BasisFamily::Monomial1D;
      std::vector<ScaledValue> s1v, s2v;
      basis_stack(s1, N, z1, s1v);
      basis_stack(s1, N, z2, s2v);
      for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n)
          out[std::size_t(m) * std::size_t(N) + std::size_t(n)] =
              s1v[std::size_t(m)] * s2v[std::size_t(n)];
      return;
    }
    case BasisFamily::OscillatorPsi2D: {
      require_domain(spec.osc_a > 0.0 && spec.osc_b > 0.0,
                     "oscillator scales must be positive");
      BasisSpec s1 = spec;
      s1.family = BasisFamily::OscillatorPsi1D;
      BasisSpec s2 = s1;
      s2.osc_a = spec.osc_b;
      std::vector<ScaledValue> s1v, s2v;
      basis_stack(s1, N, z1, s1v);
      basis_stack(s2, N, z2, s2v);
      for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n)
          out[std::size_t(m) * std::size_t(N) + std::size_t(n)] =
              s1v[std::size_t(m)] * s2v[std::size_t(n)];
      return;
    }
    case BasisFamily::HolHermiteH2D: {
      AlphaParam ap = spec.alpha_param();
      scaled_hermite2_table(N, N, z1, z2, out);
      double log_pre = std::log((1.0 - ap.alpha) / (kPi * std::sqrt(ap.alpha)));
      for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n) {
          ScaledValue& v = out[std::size_t(m) * std::size_t(N) + std::size_t(n)];
          v.log_scale += log_pre + 0.5 * double(m + n) * std::log(ap.eps) -
                         0.5 * (log_factorial(m) + log_factorial(n));
          v.mul_exp(-0.5 * z1 * z2);
        }
      return;
    }
    case BasisFamily::HolHermiteK2D: {
      AlphaParam ap = spec.alpha_param();
      double lambda = 2.0 * std::sqrt(ap.alpha) / std::sqrt(1.0 - ap.alpha * ap.alpha);
      scaled_hermite2_table(N, N, lambda * z1, lambda * z2, out);
      double log_pre = std::log(2.0 * std::sqrt(ap.alpha) / (1.0 + ap.alpha));
      for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n) {
          ScaledValue& v = out[std::size_t(m) * std::size_t(N) + std::size_t(n)];
          v.log_scale += log_pre + 0.5 * double(m + n) * std::log(ap.eps) -
                         0.5 * (log_factorial(m) + log_factorial(n));
          v.mul_exp(ap.eps * z1 * z2);
        }
      return;
    }
    default:
      throw domain_error(family_name(spec.family) + " is not a two-variable family");
  }
}

}  // namespace hcs
