#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hcs {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Arguments outside an operation's documented domain.
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation that cannot deliver a finite, trustworthy result:
// overflow after log stabilization, a non-convergent series, singular input.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_domain(bool ok, const std::string& msg) {
  if (!ok) throw domain_error(msg);
}

// ln(n!) via lgamma; accurate to double rounding over the index ranges used here.
inline double log_factorial(int n) {
  return std::lgamma(double(n) + 1.0);
}

// Deformation parameter of the anisotropic Gaussian weights, valid strictly
// inside (0,1).  eps = (1-alpha)/(1+alpha) appears in most closed forms, so it
// is carried along.
struct AlphaParam {
  double alpha;
  double eps;

  explicit AlphaParam(double a) : alpha(a), eps((1.0 - a) / (1.0 + a)) {
    require_domain(a > 0.0 && a < 1.0,
                   "alpha must satisfy 0 < alpha < 1, got " + std::to_string(a));
  }
};

// Value held as mantissa * exp(log_scale).  Lets long recurrences and
// products of large exponentials run without overflow; the exponent is
// assembled once and released at the end.
struct ScaledValue {
  Cplx mantissa{0.0, 0.0};
  double log_scale = 0.0;

  // Fold in a multiplicative factor exp(c): modulus goes to the log part,
  // phase stays on the mantissa.
  void mul_exp(Cplx c) {
    log_scale += c.real();
    mantissa *= Cplx(std::cos(c.imag()), std::sin(c.imag()));
  }

  void mul(Cplx f) { mantissa *= f; }

  ScaledValue operator*(const ScaledValue& o) const {
    return {mantissa * o.mantissa, log_scale + o.log_scale};
  }

  Cplx value() const {
    double m = std::abs(mantissa);
    if (m == 0.0) return {0.0, 0.0};
    double lg = log_scale + std::log(m);
    if (lg > 709.0)
      throw numeric_error("exponent overflow releasing scaled value, log magnitude " +
                          std::to_string(lg));
    return (mantissa / m) * std::exp(lg);
  }
};

}  // namespace hcs
