#pragma once
// Schmidt analysis of two-mode coefficient matrices.
//
// A two-mode expansion f = sum c_{mn} e_m x e_n factorizes into a product of
// one-mode states exactly when the matrix (c_{mn}) has rank one; otherwise
// the state is entangled and the singular values sigma_i quantify how far
// from a product it is.  With p_i = sigma_i^2 / sum_j sigma_j^2 the
// entanglement entropy is H = -sum p_i ln p_i, zero precisely in the
// rank-one case.
//
// For the deformed coherent family at z1 = z2 = 0 the coefficient matrix is
// diagonal with entries sigma (-eps)^m, so the Schmidt spectrum is the
// geometric distribution p_m ~ eps^{2m}: entangled for every alpha < 1,
// with entropy sliding to zero as alpha -> 1- together with the squeezing.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hcs/states.hpp"
#include "hcs/types.hpp"

namespace hcs {

struct SchmidtResult {
  std::vector<double> singular_values;  // nonincreasing
  double entropy = 0.0;                 // -sum p_i ln p_i, natural log
  double entropy_log2 = 0.0;            // the same in bits
  int effective_rank = 0;               // count of sigma_i > rank_tol * sigma_1
};

namespace detail {

inline Eigen::JacobiSVD<Eigen::MatrixXcd> coeff_svd(const CoeffMatrix& state, bool vectors,
                                                    const char* who) {
  require_domain(state.dim >= 1 && state.coeffs.rows() == state.dim &&
                     state.coeffs.cols() == state.dim,
                 std::string(who) + ": square coefficient matrix required");
  unsigned options = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state.coeffs, options);
  require_domain(svd.singularValues()(0) > 0.0, std::string(who) + ": zero matrix");
  return svd;
}

inline void spectrum_entropy(const Eigen::VectorXd& sigma, double rank_tol, SchmidtResult& out) {
  double total = sigma.squaredNorm();
  out.singular_values.assign(sigma.data(), sigma.data() + sigma.size());
  out.entropy = 0.0;
  out.effective_rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    double p = sigma(i) * sigma(i) / total;
    if (p > 0.0) out.entropy -= p * std::log(p);
    if (sigma(i) > rank_tol * sigma(0)) ++out.effective_rank;
  }
  out.entropy = std::max(out.entropy, 0.0);
  out.entropy_log2 = out.entropy / std::log(2.0);
}

}  // namespace detail

// rank_tol is relative to the largest singular value; the default sits at
// the double-precision SVD noise floor.
inline SchmidtResult schmidt(const CoeffMatrix& state, double rank_tol = 1e-10) {
  require_domain(rank_tol > 0.0 && rank_tol < 1.0, "schmidt: rank_tol must lie in (0, 1)");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd = detail::coeff_svd(state, false, "schmidt");
  SchmidtResult out;
  detail::spectrum_entropy(svd.singularValues(), rank_tol, out);
  return out;
}

struct EntropyPoint {
  double alpha = 0.0;
  double entropy = 0.0;
  double entropy_log2 = 0.0;
  double tail_fraction = 0.0;     // truncation-tail report of the state
  bool truncation_warning = false;
};

// Entropy of the deformed coherent state c^(alpha)_{z1,z2} per alpha.  The
// expected shape is entropy -> 0 as alpha -> 1-; each point carries the
// coefficient-tail report so under-truncated values can be discounted.
inline std::vector<EntropyPoint> alpha_entropy_sweep(Cplx z1, Cplx z2,
                                                     const std::vector<double>& alphas, int N) {
  require_domain(N >= 8, "alpha_entropy_sweep: need N >= 8 per mode");
  require_domain(!alphas.empty(), "alpha_entropy_sweep: empty alpha list");
  std::vector<EntropyPoint> curve;
  curve.reserve(alphas.size());
  for (double a : alphas) {
    CoeffMatrix c = coherent_state(z1, z2, AlphaParam(a), N);
    SchmidtResult s = schmidt(c);
    curve.push_back({a, s.entropy, s.entropy_log2, c.tail_fraction, c.truncation_warning});
  }
  return curve;
}

struct FactorizationWitness {
  // Present when the matrix is rank one at the given tolerance; the factors
  // (u sqrt(sigma_1), conj(v) sqrt(sigma_1)) reproduce c_{mn} = left_m right_n.
  std::optional<std::pair<FockVector, FockVector>> factors;
  // Best rank-one misfit ||C - sigma_1 u v^H||_F / ||C||_F, always reported.
  double residual = 0.0;
};

inline FactorizationWitness factorization_witness(const CoeffMatrix& state, double tol = 1e-10) {
  require_domain(tol > 0.0 && tol < 1.0, "factorization_witness: tol must lie in (0, 1)");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd =
      detail::coeff_svd(state, true, "factorization_witness");
  const Eigen::VectorXd& sigma = svd.singularValues();
  FactorizationWitness out;
  double rest = sigma.size() > 1 ? sigma.tail(sigma.size() - 1).squaredNorm() : 0.0;
  out.residual = std::sqrt(rest / sigma.squaredNorm());
  if (sigma.size() > 1 && sigma(1) > tol * sigma(0)) return out;

  double root = std::sqrt(sigma(0));
  FockVector left, right;
  left.dim = right.dim = state.dim;
  left.coeffs.resize(std::size_t(state.dim));
  right.coeffs.resize(std::size_t(state.dim));
  for (int i = 0; i < state.dim; ++i) {
    left.coeffs[std::size_t(i)] = root * svd.matrixU()(i, 0);
    right.coeffs[std::size_t(i)] = root * std::conj(svd.matrixV()(i, 0));
  }
  out.factors.emplace(std::move(left), std::move(right));
  return out;
}

}  // namespace hcs
