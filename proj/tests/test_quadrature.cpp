#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "hcs/quadrature.hpp"
#include "oracles.hpp"

using hcs::BasisFamily;
using hcs::BasisSpec;
using hcs::Cplx;
using hcs::GramWeight;

namespace {

// int x^a exp(-s x^2) dx over the line.
double gauss_moment(int a, double s) {
  if (a % 2 == 1) return 0.0;
  return std::tgamma(0.5 * (double(a) + 1.0)) / std::pow(s, 0.5 * (double(a) + 1.0));
}

double max_off_identity(const Eigen::MatrixXcd& G) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < G.rows(); ++r)
    for (Eigen::Index c = 0; c < G.cols(); ++c) {
      Cplx want = r == c ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(G(r, c) - want));
    }
  return worst;
}

}  // namespace

TEST_CASE("grid construction rejects bad arguments") {
  CHECK_THROWS_AS(hcs::build_grid(1, 1.0, 1.0), hcs::domain_error);
  CHECK_THROWS_AS(hcs::build_grid(10, 0.0, 1.0), hcs::domain_error);
  CHECK_THROWS_AS(hcs::gauss_hermite(0, 1.0), hcs::domain_error);
}

TEST_CASE("axis rules integrate Gaussian moments exactly") {
  for (int order : {2, 3, 7, 20, 41}) {
    for (double s : {1.0, 0.37, 2.6}) {
      hcs::GaussHermiteRule r = hcs::gauss_hermite(order, s);
      for (int a = 0; a <= 2 * order - 1; ++a) {
        double got = 0.0, mag = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
          double term = r.weights[i] * std::pow(r.nodes[i], a);
          got += term;
          mag += std::abs(term);
        }
        double want = gauss_moment(a, s);
        INFO("order " << order << " scale " << s << " degree " << a);
        // Odd moments vanish by cancellation, so the error scale is the
        // absolute moment, not the (zero) value.
        CHECK(std::abs(got - want) <= 1e-11 * std::max(1.0, mag));
      }
    }
  }
}

TEST_CASE("axis nodes are exactly symmetric") {
  hcs::GaussHermiteRule r = hcs::gauss_hermite(31, 0.8);
  for (int i = 0; i < 15; ++i) {
    CHECK(r.nodes[std::size_t(i)] == -r.nodes[std::size_t(30 - i)]);
    CHECK(r.weights[std::size_t(i)] == r.weights[std::size_t(30 - i)]);
  }
  CHECK(r.nodes[15] == 0.0);
}

TEST_CASE("plane integration reproduces known Gaussian integrals") {
  hcs::QuadratureGrid g = hcs::build_grid(8, 1.0, 1.0);
  // f == 1 against e^{-x^2-y^2} -> pi.
  Cplx mass = hcs::integrate_plane([](Cplx) { return Cplx(1.0); }, g);
  CHECK(std::abs(mass - hcs::kPi) <= 1e-12 * hcs::kPi);
  // |z|^2 against e^{-|z|^2}/pi -> 1.
  Cplx second = hcs::integrate_plane(
      [](Cplx z) { return Cplx(std::norm(z) / hcs::kPi); }, g);
  CHECK(std::abs(second - 1.0) <= 1e-12);
  // x^4 against e^{-x^2-y^2} -> 3 pi / 4.
  Cplx fourth = hcs::integrate_plane(
      [](Cplx z) { return Cplx(std::pow(z.real(), 4)); }, g);
  CHECK(std::abs(fourth - 0.75 * hcs::kPi) <= 1e-12 * hcs::kPi);
  // Odd integrand cancels to the last bit thanks to exact node symmetry.
  Cplx odd = hcs::integrate_plane([](Cplx z) { return z; }, g);
  CHECK(std::abs(odd) <= 1e-15);
  // f == 0.
  Cplx zero = hcs::integrate_plane([](Cplx) { return Cplx(0.0); }, g);
  CHECK(std::abs(zero) == 0.0);
}

TEST_CASE("grid scaling with compensating substitution leaves integrals unchanged") {
  auto poly = [](double x, double y) {
    return std::pow(x, 6) * std::pow(y, 4) + 2.0 * x * x * y * y + 5.0;
  };
  hcs::QuadratureGrid base = hcs::build_grid(12, 1.0, 1.0);
  Cplx ref = hcs::integrate_plane([&](Cplx z) { return Cplx(poly(z.real(), z.imag())); }, base);
  for (double c : {0.25, 3.0}) {
    // x = sqrt(c) u maps weight e^{-x^2} to e^{-c u^2} with dx = sqrt(c) du.
    hcs::QuadratureGrid g = hcs::build_grid(12, c, 1.0);
    Cplx got = hcs::integrate_plane(
        [&](Cplx z) { return Cplx(std::sqrt(c) * poly(std::sqrt(c) * z.real(), z.imag())); },
        g);
    CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref));
  }
}

TEST_CASE("non-finite integrands are reported with the offending node") {
  hcs::QuadratureGrid g = hcs::build_grid(4, 1.0, 1.0);
  auto bad = [](Cplx) { return Cplx(std::nan(""), 0.0); };
  CHECK_THROWS_MATCHES(hcs::integrate_plane(bad, g), hcs::numeric_error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("not finite at node")));
}

TEST_CASE("two-plane integration against the product Bargmann weight") {
  hcs::QuadratureGrid g = hcs::build_grid(6, 1.0, 1.0);
  Cplx one = hcs::integrate_plane2(
      [](Cplx, Cplx) { return Cplx(1.0 / (hcs::kPi * hcs::kPi)); }, g, g);
  CHECK(std::abs(one - 1.0) <= 1e-12);
  Cplx mixed = hcs::integrate_plane2(
      [](Cplx z1, Cplx z2) { return std::norm(z1) * z2 / (hcs::kPi * hcs::kPi); }, g, g);
  CHECK(std::abs(mixed) <= 1e-14);
}

TEST_CASE("raw one-variable orthogonality integrals match the closed right side") {
  double alpha = 0.5;
  auto cn = [&](int n) {
    return hcs::kPi * std::sqrt(alpha) / (1.0 - alpha) *
           std::pow(2.0 * (1.0 + alpha) / (1.0 - alpha), n) * oracle::factorial(n);
  };
  for (int n = 0; n <= 6; ++n) {
    Cplx got = hcs::hermite1d_orthogonality_integral(alpha, n, n, 60);
    CHECK(std::abs(got - cn(n)) <= 1e-10 * cn(n));
  }
  for (auto [m, n] : std::vector<std::pair<int, int>>{{0, 1}, {2, 5}, {1, 4}}) {
    Cplx got = hcs::hermite1d_orthogonality_integral(alpha, m, n, 60);
    CHECK(std::abs(got) <= 1e-10 * std::sqrt(cn(m) * cn(n)));
  }
}

TEST_CASE("raw two-variable orthogonality integrals match Gaussian moments") {
  // At alpha = 1/2 the axis Gaussians have su = 1/2, sv = 1; the low-index
  // diagonal values below were computed by hand from the moments
  // <|u|^2> = 1/su, <|u|^4> = 2/su^2 of those Gaussians.
  double pi2 = hcs::kPi * hcs::kPi;
  Cplx v00 = hcs::hermite2d_orthogonality_integral(0.5, 0, 0, 0, 0, 24);
  CHECK(std::abs(v00 - 2.0 * pi2) <= 1e-10 * pi2);
  Cplx v10 = hcs::hermite2d_orthogonality_integral(0.5, 1, 0, 1, 0, 24);
  CHECK(std::abs(v10 - 6.0 * pi2) <= 1e-10 * pi2);
  Cplx v11 = hcs::hermite2d_orthogonality_integral(0.5, 1, 1, 1, 1, 24);
  CHECK(std::abs(v11 - 18.0 * pi2) <= 1e-9 * pi2);

  // General diagonal: pi^2 alpha/(1-alpha)^2 ((1+alpha)/(1-alpha))^{m+n} m! n!.
  for (double alpha : {0.3, 0.7}) {
    double pre = pi2 * alpha / ((1.0 - alpha) * (1.0 - alpha));
    double ratio = (1.0 + alpha) / (1.0 - alpha);
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= 3; ++n) {
        Cplx got = hcs::hermite2d_orthogonality_integral(alpha, m, n, m, n, 24);
        double want = pre * std::pow(ratio, m + n) * oracle::factorial(m) *
                      oracle::factorial(n);
        CHECK(std::abs(got - want) <= 1e-9 * want);
      }
  }

  // Distinct index pairs vanish.
  double diag_scale = 18.0 * pi2;
  for (auto [m, n, p, q] : std::vector<std::array<int, 4>>{
           {0, 0, 1, 1}, {1, 0, 0, 1}, {2, 1, 1, 2}, {0, 2, 0, 1}}) {
    Cplx got = hcs::hermite2d_orthogonality_integral(0.5, m, n, p, q, 24);
    CHECK(std::abs(got) <= 1e-9 * diag_scale);
  }
}

TEST_CASE("gram matrices of orthonormal families are the identity") {
  struct Case {
    BasisSpec spec;
    int n;
    int order;
    double tol;
  };
  std::vector<Case> cases;
  cases.push_back({BasisSpec{BasisFamily::Monomial1D}, 8, 40, 1e-10});
  {
    BasisSpec k1{BasisFamily::HolHermiteK1D};
    k1.alpha = 0.5;
    cases.push_back({k1, 10, 80, 1e-8});
    BasisSpec h1{BasisFamily::HolHermiteH1D};
    h1.alpha = 0.5;
    cases.push_back({h1, 10, 80, 1e-8});
    BasisSpec psi{BasisFamily::OscillatorPsi1D};
    psi.osc_a = 1.3;
    cases.push_back({psi, 10, 80, 1e-10});
  }
  for (const auto& c : cases) {
    Eigen::MatrixXcd G =
        hcs::gram_matrix(c.spec, hcs::natural_gram_weight(c.spec.family), c.n, c.order);
    INFO(hcs::family_name(c.spec.family));
    REQUIRE(G.rows() == c.n);
    CHECK(max_off_identity(G) <= c.tol);
  }

  struct Case2 {
    BasisSpec spec;
    int n;
    int order;
    double tol;
  };
  std::vector<Case2> cases2;
  cases2.push_back({BasisSpec{BasisFamily::Monomial2D}, 3, 24, 1e-10});
  {
    BasisSpec h2{BasisFamily::HolHermiteH2D};
    h2.alpha = 0.5;
    cases2.push_back({h2, 4, 40, 1e-6});
    BasisSpec k2{BasisFamily::HolHermiteK2D};
    k2.alpha = 0.5;
    cases2.push_back({k2, 3, 24, 1e-8});
    BasisSpec psi2{BasisFamily::OscillatorPsi2D};
    psi2.osc_a = 0.9;
    psi2.osc_b = 1.4;
    cases2.push_back({psi2, 3, 24, 1e-10});
  }
  for (const auto& c : cases2) {
    Eigen::MatrixXcd G =
        hcs::gram_matrix(c.spec, hcs::natural_gram_weight(c.spec.family), c.n, c.order);
    INFO(hcs::family_name(c.spec.family));
    REQUIRE(G.rows() == c.n * c.n);
    CHECK(max_off_identity(G) <= c.tol);
  }
}

TEST_CASE("gram off-diagonals stay at the rule's floor as order grows") {
  // The matched-scale grids integrate these Grams exactly, so doubling the
  // order can only move the off-diagonal maximum within rounding noise; the
  // check is monotone decrease up to that floor.
  const double floor_1d = 5e-13, floor_2d = 5e-12;
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (BasisFamily f : {BasisFamily::HolHermiteH1D, BasisFamily::HolHermiteK1D}) {
      BasisSpec s{f};
      s.alpha = alpha;
      double prev = 1e300;
      for (int order : {20, 40, 80}) {
        double off = max_off_identity(
            hcs::gram_matrix(s, hcs::natural_gram_weight(f), 6, order));
        INFO(hcs::family_name(f) << " alpha " << alpha << " order " << order);
        CHECK(off <= std::max(prev, floor_1d));
        prev = off;
      }
      CHECK(prev <= floor_1d);
    }
    for (BasisFamily f : {BasisFamily::HolHermiteH2D, BasisFamily::HolHermiteK2D}) {
      BasisSpec s{f};
      s.alpha = alpha;
      double prev = 1e300;
      for (int order : {20, 40, 80}) {
        double off = max_off_identity(
            hcs::gram_matrix(s, hcs::natural_gram_weight(f), 2, order));
        INFO(hcs::family_name(f) << " alpha " << alpha << " order " << order);
        CHECK(off <= std::max(prev, floor_2d));
        prev = off;
      }
      CHECK(prev <= floor_2d);
    }
  }
  for (BasisFamily f : {BasisFamily::Monomial1D, BasisFamily::OscillatorPsi1D}) {
    double prev = 1e300;
    for (int order : {20, 40, 80}) {
      double off =
          max_off_identity(hcs::gram_matrix(BasisSpec{f}, hcs::natural_gram_weight(f), 6, order));
      CHECK(off <= std::max(prev, floor_1d));
      prev = off;
    }
  }
  for (BasisFamily f : {BasisFamily::Monomial2D, BasisFamily::OscillatorPsi2D}) {
    double prev = 1e300;
    for (int order : {20, 40, 80}) {
      double off =
          max_off_identity(hcs::gram_matrix(BasisSpec{f}, hcs::natural_gram_weight(f), 2, order));
      CHECK(off <= std::max(prev, floor_2d));
      prev = off;
    }
  }
}

TEST_CASE("gram pairing and argument validation") {
  BasisSpec h1{BasisFamily::HolHermiteH1D};
  CHECK_THROWS_AS(hcs::gram_matrix(h1, GramWeight::Bargmann1D, 4, 20), hcs::domain_error);
  BasisSpec szego{BasisFamily::SzegoDisk};
  CHECK_THROWS_AS(hcs::natural_gram_weight(szego.family), hcs::domain_error);
  BasisSpec mono{BasisFamily::Monomial1D};
  CHECK_THROWS_AS(hcs::gram_matrix(mono, GramWeight::Bargmann1D, 0, 20), hcs::domain_error);
}

TEST_CASE("extreme alpha values trigger a degradation warning") {
  BasisSpec h1{BasisFamily::HolHermiteH1D};
  h1.alpha = 0.97;
  std::vector<std::string> warnings;
  hcs::gram_matrix(h1, GramWeight::VanEM1D, 2, 12, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("outside [0.05, 0.95]") != std::string::npos);
  warnings.clear();
  h1.alpha = 0.5;
  hcs::gram_matrix(h1, GramWeight::VanEM1D, 2, 12, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("caller-supplied grids with mismatched scales still converge") {
  // A (1,1)-scaled grid is not matched to the k-family integrand; the log
  // compensation keeps every node finite and the answer still lands on the
  // identity, just with visible quadrature error instead of exactness.
  BasisSpec k1{BasisFamily::HolHermiteK1D};
  k1.alpha = 0.5;
  hcs::QuadratureGrid g = hcs::build_grid(60, 1.0, 1.0);
  Eigen::MatrixXcd G = hcs::gram_matrix(k1, GramWeight::Bargmann1D, 4, g);
  CHECK(max_off_identity(G) <= 1e-6);
}
