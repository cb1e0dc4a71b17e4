#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hcs/bargmann.hpp"
#include "hcs/hermite.hpp"
#include "hcs/quadrature.hpp"
#include "oracles.hpp"

using hcs::BasisFamily;
using hcs::BasisSpec;
using hcs::Cplx;
using hcs::TransformKind;
using hcs::TransformSpec;

namespace {

void check_close(Cplx got, Cplx want, double tol) {
  INFO("got " << got << " want " << want);
  CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

// Every kernel is the generating function of its source/target ladder pair:
// K(s1, s2) = sum_n f_n(s1) g_n(s2), the families read off the slot they
// occupy.  The partial sums converge geometrically for arguments inside the
// unit box, which makes them an oracle independent of the closed forms.
Cplx ladder_sum_1(const BasisSpec& f1, const BasisSpec& f2, Cplx s1, Cplx s2, int terms) {
  Cplx acc(0.0, 0.0);
  for (int n = 0; n < terms; ++n) acc += hcs::basis_eval(f1, n, s1) * hcs::basis_eval(f2, n, s2);
  return acc;
}

Cplx ladder_sum_2(const BasisSpec& f1, const BasisSpec& f2, Cplx a1, Cplx a2, Cplx b1, Cplx b2,
                  int terms) {
  Cplx acc(0.0, 0.0);
  for (int m = 0; m < terms; ++m)
    for (int n = 0; n < terms; ++n)
      acc += hcs::basis_eval(f1, m, n, a1, a2) * hcs::basis_eval(f2, m, n, b1, b2);
  return acc;
}

const std::vector<Cplx> kSlotPts = {{0.3, 0.2}, {-0.5, 0.4}, {0.7, 0.0}, {0.1, -0.6}};

BasisSpec make_basis(BasisFamily fam, double alpha, double a = 1.0, double b = 1.0) {
  BasisSpec s;
  s.family = fam;
  s.alpha = alpha;
  s.osc_a = a;
  s.osc_b = b;
  return s;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXcd identity_defect(const Eigen::MatrixXcd& m) {
  return m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
}

}  // namespace

TEST_CASE("kernel prefactors at the origin", "[bargmann]") {
  const double a = 1.0, al = 0.5;
  TransformSpec a1{TransformKind::A1, a, 1.0, {}};
  check_close(hcs::sb_kernel(a1, 0.0, 0.0), std::pow(hcs::kPi, -0.25), 1e-14);

  TransformSpec b1{TransformKind::B1, 1.0, 1.0, hcs::AlphaParam{al}};
  check_close(hcs::sb_kernel(b1, 0.0, 0.0),
              std::sqrt((1.0 - al) / (hcs::kPi * std::sqrt(al))), 1e-14);

  TransformSpec c1{TransformKind::C1, a, 1.0, hcs::AlphaParam{al}};
  check_close(hcs::sb_kernel(c1, 0.0, 0.0),
              std::pow(a * a / hcs::kPi, 0.25) *
                  std::sqrt((1.0 - al * al) / (2.0 * hcs::kPi * al * std::sqrt(al))),
              1e-14);

  TransformSpec c1h{TransformKind::C1hat, a, 1.0, hcs::AlphaParam{al}};
  check_close(hcs::sb_kernel(c1h, 0.0, 0.0), std::pow(a * a / (hcs::kPi * al), 0.25), 1e-14);

  TransformSpec a2{TransformKind::A2, 1.0, 1.0, {}};
  check_close(hcs::sb_kernel(a2, 0.0, 0.0, 0.0, 0.0), 1.0 / std::sqrt(hcs::kPi), 1e-14);

  TransformSpec b2{TransformKind::B2, 1.0, 1.0, hcs::AlphaParam{al}};
  check_close(hcs::sb_kernel(b2, 0.0, 0.0, 0.0, 0.0), (1.0 - al) / (hcs::kPi * std::sqrt(al)),
              1e-14);

  TransformSpec c2{TransformKind::C2, 1.3, 0.9, hcs::AlphaParam{al}};
  check_close(hcs::sb_kernel(c2, 0.0, 0.0, 0.0, 0.0),
              std::sqrt(1.3 * 0.9 / hcs::kPi) * (1.0 - al * al) / (2.0 * hcs::kPi * al),
              1e-14);

  TransformSpec c2h{TransformKind::C2hat, 1.3, 0.9, hcs::AlphaParam{al}};
  check_close(hcs::sb_kernel(c2h, 0.0, 0.0, 0.0, 0.0), std::sqrt(1.3 * 0.9 / hcs::kPi), 1e-14);
}

TEST_CASE("one-mode kernels match their ladder expansions", "[bargmann]") {
  const int terms = 160;
  for (double al : {0.3, 0.5, 0.7}) {
    for (double a : {1.0, 1.3}) {
      TransformSpec a1{TransformKind::A1, a, 1.0, {}};
      BasisSpec psi = make_basis(BasisFamily::OscillatorPsi1D, 0.5, a);
      BasisSpec mono = make_basis(BasisFamily::Monomial1D, 0.5);
      for (Cplx p : kSlotPts)
        for (Cplx w : kSlotPts)
          check_close(hcs::sb_kernel(a1, p, w),
                      ladder_sum_1(psi, mono, p, std::conj(w), terms), 1e-9);

      TransformSpec b1{TransformKind::B1, 1.0, 1.0, hcs::AlphaParam{al}};
      BasisSpec hfam = make_basis(BasisFamily::HolHermiteH1D, al);
      for (Cplx p : kSlotPts)
        for (Cplx w : kSlotPts)
          check_close(hcs::sb_kernel(b1, p, w),
                      ladder_sum_1(mono, hfam, p, std::conj(w), terms), 1e-9);

      TransformSpec c1{TransformKind::C1, a, 1.0, hcs::AlphaParam{al}};
      for (Cplx p : kSlotPts)
        for (Cplx w : kSlotPts)
          check_close(hcs::sb_kernel(c1, p, w),
                      ladder_sum_1(psi, hfam, p, std::conj(w), terms), 1e-9);

      TransformSpec c1h{TransformKind::C1hat, a, 1.0, hcs::AlphaParam{al}};
      BasisSpec kfam = make_basis(BasisFamily::HolHermiteK1D, al);
      for (Cplx p : kSlotPts)
        for (Cplx w : kSlotPts)
          check_close(hcs::sb_kernel(c1h, p, w),
                      ladder_sum_1(psi, kfam, p, std::conj(w), terms), 1e-9);
    }
  }
}

TEST_CASE("two-mode kernels match their ladder expansions", "[bargmann]") {
  const int terms = 48;
  const std::vector<std::array<Cplx, 4>> pts = {
      {{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}},
      {{{0.4, 0.1}, {-0.3, 0.2}, {0.5, 0.0}, {0.1, -0.4}}},
      {{{-0.5, 0.3}, {0.2, 0.2}, {-0.1, 0.5}, {0.6, 0.0}}},
  };
  for (double al : {0.3, 0.5}) {
    const double a = 1.2, b = 0.9;
    BasisSpec psi2 = make_basis(BasisFamily::OscillatorPsi2D, 0.5, a, b);
    BasisSpec mono2 = make_basis(BasisFamily::Monomial2D, 0.5);
    BasisSpec h2 = make_basis(BasisFamily::HolHermiteH2D, al);
    BasisSpec k2 = make_basis(BasisFamily::HolHermiteK2D, al);

    TransformSpec a2{TransformKind::A2, a, b, {}};
    TransformSpec b2{TransformKind::B2, 1.0, 1.0, hcs::AlphaParam{al}};
    TransformSpec c2{TransformKind::C2, a, b, hcs::AlphaParam{al}};
    TransformSpec c2h{TransformKind::C2hat, a, b, hcs::AlphaParam{al}};
    for (const auto& pt : pts) {
      Cplx p1 = pt[0], p2 = pt[1], w1 = pt[2], w2 = pt[3];
      check_close(hcs::sb_kernel(a2, p1, p2, w1, w2),
                  ladder_sum_2(psi2, mono2, p1, p2, std::conj(w1), std::conj(w2), terms), 1e-9);
      check_close(hcs::sb_kernel(b2, p1, p2, w1, w2),
                  ladder_sum_2(mono2, h2, p1, p2, std::conj(w1), std::conj(w2), terms), 1e-9);
      check_close(hcs::sb_kernel(c2, p1, p2, w1, w2),
                  ladder_sum_2(psi2, h2, p1, p2, std::conj(w1), std::conj(w2), terms), 1e-9);
      check_close(hcs::sb_kernel(c2h, p1, p2, w1, w2),
                  ladder_sum_2(psi2, k2, p1, p2, std::conj(w1), std::conj(w2), terms), 1e-9);
    }
  }
}

TEST_CASE("the line kernel factors over modes, the plane kernels do not", "[bargmann]") {
  for (auto [a, b] : std::vector<std::array<double, 2>>{{1.0, 1.0}, {0.8, 1.3}}) {
    TransformSpec a2{TransformKind::A2, a, b, {}};
    TransformSpec a1a{TransformKind::A1, a, 1.0, {}};
    TransformSpec a1b{TransformKind::A1, b, 1.0, {}};
    for (Cplx p1 : kSlotPts)
      for (Cplx w1 : {Cplx(0.2, -0.3), Cplx(-0.6, 0.0)}) {
        Cplx p2 = std::conj(p1) * 0.7;
        Cplx w2 = w1 + Cplx(0.1, 0.2);
        check_close(hcs::sb_kernel(a2, p1, p2, w1, w2),
                    hcs::sb_kernel(a1a, p1, w1) * hcs::sb_kernel(a1b, p2, w2), 1e-12);
      }
  }

  // cross terms make the coupled kernels non-multiplicative across modes
  const Cplx z(0.5, 0.0), w(0.5, 0.0);
  for (TransformKind kind : {TransformKind::B2, TransformKind::C2}) {
    TransformSpec ts{kind, 1.0, 1.0, hcs::AlphaParam{0.5}};
    Cplx joint = hcs::sb_kernel(ts, z, z, w, w) * hcs::sb_kernel(ts, 0.0, 0.0, 0.0, 0.0);
    Cplx split = hcs::sb_kernel(ts, z, 0.0, w, 0.0) * hcs::sb_kernel(ts, 0.0, z, 0.0, w);
    INFO("kind " << hcs::transform_name(kind) << " joint " << joint << " split " << split);
    CHECK(std::abs(joint - split) >= 1e-6);
  }
}

TEST_CASE("one-mode transform matrices approach the identity", "[bargmann]") {
  const int N = 8;
  const hcs::QuadratureGrid grid = hcs::build_grid(80, 1.0, 1.0);

  auto check_matrix = [&](const TransformSpec& ts, const BasisSpec& src, const BasisSpec& tgt) {
    Eigen::MatrixXcd m = hcs::transform_matrix(ts, src, tgt, N, grid);
    INFO("transform " << hcs::transform_name(ts.kind));
    // the leading block is the N=6 matrix verbatim, held to the tighter bar
    CHECK(max_abs(identity_defect(m.topLeftCorner(6, 6))) <= 1e-6);
    CHECK(max_abs(identity_defect(m.adjoint() * m)) <= 1e-5);
  };

  for (double a : {1.0, 1.3}) {
    TransformSpec a1{TransformKind::A1, a, 1.0, {}};
    check_matrix(a1, make_basis(BasisFamily::OscillatorPsi1D, 0.5, a),
                 make_basis(BasisFamily::Monomial1D, 0.5));
  }
  for (double al : {0.3, 0.5, 0.7}) {
    TransformSpec b1{TransformKind::B1, 1.0, 1.0, hcs::AlphaParam{al}};
    check_matrix(b1, make_basis(BasisFamily::HolHermiteH1D, al),
                 make_basis(BasisFamily::Monomial1D, 0.5));
    TransformSpec c1{TransformKind::C1, 1.0, 1.0, hcs::AlphaParam{al}};
    check_matrix(c1, make_basis(BasisFamily::OscillatorPsi1D, al),
                 make_basis(BasisFamily::HolHermiteH1D, al));
    TransformSpec c1h{TransformKind::C1hat, 1.0, 1.0, hcs::AlphaParam{al}};
    check_matrix(c1h, make_basis(BasisFamily::OscillatorPsi1D, al),
                 make_basis(BasisFamily::HolHermiteK1D, al));
  }

  // a one-element ladder reduces to a unimodular scalar
  TransformSpec a1{TransformKind::A1, 1.0, 1.0, {}};
  Eigen::MatrixXcd one = hcs::transform_matrix(a1, make_basis(BasisFamily::OscillatorPsi1D, 0.5),
                                               make_basis(BasisFamily::Monomial1D, 0.5), 1, grid);
  REQUIRE(one.rows() == 1);
  REQUIRE(one.cols() == 1);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) <= 1e-6);
}

TEST_CASE("two-mode transform matrices approach the identity", "[bargmann]") {
  const int N = 4;
  const hcs::QuadratureGrid grid = hcs::build_grid(12, 1.0, 1.0);
  const double al = 0.5, a = 1.0, b = 1.0;

  auto check_matrix = [&](const TransformSpec& ts, const BasisSpec& src, const BasisSpec& tgt) {
    Eigen::MatrixXcd m = hcs::transform_matrix(ts, src, tgt, N, grid);
    INFO("transform " << hcs::transform_name(ts.kind));
    REQUIRE(m.rows() == N * N);
    CHECK(max_abs(identity_defect(m)) <= 1e-5);
    CHECK(max_abs(identity_defect(m.adjoint() * m)) <= 1e-5);
  };

  check_matrix(TransformSpec{TransformKind::A2, a, b, {}},
               make_basis(BasisFamily::OscillatorPsi2D, 0.5, a, b),
               make_basis(BasisFamily::Monomial2D, 0.5));
  check_matrix(TransformSpec{TransformKind::B2, 1.0, 1.0, hcs::AlphaParam{al}},
               make_basis(BasisFamily::HolHermiteH2D, al),
               make_basis(BasisFamily::Monomial2D, 0.5));
  check_matrix(TransformSpec{TransformKind::C2, a, b, hcs::AlphaParam{al}},
               make_basis(BasisFamily::OscillatorPsi2D, al, a, b),
               make_basis(BasisFamily::HolHermiteH2D, al));
  check_matrix(TransformSpec{TransformKind::C2hat, a, b, hcs::AlphaParam{al}},
               make_basis(BasisFamily::OscillatorPsi2D, al, a, b),
               make_basis(BasisFamily::HolHermiteK2D, al));
}

TEST_CASE("composing the line and plane kernels recovers the direct kernel", "[bargmann]") {
  const hcs::QuadratureGrid grid = hcs::build_grid(80, 1.0, 1.0);
  for (double al : {0.5, 0.999}) {
    TransformSpec a1{TransformKind::A1, 1.0, 1.0, {}};
    TransformSpec b1{TransformKind::B1, 1.0, 1.0, hcs::AlphaParam{al}};
    TransformSpec c1{TransformKind::C1, 1.0, 1.0, hcs::AlphaParam{al}};
    for (double q : {-0.5, 0.0, 0.5})
      for (double w : {-0.5, 0.0, 0.5})
        check_close(hcs::compose_kernels(a1, b1, q, w, grid), hcs::sb_kernel(c1, q, w), 1e-8);
    check_close(hcs::compose_kernels(a1, b1, Cplx(0.3, 0.2), Cplx(-0.4, 0.5), grid),
                hcs::sb_kernel(c1, Cplx(0.3, 0.2), Cplx(-0.4, 0.5)), 1e-8);
  }

  const hcs::QuadratureGrid grid2 = hcs::build_grid(40, 1.0, 1.0);
  const double al = 0.5;
  TransformSpec a2{TransformKind::A2, 1.0, 1.0, {}};
  TransformSpec b2{TransformKind::B2, 1.0, 1.0, hcs::AlphaParam{al}};
  TransformSpec c2{TransformKind::C2, 1.0, 1.0, hcs::AlphaParam{al}};
  const std::vector<std::array<double, 4>> pts = {
      {0.0, 0.0, 0.0, 0.0},
      {0.4, -0.3, 0.2, 0.1},
      {0.3, 0.3, -0.2, 0.4},
      {-0.2, 0.5, 0.3, -0.3},
  };
  for (const auto& p : pts)
    check_close(hcs::compose_kernels(a2, b2, p[0], p[1], p[2], p[3], grid2),
                hcs::sb_kernel(c2, p[0], p[1], p[2], p[3]), 1e-6);
}

TEST_CASE("the deformed picture collapses onto the Bargmann one", "[bargmann]") {
  std::vector<double> qs, ts;
  for (int i = 0; i < 5; ++i) {
    qs.push_back(-1.0 + 0.5 * i);
    ts.push_back(-1.0 + 0.5 * i);
  }

  // hat kernels against the undeformed line kernels over a fixed grid
  auto hat1_gap = [&](double al) {
    TransformSpec a1{TransformKind::A1, 1.0, 1.0, {}};
    TransformSpec c1h{TransformKind::C1hat, 1.0, 1.0, hcs::AlphaParam{al}};
    double worst = 0.0;
    for (double q : qs)
      for (double t : ts)
        worst = std::max(worst, std::abs(hcs::sb_kernel(c1h, q, t) - hcs::sb_kernel(a1, q, t)));
    return worst;
  };
  auto hat2_gap = [&](double al) {
    TransformSpec a2{TransformKind::A2, 1.0, 1.0, {}};
    TransformSpec c2h{TransformKind::C2hat, 1.0, 1.0, hcs::AlphaParam{al}};
    double worst = 0.0;
    for (double q : qs)
      for (double t : ts)
        worst = std::max(worst, std::abs(hcs::sb_kernel(c2h, q, -0.5 * q, t, 0.5 * t) -
                                         hcs::sb_kernel(a2, q, -0.5 * q, t, 0.5 * t)));
    return worst;
  };
  // deformed ladder against the plain monomial ladder
  auto ladder_gap = [&](double al) {
    BasisSpec kfam = make_basis(BasisFamily::HolHermiteK1D, al);
    BasisSpec mono = make_basis(BasisFamily::Monomial1D, 0.5);
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
      for (int j = 0; j < 8; ++j) {
        Cplx z = std::polar(1.0, hcs::kPi * j / 4.0);
        worst = std::max(worst, std::abs(hcs::basis_eval(kfam, n, z) - hcs::basis_eval(mono, n, z)));
      }
      worst = std::max(worst, std::abs(hcs::basis_eval(kfam, n, Cplx(0.0, 0.0)) -
                                       hcs::basis_eval(mono, n, Cplx(0.0, 0.0))));
    }
    return worst;
  };

  for (auto gap : {std::function<double(double)>(hat1_gap), std::function<double(double)>(hat2_gap),
                   std::function<double(double)>(ladder_gap)}) {
    double g1 = gap(0.9), g2 = gap(0.99), g3 = gap(0.999);
    INFO("gaps " << g1 << " " << g2 << " " << g3);
    CHECK(g1 > g2);
    CHECK(g2 > g3);
    CHECK(g3 <= 1e-2);
  }
}

TEST_CASE("transform argument validation", "[bargmann]") {
  using Catch::Matchers::ContainsSubstring;
  const hcs::QuadratureGrid grid = hcs::build_grid(16, 1.0, 1.0);
  BasisSpec psi = make_basis(BasisFamily::OscillatorPsi1D, 0.5);
  BasisSpec mono = make_basis(BasisFamily::Monomial1D, 0.5);
  BasisSpec hfam = make_basis(BasisFamily::HolHermiteH1D, 0.5);

  // alpha presence has to match the kind in both directions
  CHECK_THROWS_AS(hcs::sb_kernel(TransformSpec{TransformKind::B1, 1.0, 1.0, {}}, 0.0, 0.0),
                  hcs::domain_error);
  CHECK_THROWS_AS(
      hcs::sb_kernel(TransformSpec{TransformKind::A1, 1.0, 1.0, hcs::AlphaParam{0.5}}, 0.0, 0.0),
      hcs::domain_error);
  CHECK_THROWS_AS(hcs::sb_kernel(TransformSpec{TransformKind::A1, -1.0, 1.0, {}}, 0.0, 0.0),
                  hcs::domain_error);
  CHECK_THROWS_AS(
      hcs::sb_kernel(TransformSpec{TransformKind::A2, 1.0, 0.0, {}}, 0.0, 0.0, 0.0, 0.0),
      hcs::domain_error);

  // arity must match the kind
  TransformSpec a1{TransformKind::A1, 1.0, 1.0, {}};
  TransformSpec a2{TransformKind::A2, 1.0, 1.0, {}};
  CHECK_THROWS_AS(hcs::sb_kernel(a1, 0.0, 0.0, 0.0, 0.0), hcs::domain_error);
  CHECK_THROWS_AS(hcs::sb_kernel(a2, 0.0, 0.0), hcs::domain_error);

  // pairings are fixed per kind
  CHECK_THROWS_WITH(hcs::transform_matrix(a1, mono, mono, 4, grid), ContainsSubstring("source"));
  CHECK_THROWS_WITH(hcs::transform_matrix(a1, psi, hfam, 4, grid), ContainsSubstring("target"));
  TransformSpec b1{TransformKind::B1, 1.0, 1.0, hcs::AlphaParam{0.5}};
  CHECK_THROWS_WITH(
      hcs::transform_matrix(b1, make_basis(BasisFamily::HolHermiteH1D, 0.3), mono, 4, grid),
      ContainsSubstring("alpha"));
  BasisSpec psi_other = make_basis(BasisFamily::OscillatorPsi1D, 0.5, 2.0);
  CHECK_THROWS_WITH(hcs::transform_matrix(a1, psi_other, mono, 4, grid),
                    ContainsSubstring("scale"));
  CHECK_THROWS_AS(hcs::transform_matrix(a1, psi, mono, 0, grid), hcs::domain_error);

  // only the line kernel composes with the plane kernel, in that order
  CHECK_THROWS_AS(hcs::compose_kernels(b1, a1, Cplx(0.0, 0.0), Cplx(0.0, 0.0), grid),
                  hcs::domain_error);
  TransformSpec c1{TransformKind::C1, 1.0, 1.0, hcs::AlphaParam{0.5}};
  CHECK_THROWS_AS(hcs::compose_kernels(a1, c1, Cplx(0.0, 0.0), Cplx(0.0, 0.0), grid),
                  hcs::domain_error);
  TransformSpec b2{TransformKind::B2, 1.0, 1.0, hcs::AlphaParam{0.5}};
  CHECK_THROWS_AS(hcs::compose_kernels(a1, b1, Cplx(0.0, 0.0), Cplx(0.0, 0.0), Cplx(0.0, 0.0),
                                       Cplx(0.0, 0.0), grid),
                  hcs::domain_error);
  CHECK_THROWS_AS(hcs::compose_kernels(a2, b2, Cplx(0.0, 0.0), Cplx(0.0, 0.0), grid),
                  hcs::domain_error);
}
