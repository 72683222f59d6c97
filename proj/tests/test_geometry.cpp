#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "nsg/geometry.hpp"
#include "support.hpp"

using namespace nsg;
using Catch::Matchers::WithinAbs;

namespace {

// Finite-difference oracle built from plain evaluations of the metric functions.
struct FdMetric {
  WalkerSpec ws;
  Expr omega;

  Eigen::Matrix4d g(const Point& p) const {
    double a = eval_scalar(ws.a, p), b = eval_scalar(ws.b, p), c = eval_scalar(ws.c, p);
    double o = omega ? eval_scalar(omega, p) : 1.0;
    Eigen::Matrix4d m;
    m << 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, a, c, 0, 1, c, b;
    return o * o * m;
  }

  // gamma[a](b, c)
  std::array<Eigen::Matrix4d, 4> gamma(const Point& p) const {
    const double h = 1e-4;
    std::array<Eigen::Matrix4d, 4> dg;
    for (int s = 0; s < 4; ++s) {
      Point pp = p, pm = p;
      pp[s] += h;
      pm[s] -= h;
      dg[s] = (g(pp) - g(pm)) / (2 * h);
    }
    Eigen::Matrix4d gi = g(p).inverse();
    std::array<Eigen::Matrix4d, 4> out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          double s = 0;
          for (int d = 0; d < 4; ++d) s += gi(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
          out[a](b, c) = 0.5 * s;
        }
    return out;
  }

  Eigen::Matrix4d ricci(const Point& p) const {
    const double h = 1e-3;
    std::array<std::array<Eigen::Matrix4d, 4>, 4> dG;
    for (int s = 0; s < 4; ++s) {
      Point pp = p, pm = p;
      pp[s] += h;
      pm[s] -= h;
      auto gp = gamma(pp), gm = gamma(pm);
      for (int a = 0; a < 4; ++a) dG[s][a] = (gp[a] - gm[a]) / (2 * h);
    }
    auto G = gamma(p);
    Eigen::Matrix4d ric = Eigen::Matrix4d::Zero();
    for (int b = 0; b < 4; ++b)
      for (int d = 0; d < 4; ++d)
        for (int a = 0; a < 4; ++a) {
          double r = dG[a][a](d, b) - dG[d][a](a, b);
          for (int e = 0; e < 4; ++e) r += G[a](a, e) * G[e](d, b) - G[a](d, e) * G[e](a, b);
          ric(b, d) += r;
        }
    return ric;
  }
};

}  // namespace

TEST_CASE("Walker block metric has unit determinant and neutral signature", "[geometry]") {
  Geometry g = make_geometry(walker_spec("u*x", "v^2 + y", "x*y"), nullptr, {0.3, 0.2, -0.5, 0.7}, 2);
  CHECK_THAT(g.metric.detg.value(), WithinAbs(1.0, 1e-15));
  Eigen::Matrix4d m;
  Mat4D v = values(g.metric.g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = v[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  int pos = 0;
  for (int i = 0; i < 4; ++i) pos += es.eigenvalues()[i] > 0;
  CHECK(pos == 2);
}

TEST_CASE("flat Walker metric has zero curvature", "[geometry]") {
  Geometry g = make_geometry(walker_spec("0", "0", "0"), nullptr, {0.1, 0.2, 0.3, 0.4}, 4);
  Curvature c = riemann_ricci(g.metric, g.gamma);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(c.riemann[a][b][i][j] == 0.0);
  CHECK(c.scalar == 0.0);
}

TEST_CASE("Ricci tensor agrees with a finite-difference oracle", "[geometry]") {
  SplitMix64 rng(11);
  for (int n = 0; n < 12; ++n) {
    WalkerSpec ws{parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng))};
    Expr omega = n % 2 ? parse(nsgtest::random_omega(rng)) : nullptr;
    Point p = nsgtest::random_point(rng);
    Geometry geo = make_geometry(ws, omega, p, 4);
    Curvature c = riemann_ricci(geo.metric, geo.gamma);
    Eigen::Matrix4d oracle = FdMetric{ws, omega}.ricci(p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK_THAT(c.ricci[i][j], WithinAbs(oracle(i, j), 1e-5 * (1 + std::abs(oracle(i, j)))));
  }
}

TEST_CASE("Riemann symmetries", "[geometry]") {
  SplitMix64 rng(12);
  WalkerSpec ws{parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng))};
  Geometry geo = make_geometry(ws, parse(nsgtest::random_omega(rng)), nsgtest::random_point(rng), 4);
  Curvature c = riemann_ricci(geo.metric, geo.gamma);
  const auto& R = c.lowered;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          CHECK_THAT(R[a][b][i][j] + R[b][a][i][j], WithinAbs(0, 1e-12));
          CHECK_THAT(R[a][b][i][j] + R[a][b][j][i], WithinAbs(0, 1e-12));
          CHECK_THAT(R[a][b][i][j] - R[i][j][a][b], WithinAbs(0, 1e-12));
          CHECK_THAT(R[a][b][i][j] + R[a][i][j][b] + R[a][j][b][i], WithinAbs(0, 1e-12));
        }
  CHECK_THAT(c.lambda, WithinAbs(-c.scalar / 24.0, 1e-15));
}

TEST_CASE("Walker scalar curvature is a_uu + b_vv + 2 c_uv", "[geometry]") {
  SplitMix64 rng(13);
  for (int n = 0; n < 50; ++n) {
    Geometry g = make_geometry(
        WalkerSpec{parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng))},
        nullptr, nsgtest::random_point(rng), 4);
    double S = riemann_ricci(g.metric, g.gamma).scalar;
    CHECK_THAT(S, WithinAbs(g.a.d(0, 0) + g.b.d(1, 1) + 2 * g.c.d(0, 1), 1e-9 * (1 + std::abs(S))));
  }
}

TEST_CASE("box of a function matches the trace of its Hessian", "[geometry]") {
  Point p{0.2, -0.4, 0.6, 0.1};
  Geometry g = make_geometry(walker_spec("u*x + y^2", "v*y", "u*v*x"), parse("exp(0.2*u + 0.1*x*y)"), p, 3);
  Jet f = lift(parse("u*v + sin(x) + y^2*u"), p, 2);
  Mat4D H = hessian(g.gamma, f);
  double tr = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) tr += g.metric.ginv[a][b].value() * H[a][b];
  CHECK_THAT(box_scalar(g.metric, g.gamma, f), WithinAbs(tr, 1e-13));
}
