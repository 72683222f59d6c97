#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "nsg/conformal.hpp"
#include "support.hpp"

using namespace nsg;
using Catch::Matchers::WithinAbs;

namespace {

double h(const Geometry& g, const Vec4J& a, const Vec4J& b) {
  double s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += g.metric.g[i][j].value() * a[i].value() * b[j].value();
  return s;
}

Geometry random_geometry(SplitMix64& rng, bool conformal) {
  WalkerSpec ws{parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng))};
  return make_geometry(ws, conformal ? parse(nsgtest::random_omega(rng)) : nullptr, nsgtest::random_point(rng), 4);
}

}  // namespace

TEST_CASE("soldered frames are null with the expected normalization", "[spinor]") {
  SplitMix64 rng(21);
  for (const Weights& w : {presets::walker, presets::fixed_n, presets::fixed_l}) {
    Geometry g = random_geometry(rng, true);
    Frame f = make_frame(g, w);
    double cc = f.chi.value() * f.chit.value();
    for (int k = 0; k < 4; ++k) CHECK_THAT(h(g, f.e[k], f.e[k]), WithinAbs(0, 1e-12));
    CHECK_THAT(h(g, f.e[0], f.e[3]), WithinAbs(cc, 1e-12));
    CHECK_THAT(h(g, f.e[1], f.e[2]), WithinAbs(-cc, 1e-12));
    CHECK_THAT(h(g, f.e[0], f.e[1]), WithinAbs(0, 1e-12));
    CHECK_THAT(h(g, f.e[0], f.e[2]), WithinAbs(0, 1e-12));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0;
        for (int a = 0; a < 4; ++a) s += f.theta[i][a].value() * f.e[j][a].value();
        CHECK_THAT(s, WithinAbs(i == j, 1e-12));
      }
  }
}

TEST_CASE("curvature spinors reassemble the Riemann tensor", "[spinor]") {
  SplitMix64 rng(22);
  for (int n = 0; n < 6; ++n) {
    Geometry g = random_geometry(rng, n % 2);
    Curvature c = riemann_ricci(g.metric, g.gamma);
    Frame f = make_frame(g, n % 3 == 0 ? presets::fixed_l : presets::walker);
    CurvatureSpinors cs = curvature_spinors(c, f);
    Tensor4 a = frame_riemann(c, f), r = reassemble_riemann(cs, f.chi.value(), f.chit.value());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) CHECK_THAT(r[i][j][k][l], WithinAbs(a[i][j][k][l], 1e-10 * (1 + std::abs(a[i][j][k][l]))));
    CHECK_THAT(cs.lambda, WithinAbs(c.lambda, 1e-12 * (1 + std::abs(c.lambda))));
  }
}

TEST_CASE("dyad transforms round trip", "[spinor]") {
  SplitMix64 rng(23);
  Geometry g = random_geometry(rng, true);
  Frame f = make_frame(g, presets::fixed_n);
  std::vector<double> t(16);
  for (auto& x : t) x = nsgtest::uniform(rng, -1, 1);
  for (std::vector<bool> up : {std::vector<bool>{false, false}, {true, false}, {true, true}}) {
    std::vector<double> back = dyad_to_tensor(tensor_to_dyad(t, up, f), up, f);
    for (int i = 0; i < 16; ++i) CHECK_THAT(back[i], WithinAbs(t[i], 1e-12));
  }
}

TEST_CASE("spin connection reproduces the Levi-Civita connection", "[spinor]") {
  SplitMix64 rng(24);
  for (int n = 0; n < 6; ++n) {
    Geometry g = random_geometry(rng, n % 2);
    double res = -1;
    spin_coefficients(g, make_frame(g, n % 3 == 2 ? presets::fixed_n : presets::walker), &res);
    CHECK(res >= 0);
    CHECK(res < 1e-11);
  }
}

TEST_CASE("Walker frames: zero pattern of the spin coefficients", "[spinor]") {
  SplitMix64 rng(25);
  const char* zero_primed[] = {"epsilon~", "kappa~", "tau~'", "gamma~'", "beta~", "sigma~", "rho~'", "rho~", "tau~"};
  for (int n = 0; n < 10; ++n) {
    Geometry g = random_geometry(rng, false);
    SpinCoefficientTables t = spin_coefficients(g, make_frame(g));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 4; ++c) CHECK_THAT(t.unprimed[r][c], WithinAbs(0, 1e-12));
    int seen = 0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        for (const char* z : zero_primed)
          if (std::string(primed_slots()[r][c].name) == z) {
            ++seen;
            CHECK_THAT(t.primed[r][c], WithinAbs(0, 1e-12));
          }
    CHECK(seen == 9);
  }
}

TEST_CASE("Walker metrics: Psi~_0 = Psi~_1 = 0 and Phi_AB0'0' = 0", "[spinor]") {
  SplitMix64 rng(26);
  for (int n = 0; n < 20; ++n) {
    Geometry g = random_geometry(rng, false);
    CurvatureSpinors cs = curvature_spinors(riemann_ricci(g.metric, g.gamma), make_frame(g));
    double scale = 1 + max_magnitude(cs);
    CHECK_THAT(cs.psit[0], WithinAbs(0, 1e-12 * scale));
    CHECK_THAT(cs.psit[1], WithinAbs(0, 1e-12 * scale));
    for (int i = 0; i < 3; ++i) CHECK_THAT(cs.phi[i][0], WithinAbs(0, 1e-12 * scale));
    CHECK(wps_multiplicity(cs.psit, {1, 0}) >= 2);
  }
}

TEST_CASE("delta and sigma operators", "[spinor]") {
  Point p{0.3, -0.2, 0.5, 0.8};
  Geometry g = make_geometry(walker_spec("u*x", "v*y^2", "x + u*v"), nullptr, p, 3);
  Jet f = lift(parse("u^2*y + v*x + sin(y)"), p, 3);
  Dyad2 d = delta_op(f);
  CHECK_THAT(d[0], WithinAbs(2 * 0.3 * 0.8, 1e-14));
  CHECK_THAT(d[1], WithinAbs(0.5, 1e-14));
  Dyad2 s = sigma_op(g, f);
  double a = g.a.value(), b = g.b.value(), c = g.c.value();
  CHECK_THAT(s[0], WithinAbs(0.5 * (c * f.d(0) + b * f.d(1)) - f.d(3), 1e-13));
  CHECK_THAT(s[1], WithinAbs(f.d(2) - 0.5 * (a * f.d(0) + c * f.d(1)), 1e-13));
  SplitMix64 rng(27);
  for (int n = 0; n < 10; ++n) {
    Point q = nsgtest::random_point(rng);
    Geometry gg = make_geometry(
        WalkerSpec{parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng))},
        nullptr, q, 3);
    CHECK(delta_sigma_identity_residual(gg, lift(parse(nsgtest::random_smooth(rng, 3)), q, 3)) < 1e-11);
  }
}
