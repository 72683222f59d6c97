#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nsg/hyperheavenly.hpp"
#include "support.hpp"

using namespace nsg;
using Catch::Matchers::WithinAbs;

namespace {

const char* kThetas[] = {"0", "u", "u*v", "u^2*v", "u^2*v*x + v^3 - x*y*u + 0.5*y^2"};
const char* kMus[] = {"0", "x", "x*y"};
const double kShats[] = {0.0, 1.0, -1.0};

HHData data(const char* theta, const char* mu, double shat, double M = 0.7, double N = 0.4) {
  return {M, N, parse(theta), parse(mu), shat};
}

template <class F>
void over_grid(F&& f) {
  SplitMix64 rng(41);
  for (const char* th : kThetas)
    for (const char* mu : kMus)
      for (double s : kShats)
        for (int k = 0; k < 2; ++k) {
          INFO("theta " << th << ", mu " << mu << ", Shat " << s);
          f(data(th, mu, s), nsgtest::random_point(rng, 0.3, 1.5));
        }
}

double amax3(const std::array<double, 3>& a) { return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])}); }

}  // namespace

TEST_CASE("constants of the ansatz", "[hyperheavenly]") {
  HHConstants c = hh_constants(data("0", "0", 0, 0.7, 0.4));
  CHECK_THAT(c.tau, WithinAbs(-2 * 0.7 * 0.4, 1e-15));
  CHECK(hh_constants_residual(c) < 1e-15);
  CHECK_THROWS_AS(hh_constants(data("0", "0", 0, 0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(hh_constants(data("0", "u*x", 0)), DomainError);
}

TEST_CASE("both forms of the ansatz agree", "[hyperheavenly]") {
  over_grid([](const HHData& d, const Point& p) {
    HHMetric m = hh_metric(d, p);
    CHECK(m.form_residual < 1e-11 * (1 + std::abs(m.A.value()) + std::abs(m.B.value()) + std::abs(m.C.value())));
  });
}

TEST_CASE("ansatz metrics: Ricci alignment and multiple WPS", "[hyperheavenly]") {
  over_grid([](const HHData& d, const Point& p) {
    Geometry h = hh_geometry(d, p);
    CurvatureSpinors cs = hatted_curvature_direct(h, presets::fixed_l);
    double scale = 1 + max_magnitude(cs);
    for (int i = 0; i < 3; ++i) {
      CHECK_THAT(cs.phi[i][0], WithinAbs(0, 1e-8 * scale));
      CHECK_THAT(cs.phi[i][1], WithinAbs(0, 1e-8 * scale));
    }
    CHECK(wps_multiplicity(cs.psit, {1, 0}, 1e-8) >= 2);
    CHECK_THAT(cs.lambda, WithinAbs(-d.Shat / 24, 1e-10));
  });
}

TEST_CASE("Phi-hat_AB1'1' through delta X and shift invariance", "[hyperheavenly]") {
  over_grid([](const HHData& d, const Point& p) {
    HHPointReport r = hh_point(d, p);
    CHECK(r.identity_residual < 1e-7 * (1 + amax3(r.phi11_direct)));
    CHECK(r.shift_residual < 1e-9);
    CHECK(amax3({r.lagrangian.x_minus_dl[0], r.lagrangian.x_minus_dl[1], 0.0}) < 1e-9 * (1 + std::abs(r.lagrangian.value)));
  });
}

TEST_CASE("closed forms of Lambda-hat and Phi-hat_AB1'0' for affine 1/Omega", "[hyperheavenly]") {
  SplitMix64 rng(42);
  for (int n = 0; n < 20; ++n) {
    WalkerSpec ws{parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng))};
    double M = nsgtest::uniform(rng, 0.2, 1), N = nsgtest::uniform(rng, -1, -0.2);
    Point p{nsgtest::uniform(rng, 0.5, 1.5), nsgtest::uniform(rng, -0.3, 0), nsgtest::uniform(rng, -1, 1),
            nsgtest::uniform(rng, -1, 1)};
    Expr omega = parse("1/(" + nsgtest::num(M) + "*u + " + nsgtest::num(N) + "*v)");
    Geometry h = make_geometry(ws, omega, p, 4);
    ScalarHat s = scalar_hat(h);
    CHECK_THAT(s.formula, WithinAbs(s.direct, 1e-9 * (1 + std::abs(s.direct))));
    PhiMixed m = phi_mixed(h);
    for (int i = 0; i < 3; ++i) CHECK_THAT(m.formula[i], WithinAbs(m.direct[i], 1e-8 * (1 + std::abs(m.direct[i]))));
  }
}

TEST_CASE("flat data give a Ricci-flat metric with vanishing Lagrangian", "[hyperheavenly]") {
  HHData d = data("0", "0", 0);
  SplitMix64 rng(43);
  std::vector<Point> pts;
  for (int n = 0; n < 10; ++n) pts.push_back(nsgtest::random_point(rng, 0.3, 1.5));
  for (const Point& p : pts) {
    CurvatureSpinors cs = hatted_curvature_direct(hh_geometry(d, p), presets::fixed_l);
    for (const auto& row : cs.phi)
      for (double v : row) CHECK_THAT(v, WithinAbs(0, 1e-9));
    CHECK_THAT(cs.lambda, WithinAbs(0, 1e-9));
    CHECK(hh_lagrangian(d, p).value == 0.0);
  }
  HHResidual r = hh_residual(d, pts);
  CHECK(r.max_hessian == 0.0);
  REQUIRE(r.fitted);
  CHECK_THAT(r.eta[0], WithinAbs(0, 1e-12));
  CHECK_THAT(r.eta[1], WithinAbs(0, 1e-12));
  CHECK_THAT(r.k, WithinAbs(0, 1e-12));
}

TEST_CASE("curved data fail the hyperheavenly equation", "[hyperheavenly]") {
  HHData d = data("u^2*v + x*u", "x*y + 1", 1.0);
  SplitMix64 rng(44);
  std::vector<Point> pts;
  for (int n = 0; n < 6; ++n) pts.push_back(nsgtest::random_point(rng, 0.3, 1.5));
  HHResidual r = hh_residual(d, pts);
  CHECK(r.max_hessian > 1e-3);
  CHECK_FALSE(r.fitted);
  CHECK_THROWS(hh_residual(d, {pts[0], pts[1]}));
}
