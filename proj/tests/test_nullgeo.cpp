#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nsg/nullgeo.hpp"
#include "support.hpp"

using namespace nsg;
using Catch::Matchers::WithinAbs;

namespace {

Geometry geo(const char* omega, const Point& p) {
  return make_geometry(walker_spec("u*x + y^2*v", "v^2*x - u*y", "0.3*u*v + x"), parse(omega), p, 4);
}

}  // namespace

TEST_CASE("omega_A = Omega^-1/2 delta_A Omega and pi is integrable", "[nullgeo]") {
  SplitMix64 rng(51);
  for (int n = 0; n < 10; ++n) {
    Point p = nsgtest::random_point(rng);
    AlphaInvariants inv = s_vector(make_geometry(
        WalkerSpec{parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng)), parse(nsgtest::random_poly(rng))},
        parse(nsgtest::random_omega(rng)), p, 4));
    CHECK(inv.omega_residual < 1e-12);
    CHECK(inv.integrability_residual < 1e-12);
  }
}

TEST_CASE("S is null, orthogonal to grad Omega and factorizes", "[nullgeo]") {
  SplitMix64 rng(52);
  for (const char* om : {"exp(0.2*u + 0.1*v*x)", "exp(0.3*u)", "exp(0.3*v - 0.1*y)", "1/(u + 2*v + 5)"}) {
    Point p = nsgtest::random_point(rng);
    DistributionReport d = distribution_report(geo(om, p));
    CHECK_FALSE(d.walker);
    CHECK_THAT(d.grad_dot_s, WithinAbs(0, 1e-12));
    CHECK_THAT(d.s_null, WithinAbs(0, 1e-12));
    CHECK(d.factorization < 1e-12);
    CHECK(d.alignment_consistent);
  }
}

TEST_CASE("alignment of omega with the Walker dyad", "[nullgeo]") {
  Point p{0.2, 0.3, -0.4, 0.5};
  DistributionReport v_only = distribution_report(geo("exp(0.3*v)", p));
  CHECK(v_only.aligned_alpha);
  CHECK_FALSE(v_only.aligned_beta);
  DistributionReport u_only = distribution_report(geo("exp(u)", p));
  CHECK(u_only.aligned_beta);
  CHECK_FALSE(u_only.aligned_alpha);
  DistributionReport xy = distribution_report(geo("exp(x*y)", p));
  CHECK(xy.walker);
  CHECK(xy.alignment_consistent);
}

TEST_CASE("overlapping factors differ by a function of (x, y) under square roots", "[nullgeo]") {
  Point p{0.4, 0.2, 0.3, -0.1};
  CHECK(overlapping_factor_residual(parse("exp(u + x)"), parse("0.5 + x*y"), p) < 1e-14);
  CHECK_THROWS_AS(overlapping_factor_residual(parse("exp(u)"), parse("u"), p), DomainError);
}
