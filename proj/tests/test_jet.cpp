#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "nsg/jet.hpp"
#include "oracles.hpp"

using namespace nsg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;


TEST_CASE("coefficient layout", "[jet]") {
  CHECK(coeff_count(0) == 1);
  CHECK(coeff_count(1) == 5);
  CHECK(coeff_count(2) == 15);
  CHECK(coeff_count(4) == kMaxCoeffs);
  for (int i = 0; i < kMaxCoeffs; ++i) CHECK(index_of(multi_index(i)) == i);
  CHECK(index_of({1, 0, 0, 0}) == 1);
  CHECK(index_of({0, 0, 0, 1}) == 4);
  CHECK(index_of({2, 0, 0, 0}) == 5);
}

TEST_CASE("polynomial jets are exact", "[jet]") {
  Point p{0.5, -1.0, 2.0, 0.25};
  Jet f = lift(parse("u^3*v + x*y^2 - 2*u*x"), p, 4);
  CHECK(f.value() == Catch::Approx(0.125 * -1.0 + 2.0 * 0.0625 - 2.0));
  CHECK(f.d(0) == Catch::Approx(3 * 0.25 * -1.0 - 4.0));
  CHECK(f.d(0, 0) == Catch::Approx(6 * 0.5 * -1.0));
  CHECK(f.d(0, 1) == Catch::Approx(3 * 0.25));
  CHECK(f.partial({3, 1, 0, 0}) == Catch::Approx(6.0));
  CHECK(f.partial({0, 0, 1, 2}) == Catch::Approx(2.0));
  CHECK(f.partial({4, 0, 0, 0}) == 0.0);
}

TEST_CASE("arithmetic identities", "[jet]") {
  Point p{0.3, 0.4, -0.7, 0.9};
  Jet a = lift(parse("1 + u*x + y^2"), p, 4), b = lift(parse("2 + sin(v*y)"), p, 4);
  Jet q = (a / b) * b - a;
  Jet e = ln(exp(a)) - a;
  Jet t = sin(a) * sin(a) + cos(a) * cos(a) - 1.0;
  Jet r = pow_real(pow_real(b, 1.5), 1.0 / 1.5) - b;
  for (int i = 0; i < kMaxCoeffs; ++i) {
    CHECK_THAT(q.coeff(i), WithinAbs(0.0, 1e-13));
    CHECK_THAT(e.coeff(i), WithinAbs(0.0, 1e-13));
    CHECK_THAT(t.coeff(i), WithinAbs(0.0, 1e-13));
    CHECK_THAT(r.coeff(i), WithinAbs(0.0, 1e-13));
  }
}

TEST_CASE("mixed orders truncate to the lower order", "[jet]") {
  Jet a = Jet::variable(0, 1.0, 4), b = Jet::variable(1, 2.0, 2);
  CHECK((a * b).order() == 2);
  CHECK(a.deriv(0).order() == 3);
  CHECK_THROWS(Jet(1.0, kMaxOrder + 1));
}

TEST_CASE("ln and pow_real reject non-positive values", "[jet]") {
  CHECK_THROWS_AS(ln(Jet(-1.0)), DomainError);
  CHECK_THROWS_AS(pow_real(Jet(0.0), 0.5), DomainError);
}

TEST_CASE("jets agree with finite differences on 200 random expressions", "[jet]") {
  SplitMix64 rng(20240601);
  for (int n = 0; n < 200; ++n) {
    std::string text = nsgtest::random_smooth(rng, 4);
    Point p = nsgtest::random_point(rng);
    INFO(text);
    CHECK(nsgtest::jet_fd_error(parse(text), p) < 1e-6);
  }
}
