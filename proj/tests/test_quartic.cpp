#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "oracles.hpp"

using namespace nsg;

TEST_CASE("classifier examples", "[quartic]") {
  CHECK(classify_quartic({0, 0, 0, 0, 0}).type == "O");
  CHECK(classify_quartic({1, 0, 0, 0, 0}).type == "{4}");
  CHECK(classify_quartic({1, 0, 0, 0, 0}).roots.at(0).infinite);
  CHECK(classify_quartic({0, 0, 1, 0, 0}).type == "{22}");
  CHECK(classify_quartic({0, 0, 0, 0, 1}).type == "{4}");
  // z^4 - 1: two real and one complex pair.
  QuarticClass c = classify_quartic({-1, 0, 0, 0, 1});
  CHECK(c.type == "{1111}");
  CHECK(std::count_if(c.roots.begin(), c.roots.end(), [](const QuarticRoot& r) { return r.real; }) == 2);
}

TEST_CASE("wps multiplicity along a direction", "[quartic]") {
  CHECK(wps_multiplicity({0, 0, 1, 0, 0}, {1, 0}) == 2);
  CHECK(wps_multiplicity({0, 0, 0, 0, 1}, {1, 0}) == 4);
  CHECK(wps_multiplicity({1, 0, 0, 0, 0}, {1, 0}) == 0);
  CHECK(wps_multiplicity({0, 0, 0, 0, 0}, {1, 0}) == 4);
}

TEST_CASE("classifier matches the companion-matrix oracle on 500 planted quartics", "[quartic]") {
  SplitMix64 rng(77);
  int agree = 0;
  for (int n = 0; n < 500; ++n) {
    nsgtest::Planted p;
    nsgtest::QuarticAgreement a = nsgtest::quartic_case(rng, &p);
    INFO("case " << n << " q = " << p.q[0] << "," << p.q[1] << "," << p.q[2] << "," << p.q[3] << "," << p.q[4]);
    CHECK(a.planted_ok);
    CHECK(a.classifier_ok);
    agree += a.classifier_ok;
  }
  CHECK(agree == 500);
}
