#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "nsg/scenario.hpp"

namespace nsgtest {

inline double uniform(nsg::SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", v);
  return buf;
}

// Random polynomial in u, v, x, y with `terms` monomials of total degree <= deg.
inline std::string random_poly(nsg::SplitMix64& rng, int terms = 4, int deg = 3) {
  static const char* vars[4] = {"u", "v", "x", "y"};
  std::string out = num(uniform(rng, -1, 1));
  for (int t = 0; t < terms; ++t) {
    out += " + " + num(uniform(rng, -1, 1));
    int d = 1 + static_cast<int>(rng.next() % deg);
    for (int k = 0; k < d; ++k) out += std::string("*") + vars[rng.next() % 4];
  }
  return out;
}

// Positive conformal factor of generic dependence.
inline std::string random_omega(nsg::SplitMix64& rng) {
  return "exp(" + num(uniform(rng, -0.3, 0.3)) + "*u + " + num(uniform(rng, -0.3, 0.3)) + "*v + " +
         num(uniform(rng, -0.3, 0.3)) + "*x*y + " + num(uniform(rng, -0.3, 0.3)) + "*u*x)";
}

inline nsg::Point random_point(nsg::SplitMix64& rng, double lo = -1, double hi = 1) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

}  // namespace nsgtest

namespace nsgtest {

// Random smooth expression, defined everywhere (denominators and logarithm arguments stay >= 1).
inline std::string random_smooth(nsg::SplitMix64& rng, int depth) {
  static const char* vars[4] = {"u", "v", "x", "y"};
  if (depth == 0 || rng.next() % 4 == 0) {
    if (rng.next() % 3 == 0) return num(uniform(rng, -1.5, 1.5));
    return vars[rng.next() % 4];
  }
  std::string a = random_smooth(rng, depth - 1), b = random_smooth(rng, depth - 1);
  switch (rng.next() % 8) {
    case 0: return "(" + a + " + " + b + ")";
    case 1: return "(" + a + " - " + b + ")";
    case 2: return "(" + a + ")*(" + b + ")";
    case 3: return "(" + a + ")/(2 + sin(" + b + "))";
    case 4: return "exp(0.3*(" + a + "))";
    case 5: return "sin(" + a + ")";
    case 6: return "ln(1 + (" + a + ")^2)";
    default: return "(" + a + ")^" + std::to_string(2 + rng.next() % 2);
  }
}

}  // namespace nsgtest
