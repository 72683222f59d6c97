#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "nsg/jet.hpp"
#include "nsg/spinor.hpp"
#include "support.hpp"

namespace nsgtest {

using mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float_50::backend_type,
                                         boost::multiprecision::et_off>;
using cd = std::complex<double>;
using nsg::SplitMix64;

}  // namespace nsgtest

namespace nsgtest {

struct Planted {
  std::array<double, 5> q{};
  std::vector<int> mult;  // sorted descending, infinity included
  int real_distinct = 0;
};

// Multiply poly (ascending coefficients) by (z - r).
inline std::vector<cd> times_root(const std::vector<cd>& p, cd r) {
  std::vector<cd> out(p.size() + 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k + 1] += p[k];
    out[k] -= r * p[k];
  }
  return out;
}

inline double half_grid(SplitMix64& rng) { return -2.0 + 0.5 * static_cast<double>(rng.next() % 9); }

// Roots on a half-integer grid, multiplied by 12 * 2^k so q_k = c_k / C(4,k) is exact in double.
inline Planted plant(SplitMix64& rng) {
  static const std::vector<std::vector<int>> patterns = {{1, 1, 1, 1}, {2, 1, 1}, {2, 2}, {3, 1}, {4}};
  const auto& pat = patterns[rng.next() % patterns.size()];
  Planted out;
  std::vector<cd> poly = {cd(12.0 * static_cast<double>(1 + rng.next() % 4) * ((rng.next() & 1) ? 1 : -1), 0)};
  std::vector<cd> roots;
  int infinite = 0;
  bool use_complex = pat.size() >= 2 && pat[pat.size() - 1] == 1 && pat[pat.size() - 2] == 1 && rng.next() % 3 == 0;
  for (std::size_t i = 0; i < pat.size(); ++i) {
    cd r;
    if (use_complex && i == pat.size() - 2) {
      r = cd(half_grid(rng), 0.5 + 0.5 * static_cast<double>(rng.next() % 3));
    } else if (use_complex && i == pat.size() - 1) {
      r = std::conj(roots.back());
    } else if (infinite == 0 && rng.next() % 5 == 0) {
      infinite = pat[i];
      continue;
    } else {
      do {
        r = cd(half_grid(rng), 0);
      } while (std::any_of(roots.begin(), roots.end(), [&](cd s) { return s == r; }));
    }
    roots.push_back(r);
    for (int m = 0; m < pat[i]; ++m) poly = times_root(poly, r);
    if (r.imag() == 0.0) ++out.real_distinct;
  }
  static const double binom[5] = {1, 4, 6, 4, 1};
  for (std::size_t k = 0; k < poly.size(); ++k) out.q[k] = poly[k].real() / binom[k];
  out.mult = pat;
  (void)infinite;
  return out;
}

// Companion-matrix eigenvalues in 50-digit arithmetic, clustered at 1e-8.
inline std::vector<int> oracle(const std::array<double, 5>& q, int& real_distinct) {
  static const double binom[5] = {1, 4, 6, 4, 1};
  int deg = 4;
  while (deg > 0 && q[deg] == 0.0) --deg;
  std::vector<int> mult;
  if (deg < 4) mult.push_back(4 - deg);
  real_distinct = 0;
  if (deg == 0) return mult;
  Eigen::Matrix<mp, Eigen::Dynamic, Eigen::Dynamic> C = Eigen::Matrix<mp, Eigen::Dynamic, Eigen::Dynamic>::Zero(deg, deg);
  mp lead = mp(binom[deg]) * mp(q[deg]);
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1;
  for (int i = 0; i < deg; ++i) C(i, deg - 1) = -(mp(binom[i]) * mp(q[i])) / lead;
  Eigen::EigenSolver<decltype(C)> es(C, false);
  std::vector<std::complex<mp>> ev;
  for (int i = 0; i < deg; ++i) ev.push_back(es.eigenvalues()[i]);
  std::vector<bool> used(deg, false);
  for (int i = 0; i < deg; ++i) {
    if (used[i]) continue;
    int m = 0;
    for (int j = i; j < deg; ++j)
      if (!used[j] && abs(ev[i] - ev[j]) < mp(1e-8)) {
        used[j] = true;
        ++m;
      }
    mult.push_back(m);
    if (abs(ev[i].imag()) < mp(1e-8)) ++real_distinct;
  }
  return mult;
}

inline std::vector<int> sorted_desc(std::vector<int> v) {
  std::sort(v.rbegin(), v.rend());
  return v;
}

}  // namespace nsgtest

namespace nsgtest {

struct QuarticAgreement {
  bool planted_ok = false;  // oracle recovers the planted pattern
  bool classifier_ok = false;  // classifier agrees with the oracle
};

inline QuarticAgreement quartic_case(SplitMix64& rng, Planted* out = nullptr) {
  Planted p = plant(rng);
  if (out) *out = p;
  int oracle_real = 0;
  std::vector<int> om = sorted_desc(oracle(p.q, oracle_real));
  nsg::QuarticClass qc = nsg::classify_quartic(p.q);
  std::vector<int> cm;
  int c_real = 0;
  for (const auto& r : qc.roots) {
    cm.push_back(r.multiplicity);
    if (!r.infinite && r.real) ++c_real;
  }
  cm = sorted_desc(cm);
  return {om == sorted_desc(p.mult) && oracle_real == p.real_distinct, cm == om && c_real == oracle_real};
}

// Largest relative disagreement between jet derivatives (orders 1 to 3) and five-point
// finite differences: plain evaluations for order 1, lower-order jets at neighbouring points above.
inline double jet_fd_error(const nsg::Expr& e, const nsg::Point& p) {
  const double h = 1e-3;
  auto stencil = [&](int s, auto&& f) {
    auto at = [&](double d) {
      nsg::Point q = p;
      q[s] += d;
      return f(q);
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  };
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  nsg::Jet f = nsg::lift(e, p, 4);
  double err = rel(f.value(), nsg::eval_scalar(e, p));
  for (int s = 0; s < 4; ++s) {
    err = std::max(err, rel(f.d(s), stencil(s, [&](const nsg::Point& q) { return nsg::eval_scalar(e, q); })));
    for (int t = s; t < 4; ++t) {
      err = std::max(err, rel(f.d(s, t), stencil(s, [&](const nsg::Point& q) { return nsg::lift(e, q, 1).d(t); })));
      for (int r = t; r < 4; ++r) {
        nsg::MultiIndex m{};
        ++m[s];
        ++m[t];
        ++m[r];
        err = std::max(err, rel(f.partial(m), stencil(s, [&](const nsg::Point& q) { return nsg::lift(e, q, 2).d(t, r); })));
      }
    }
  }
  return err;
}

}  // namespace nsgtest
