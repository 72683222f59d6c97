#pragma once

#include <array>

#include "nsg/conformal.hpp"

namespace nsg {

// Change of oriented Walker chart (p, q, r, s) -> (u, v, x, y) with constant Jacobian
// [[D, E], [0, D^-T]]: (u, v) = D (p, q) + E (r, s) + (o0, o1), (x, y) = D^-T (r, s) + (o2, o3).
struct ChartTransform {
  Mat2 D{{{1, 0}, {0, 1}}};
  Mat2 E{};
  Point origin{};
};

Point to_old(const ChartTransform& ct, const Point& pn);
// An expression in (u, v, x, y) rewritten in the new coordinates.
Expr pull_back(const Expr& e, const ChartTransform& ct);
// WalkerSpec of the same metric in the new chart, W-check = E^T D^-T + D^-1 E + D^-1 W D^-T.
WalkerSpec transformed_spec(const WalkerSpec& ws, const ChartTransform& ct);
Mat2 transformed_block(const Mat2& w, const ChartTransform& ct);

struct ChartReport {
  double chi = 0.0;  // + sqrt(det D)
  double mu_first = 0.0, mu_second = 0.0;
  double mu_residual = 0.0;
  double congruence_residual = 0.0;  // J^T g J against the block form with the transformed W
  double frame_residual = 0.0;       // new Walker tetrad against Lambda, Lambda-tilde acting on the old one
  double det_residual = 0.0;         // |det Lambda - 1| + |det Lambda-tilde - 1|
  double delta_residual = 0.0;       // delta-check_B = D^T delta
  double sigma_residual = 0.0;       // sigma-check_B = chi^-2 D^A_B (sigma_A + mu delta_A)
  double a7_residual = 0.0;          // delta/sigma identity in the new chart
};

// test_fn is a function of (u, v, x, y); it is pulled back to the new chart.
ChartReport chart_check(const WalkerSpec& ws, const ChartTransform& ct, const Point& pn, const Expr& test_fn);

struct AffineFactorReport {
  std::array<double, 2> j_check{};      // delta-check (1/Omega) in the new chart
  std::array<double, 2> j_predicted{};  // D^T J
  std::array<double, 2> et_j{};         // E^T J
  std::array<double, 2> rs_gradient{};  // (d_r, d_s) (1/Omega) in the new chart
  double residual = 0.0;                // max of |j_check - j_predicted| and |rs_gradient - et_j|
};

// 1/Omega = M u + N v; both charts see the affine form iff E^T J = 0.
AffineFactorReport affine_factor_check(double M, double N, const ChartTransform& ct, const Point& pn);

}  // namespace nsg
