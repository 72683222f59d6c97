#pragma once

#include <array>

#include "nsg/spinor.hpp"

namespace nsg {

// Walker geometry underlying a conformally Walker one (omega dropped).
Geometry unhatted(const Geometry& hatted);

// (D w, delta w, Delta w, D' w) for w = ln Omega, along the Walker tetrad (l, m, mt, n).
std::array<double, 4> upsilon(const Geometry& geo);

// Hatted spin coefficients predicted from the unhatted Walker-frame tables.
SpinCoefficientTables predicted_hatted_tables(const SpinCoefficientTables& t, const std::array<double, 4>& ups,
                                              const Weights& w, double omega);
SpinCoefficientTables direct_hatted_tables(const Geometry& hatted, const Weights& w, double* residual = nullptr);

// Curvature spinors of the hatted metric in the frame with weights w.
CurvatureSpinors hatted_curvature_predicted(const Geometry& hatted, const Weights& w);
CurvatureSpinors hatted_curvature_direct(const Geometry& hatted, const Weights& w);

double max_difference(const CurvatureSpinors& a, const CurvatureSpinors& b);
double max_difference(const SpinCoefficientTables& a, const SpinCoefficientTables& b);
double max_magnitude(const CurvatureSpinors& a);
double max_magnitude(const SpinCoefficientTables& a);

struct WalkerCriterion {
  bool is_walker = false;
  double residual = 0.0;
};

// Omega constant on alpha-surfaces, i.e. D w = Delta w = 0.
WalkerCriterion walker_criterion(const Geometry& geo, double tol = 1e-9);

// max(|Psi~_0|, |Psi~_1|) of the hatted metric in frames adapted to pi.
double conformally_walker_residual(const Geometry& hatted);

struct BoxPiReport {
  std::array<double, 2> lhs{};     // pi_A' pi^C' box pi_C'
  std::array<double, 2> eta_omega{};  // 2 eta^B omega_B pi_A'
  std::array<double, 2> weyl{};    // 2 Psi~_A'B'C'D' pi^B' pi^C' pi^D'
  double residual = 0.0;
};

// Both sides of the box-pi identity with pi = o' of the frame with weights w.
BoxPiReport box_pi_identity(const Geometry& hatted, const Weights& w = presets::fixed_l);

using Mat2 = std::array<std::array<double, 2>, 2>;

struct RescaledChart {
  Point p_hat{};
  Mat2 w_hat{};            // W-hat entries at the point, closed form
  double block_residual = 0.0;  // J^T (Omega^2 g) J against the Walker block form
  double frame_residual = 0.0;  // closed-form N_a, M_a against the hatted Walker coframe
};

// Walker chart u^ = Omega^2 u, v^ = Omega^2 v for Omega a function of (x, y).
RescaledChart rescaled_walker_chart(const Geometry& hatted);

}  // namespace nsg
