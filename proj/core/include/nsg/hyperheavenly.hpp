#pragma once

#include <array>
#include <vector>

#include "nsg/conformal.hpp"

namespace nsg {

// Data of the expanding ansatz in conformal oriented Walker coordinates (U, V, X, Y):
// Omega = 1 / (M U + N V), theta and mu (a function of X, Y) as expressions, Shat constant.
struct HHData {
  double M = 0.0, N = 0.0;
  Expr theta;
  Expr mu;
  double Shat = 0.0;
};

// Constant dyad quantities. Lower index components are (o, iota) slots, upper likewise.
struct HHConstants {
  std::array<double, 2> J{};   // J_A = delta_A (1/Omega) = (M, N)
  std::array<double, 2> Ju{};  // J^A
  std::array<double, 2> K{};   // K^A = -(N alpha^A + M beta^A)
  std::array<double, 2> Kl{};  // K_A
  double tau = 0.0;            // K^A J_A = -2 M N
};

// Throws DomainError for M N = 0 or mu depending on U or V.
HHConstants hh_constants(const HHData& hh);
// max over A, B of |2 K^[A J^B] + tau eps^AB|.
double hh_constants_residual(const HHConstants& c);

struct HHMetric {
  Jet A, B, C;  // W^00, W^11, W^01
  Jet omega;
  double form_residual = 0.0;  // raised-index form against the expanded lowered form
};

HHMetric hh_metric(const HHData& hh, const Point& p, int K = kMaxOrder);
Geometry hh_geometry(const HHData& hh, const Point& p);

// Phi-hat_{AB0'0'} through ln Omega, in the frame of presets::fixed_l.
struct RpsReport {
  std::array<double, 3> formula{};
  std::array<double, 3> direct{};
  std::array<double, 3> affine{};  // delta_A delta_B (1/Omega)
};
RpsReport rps_residual(const Geometry& hatted);

// Closed form of Lambda-hat for Omega^-1 affine in (U, V); M, N read off the jet of Omega^-1.
struct ScalarHat {
  double formula = 0.0;
  double direct = 0.0;
};
ScalarHat scalar_hat(const Geometry& hatted);

// Phi-hat_{AB1'0'} (AB = 00, 01, 11) from the closed forms and from the curvature.
struct PhiMixed {
  std::array<double, 3> formula{};
  std::array<double, 3> direct{};
};
PhiMixed phi_mixed(const Geometry& hatted);

// X_B at the point, with or without the mu-gradient shift term.
std::array<double, 2> x_vector(const HHData& hh, const Point& p, bool shifted = true);
// delta_(A X_B) for AB = 00, 01, 11.
std::array<double, 3> sym_delta_x(const HHData& hh, const Point& p, bool shifted = true);

struct LagrangianReport {
  double value = 0.0;
  std::array<double, 3> hessian{};    // delta_A delta_B L, AB = 00, 01, 11
  std::array<double, 2> x_minus_dl{};  // X_B - delta_B L
};
LagrangianReport hh_lagrangian(const HHData& hh, const Point& p);

struct HHPointReport {
  LagrangianReport lagrangian;
  std::array<double, 3> phi11_direct{};
  std::array<double, 3> phi11_identity{};  // Omega^-6 / 4 delta_(A X_B)
  double shift_residual = 0.0;
  double identity_residual = 0.0;
};
HHPointReport hh_point(const HHData& hh, const Point& p);

struct HHResidual {
  double max_hessian = 0.0;
  double max_identity = 0.0;
  double max_x_minus_dl = 0.0;
  double max_shift = 0.0;
  bool fitted = false;
  std::array<double, 2> eta{};
  double k = 0.0;
  double fit_rms = 0.0;
  double condition = 0.0;
  std::vector<HHPointReport> points;
};

// Fits L = T^D eta_D + K = U eta_0 + V eta_1 + K when max_hessian < tol.
HHResidual hh_residual(const HHData& hh, const std::vector<Point>& pts, double tol = 1e-8);

}  // namespace nsg
