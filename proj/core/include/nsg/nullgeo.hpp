#pragma once

#include <array>

#include "nsg/conformal.hpp"

namespace nsg {

// pi is o' of the frame presets::fixed_l; all dyad components refer to that frame.
struct AlphaInvariants {
  std::array<double, 4> s{};      // S(e_k) = pi_A' nabla_{e_k} pi^A'
  std::array<double, 2> omega{};  // S_b = omega_B pi_B'
  std::array<double, 2> eta{};    // pi^B' nabla_BB' pi^A' = eta_B pi^A'
  double integrability_residual = 0.0;
  // omega in the unhatted Walker dyad against Omega^-1/2 delta_A Omega.
  std::array<double, 2> omega_walker{};
  std::array<double, 2> omega_predicted{};
  double omega_residual = 0.0;
};

AlphaInvariants s_vector(const Geometry& hatted);

struct DistributionReport {
  bool walker = false;             // omega = 0: D undefined
  double grad_dot_s = 0.0;         // (nabla_a Omega) S^a
  double s_null = 0.0;             // h(S, S)
  double factorization = 0.0;      // S along e_{B0'}: zero iff S^a = omega^A pi^A'
  bool aligned_alpha = false;      // omega proportional to alpha_A
  bool aligned_beta = false;       // omega proportional to beta_A
  bool alignment_consistent = false;  // flags agree with D Omega = 0, Delta Omega = 0
  // Cited criteria: D auto-parallel, H integrable.
  double phi_omega_omega = 0.0;
  std::array<double, 2> phi_omega{};
};

DistributionReport distribution_report(const Geometry& hatted, double tol = 1e-9);

// max_A |delta_A(Omega^1/2) - delta_A(chi^1/2)| for chi^1/2 = Omega^1/2 + k, k a function of (x, y).
double overlapping_factor_residual(const Expr& omega, const Expr& k, const Point& p);

}  // namespace nsg
