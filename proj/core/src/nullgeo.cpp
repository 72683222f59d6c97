#include "nsg/nullgeo.hpp"

#include <algorithm>
#include <cmath>

namespace nsg {

AlphaInvariants s_vector(const Geometry& hatted) {
  Frame f = make_frame(hatted, presets::fixed_l);
  SpinConnection sc = spin_connection(hatted, f);
  AlphaInvariants r;
  // pi_A' iota'^A' = -chit.
  double pi_iota = -f.chit.value();
  for (int k = 0; k < 4; ++k) r.s[k] = pi_iota * sc.primed[k][1][0].value();
  for (int b = 0; b < 2; ++b) {
    r.omega[b] = sc.primed[2 * b + 1][1][0].value();
    r.eta[b] = sc.primed[2 * b][0][0].value();
    r.integrability_residual = std::max(r.integrability_residual, std::abs(sc.primed[2 * b][1][0].value()));
  }
  double om = hatted.omega.value();
  double sq = std::sqrt(om);
  for (int b = 0; b < 2; ++b) {
    r.omega_walker[b] = sq * r.omega[b];
    r.omega_predicted[b] = hatted.omega.d(b) / sq;
    r.omega_residual = std::max(r.omega_residual, std::abs(r.omega_walker[b] - r.omega_predicted[b]));
  }
  return r;
}

DistributionReport distribution_report(const Geometry& hatted, double tol) {
  Frame f = make_frame(hatted, presets::fixed_l);
  AlphaInvariants inv = s_vector(hatted);
  DistributionReport r;
  std::array<double, 4> s_cov{};
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k < 4; ++k) s_cov[a] += inv.s[k] * f.theta[k][a].value();
  std::array<double, 4> s_up{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s_up[a] += hatted.metric.ginv[a][b].value() * s_cov[b];
  for (int a = 0; a < 4; ++a) {
    r.grad_dot_s += hatted.omega.d(a) * s_up[a];
    r.s_null += s_cov[a] * s_up[a];
  }
  r.factorization = std::max(std::abs(inv.s[0]), std::abs(inv.s[2]));
  double scale = std::max({std::abs(inv.omega[0]), std::abs(inv.omega[1]), 1.0});
  r.walker = std::max(std::abs(inv.omega[0]), std::abs(inv.omega[1])) < tol;
  // omega_A = (Delta Omega) alpha_A - (D Omega) beta_A up to the dyad scale; omega_0 carries D Omega.
  r.aligned_alpha = !r.walker && std::abs(inv.omega[0]) < tol * scale;
  r.aligned_beta = !r.walker && std::abs(inv.omega[1]) < tol * scale;
  double du = hatted.omega.d(0), dv = hatted.omega.d(1);
  double gscale = std::max({std::abs(du), std::abs(dv), 1.0});
  bool u_free = std::abs(du) < tol * gscale, v_free = std::abs(dv) < tol * gscale;
  r.alignment_consistent = r.walker ? (u_free && v_free) : (r.aligned_alpha == u_free && r.aligned_beta == v_free);
  CurvatureSpinors cs = hatted_curvature_direct(hatted, presets::fixed_l);
  double chi = f.chi.value();
  std::array<double, 2> up = {inv.omega[1] / chi, -inv.omega[0] / chi};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      r.phi_omega_omega += up[a] * up[b] * cs.phi[a + b][0];
      r.phi_omega[a] += up[b] * cs.phi[a + b][0];
    }
  return r;
}

double overlapping_factor_residual(const Expr& omega, const Expr& k, const Point& p) {
  if (depends_on(k, 0) || depends_on(k, 1)) throw DomainError("k must be a function of x and y only");
  Jet o = lift(omega, p, 1);
  Jet root = pow_real(o, 0.5);
  Jet chi_root = root + lift(k, p, 1);
  if (!(chi_root.value() > 0.0)) throw DomainError("non-positive conformal factor");
  double r = 0.0;
  for (int a = 0; a < 2; ++a) r = std::max(r, std::abs(root.d(a) - chi_root.d(a)));
  return r;
}

}  // namespace nsg
