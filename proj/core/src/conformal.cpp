#include "nsg/conformal.hpp"

#include <algorithm>
#include <cmath>

namespace nsg {

Geometry unhatted(const Geometry& hatted) {
  return make_geometry(hatted.a, hatted.b, hatted.c, nullptr, hatted.p);
}

std::array<double, 4> upsilon(const Geometry& geo) {
  if (!(geo.omega.value() > 0.0)) throw DomainError("non-positive conformal factor");
  NullTetrad t = walker_tetrad(geo);
  Jet w = ln(geo.omega);
  std::array<const Vec4J*, 4> dirs = {&t.l, &t.m, &t.mt, &t.n};
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 4; ++a) out[k] += (*dirs[k])[a].value() * w.d(a);
  return out;
}

SpinCoefficientTables predicted_hatted_tables(const SpinCoefficientTables& t, const std::array<double, 4>& ups,
                                              const Weights& w, double omega) {
  const double D = ups[0], dl = ups[1], Dl = ups[2], Dp = ups[3];
  const double v0 = w.v0, v1 = w.v1, w0 = w.w0, w1 = w.w1;
  auto P = [&](double e) { return std::pow(omega, e); };
  const double S = P(v0 - v1), St = P(w0 - w1);
  const auto& u = t.unprimed;
  const auto& p = t.primed;
  SpinCoefficientTables h;
  h.unprimed = {{
      {(u[0][0] + (v0 + 1) * D) * S, u[0][1] * S * S, u[0][2] - Dl, (u[0][3] + v1 * D) * S},
      {u[1][0] + v0 * Dl, (u[1][1] + D) * S, u[1][2] / S, u[1][3] - (v1 + 1) * Dl},
      {u[2][0] + (v0 + 1) * dl, u[2][1] * S, (u[2][2] + Dp) / S, u[2][3] - v1 * dl},
      {(u[3][0] + v0 * Dp) / S, u[3][1] + dl, u[3][2] / (S * S), (u[3][3] + (v1 + 1) * Dp) / S},
  }};
  h.primed = {{
      {(p[0][0] + (w0 + 1) * D) * St, p[0][1] * St * St, p[0][2] - dl, (p[0][3] + w1 * D) * St},
      {p[1][0] + w0 * dl, (p[1][1] + D) * St, p[1][2] / St, p[1][3] - (w1 + 1) * dl},
      {p[2][0] + (w0 + 1) * Dl, p[2][1] * St, (p[2][2] + Dp) / St, p[2][3] - w1 * Dl},
      {(p[3][0] + w0 * Dp) / St, p[3][1] + Dl, p[3][2] / (St * St), (p[3][3] + (w1 + 1) * Dp) / St},
  }};
  const std::array<double, 4> ru = {P(w0 + v1), P(w0 + v1), P(v0 + w1), P(v0 + w1)};
  const std::array<double, 4> rp = {P(v0 + w1), P(v0 + w1), P(w0 + v1), P(w0 + v1)};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      h.unprimed[r][c] *= ru[r];
      h.primed[r][c] *= rp[r];
    }
  return h;
}

SpinCoefficientTables direct_hatted_tables(const Geometry& hatted, const Weights& w, double* residual) {
  return spin_coefficients(hatted, make_frame(hatted, w), residual);
}

CurvatureSpinors hatted_curvature_predicted(const Geometry& hatted, const Weights& w) {
  Geometry g = unhatted(hatted);
  Curvature curv = riemann_ricci(g.metric, g.gamma);
  CurvatureSpinors base = curvature_spinors(curv, make_frame(g));
  Jet om = hatted.omega;
  Jet lw = ln(om);
  Mat4D hess = hessian(g.gamma, lw);
  Mat4D gv = values(g.metric.g), giv = values(g.metric.ginv);
  Mat4D T{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) T[a][b] = 0.5 * curv.ricci[a][b] + lw.d(a) * lw.d(b) - hess[a][b];
  double tr = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) tr += giv[a][b] * T[a][b];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) T[a][b] -= 0.25 * tr * gv[a][b];
  CurvatureSpinors out;
  out.phi = phi_components(T, make_frame(hatted, w));
  double o = om.value();
  for (int k = 0; k < 5; ++k) {
    out.psi[k] = std::pow(o, (4 - k) * w.v0 + k * w.v1) * base.psi[k];
    out.psit[k] = std::pow(o, (4 - k) * w.w0 + k * w.w1) * base.psit[k];
  }
  double box = box_scalar(g.metric, g.gamma, om);
  out.lambda = (base.lambda + 0.25 * box / o) / (o * o);
  return out;
}

CurvatureSpinors hatted_curvature_direct(const Geometry& hatted, const Weights& w) {
  return curvature_spinors(riemann_ricci(hatted.metric, hatted.gamma), make_frame(hatted, w));
}

double max_difference(const CurvatureSpinors& a, const CurvatureSpinors& b) {
  double r = std::abs(a.lambda - b.lambda);
  for (int k = 0; k < 5; ++k) r = std::max({r, std::abs(a.psi[k] - b.psi[k]), std::abs(a.psit[k] - b.psit[k])});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r = std::max(r, std::abs(a.phi[i][j] - b.phi[i][j]));
  return r;
}

double max_difference(const SpinCoefficientTables& a, const SpinCoefficientTables& b) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r = std::max({r, std::abs(a.unprimed[i][j] - b.unprimed[i][j]), std::abs(a.primed[i][j] - b.primed[i][j])});
  return r;
}

double max_magnitude(const CurvatureSpinors& a) { return max_difference(a, CurvatureSpinors{}); }
double max_magnitude(const SpinCoefficientTables& a) { return max_difference(a, SpinCoefficientTables{}); }

WalkerCriterion walker_criterion(const Geometry& geo, double tol) {
  auto ups = upsilon(geo);
  WalkerCriterion c;
  c.residual = std::abs(ups[0]) + std::abs(ups[2]);
  c.is_walker = c.residual < tol;
  return c;
}

double conformally_walker_residual(const Geometry& hatted) {
  CurvatureSpinors cs = hatted_curvature_direct(hatted, presets::walker);
  return std::max(std::abs(cs.psit[0]), std::abs(cs.psit[1]));
}

BoxPiReport box_pi_identity(const Geometry& hatted, const Weights& w) {
  if (hatted.order < 2) throw OrderError("box-pi identity needs order >= 2");
  Frame f = make_frame(hatted, w);
  SpinConnection sc = spin_connection(hatted, f);
  Curvature curv = riemann_ricci(hatted.metric, hatted.gamma);
  CurvatureSpinors cs = curvature_spinors(curv, f);
  int K = sc.order;
  // pi_C' = (0, chi~) for pi^A' = (1, 0).
  std::array<Jet, 2> pi = {Jet(0.0, K), f.chit.truncated(K)};
  std::array<std::array<Jet, 2>, 4> T;
  for (int m = 0; m < 4; ++m)
    for (int c = 0; c < 2; ++c) T[m][c] = directional(f.e[m], f.chit) * (c == 1 ? 1.0 : 0.0) - sc.primed[m][1][c] * pi[1];
  auto H = [&](int n, int m, int c) {
    double h = directional(f.e[n], T[m][c]).value();
    for (int d = 0; d < 2; ++d) h -= sc.primed[n][d][c].value() * T[m][d].value();
    for (int j = 0; j < 4; ++j) h -= sc.C[n][j][m] * T[j][c].value();
    return h;
  };
  double chi = f.chi.value(), chit = f.chit.value();
  double box0 = (H(0, 3, 0) + H(3, 0, 0) - H(1, 2, 0) - H(2, 1, 0)) / (chi * chit);
  double eta0 = sc.primed[0][0][0].value(), eta1 = sc.primed[2][0][0].value();
  double om0 = sc.primed[1][1][0].value(), om1 = sc.primed[3][1][0].value();
  double eo = (eta1 * om0 - eta0 * om1) / chi;
  BoxPiReport r;
  r.lhs = {0.0, chit * box0};
  r.eta_omega = {0.0, 2.0 * eo * chit};
  r.weyl = {2.0 * cs.psit[0], 2.0 * cs.psit[1]};
  for (int a = 0; a < 2; ++a) r.residual = std::max(r.residual, std::abs(r.lhs[a] - r.eta_omega[a] - r.weyl[a]));
  return r;
}

RescaledChart rescaled_walker_chart(const Geometry& hatted) {
  const Jet& om = hatted.omega;
  if (std::abs(om.d(0)) > 1e-12 * (1.0 + std::abs(om.value())) || std::abs(om.d(1)) > 1e-12 * (1.0 + std::abs(om.value())))
    throw std::invalid_argument("conformal factor is not constant on alpha-surfaces");
  const Point& p = hatted.p;
  double O = om.value(), Ox = om.d(2), Oy = om.d(3);
  double a = hatted.a.value(), b = hatted.b.value(), c = hatted.c.value();
  RescaledChart rc;
  double uh = O * O * p[0], vh = O * O * p[1];
  rc.p_hat = {uh, vh, p[2], p[3]};
  double O3 = std::pow(O, -3);
  rc.w_hat[0][0] = O * O * (a - 4 * O3 * Ox * uh);
  rc.w_hat[1][1] = O * O * (b - 4 * O3 * Oy * vh);
  rc.w_hat[0][1] = rc.w_hat[1][0] = O * O * (c - 2 * O3 * (Ox * vh + Oy * uh));
  Mat4D J{};
  J[0][0] = J[1][1] = 1.0 / (O * O);
  J[0][2] = -2 * O3 * Ox * uh;
  J[0][3] = -2 * O3 * Oy * uh;
  J[1][2] = -2 * O3 * Ox * vh;
  J[1][3] = -2 * O3 * Oy * vh;
  J[2][2] = J[3][3] = 1.0;
  Mat4D g = values(hatted.metric.g);
  Mat4D expect{};
  expect[0][2] = expect[2][0] = expect[1][3] = expect[3][1] = 1.0;
  expect[2][2] = rc.w_hat[0][0];
  expect[3][3] = rc.w_hat[1][1];
  expect[2][3] = expect[3][2] = rc.w_hat[0][1];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += J[k][i] * g[k][l] * J[l][j];
      rc.block_residual = std::max(rc.block_residual, std::abs(s - expect[i][j]));
    }
  // Coframe of the rescaled chart written in the old coordinates.
  double k = O * (Oy * p[0] - Ox * p[1]);
  std::array<double, 4> n_old = {1, 0, a / 2, c / 2}, m_old = {0, -1, -c / 2, -b / 2};
  std::array<double, 4> l_old = {0, 0, 1, 0}, mt_old = {0, 0, 0, 1};
  std::array<double, 4> du_h = {O * O, 0, 2 * O * p[0] * Ox, 2 * O * p[0] * Oy};
  std::array<double, 4> dv_h = {0, O * O, 2 * O * p[1] * Ox, 2 * O * p[1] * Oy};
  for (int i = 0; i < 4; ++i) {
    double N = du_h[i] + 0.5 * rc.w_hat[0][0] * l_old[i] + 0.5 * rc.w_hat[0][1] * mt_old[i];
    double M = -(dv_h[i] + 0.5 * rc.w_hat[0][1] * l_old[i] + 0.5 * rc.w_hat[1][1] * mt_old[i]);
    double Np = O * O * n_old[i] + k * mt_old[i];
    double Mp = O * O * m_old[i] + k * l_old[i];
    rc.frame_residual = std::max({rc.frame_residual, std::abs(N - Np), std::abs(M - Mp)});
  }
  return rc;
}

}  // namespace nsg
