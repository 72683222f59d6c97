#include "nsg/hyperheavenly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace nsg {

namespace {

using J2 = std::array<Jet, 2>;
using J22 = std::array<J2, 2>;

constexpr double kEps[2][2] = {{0, 1}, {-1, 0}};

// delta_A lower and upper, partial_B lower and upper.
Jet d_lo(const Jet& f, int a) { return f.deriv(a); }
Jet d_up(const Jet& f, int a) { return a == 0 ? f.deriv(1) : -f.deriv(0); }
Jet p_lo(const Jet& f, int a) { return a == 0 ? -f.deriv(3) : f.deriv(2); }
Jet p_up(const Jet& f, int a) { return f.deriv(2 + a); }

double absmax(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

struct Fields {
  HHConstants c;
  int K = 0;
  Jet omega, theta, mu;
  std::array<Jet, 2> T;  // T^A = (U, V)
  J22 Wu, Wl;
  double coef_scale = 0.0;  // 1 / (12 tau^2)
};

J22 lower2(const J22& Wu) {
  J22 out;
  int K = Wu[0][0].order();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Jet s(0.0, K);
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          if (kEps[c][a] != 0 && kEps[d][b] != 0) s += Wu[c][d] * (kEps[c][a] * kEps[d][b]);
      out[a][b] = s;
    }
  return out;
}

Fields fields(const HHData& hh, const Point& p, int K) {
  Fields f;
  f.c = hh_constants(hh);
  f.K = K;
  f.T = {Jet::variable(0, p[0], K), Jet::variable(1, p[1], K)};
  Jet w = hh.M * f.T[0] + hh.N * f.T[1];
  if (std::abs(w.value()) < 1e-12) throw DomainError("conformal factor singular at point");
  f.omega = 1.0 / w;
  if (!(f.omega.value() > 0.0)) throw DomainError("non-positive conformal factor");
  f.theta = hh.theta ? lift(hh.theta, p, K) : Jet(0.0, K);
  f.mu = hh.mu ? lift(hh.mu, p, K) : Jet(0.0, K);
  f.coef_scale = 1.0 / (12.0 * f.c.tau * f.c.tau);
  const Jet& om = f.omega;
  Jet om2 = om * om;
  Jet om3inv = pow(w, 3);
  Jet coef = (12.0 * f.mu * om3inv + hh.Shat) * f.coef_scale;
  std::array<Jet, 2> g = {om2 * d_up(f.theta, 0), om2 * d_up(f.theta, 1)};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      f.Wu[a][b] = om3inv * 0.5 * (d_up(g[b], a) + d_up(g[a], b)) + coef * (f.c.K[a] * f.c.K[b]);
  f.Wl = lower2(f.Wu);
  return f;
}

std::array<Jet, 2> x_jets(const Fields& f, bool shifted) {
  const auto& c = f.c;
  Jet om2 = f.omega * f.omega;
  Jet TK = f.T[0] * c.Kl[0] + f.T[1] * c.Kl[1];
  std::array<Jet, 2> Lu, Ll;
  for (int a = 0; a < 2; ++a) Lu[a] = om2 * d_up(f.theta, a) + f.mu * TK * (c.K[a] / (c.tau * c.tau));
  for (int b = 0; b < 2; ++b) Ll[b] = Lu[0] * kEps[0][b] + Lu[1] * kEps[1][b];
  Jet Tl[2] = {-f.T[1], f.T[0]};
  Jet kdmu = c.K[0] * p_lo(f.mu, 0) + c.K[1] * p_lo(f.mu, 1);
  std::array<Jet, 2> X;
  for (int b = 0; b < 2; ++b) {
    Jet t1(0.0, f.K);
    for (int cc = 0; cc < 2; ++cc)
      for (int d = 0; d < 2; ++d) t1 += f.Wu[cc][d] * d_lo(f.Wl[b][cc], d);
    t1 = om2 * t1;
    Jet t2 = -(om2 * (p_up(f.Wl[b][0], 0) + p_up(f.Wl[b][1], 1)));
    t2 += c.Ju[0] * p_lo(Ll[b], 0) + c.Ju[1] * p_lo(Ll[b], 1);
    if (shifted) t2 -= kdmu * Tl[b] * (1.0 / (2.0 * c.tau));
    X[b] = t1 + 2.0 * t2;
  }
  return X;
}

// K^D delta_D f; the derivative along w used in L.
Jet along_k(const HHConstants& c, const Jet& f) { return c.K[0] * d_lo(f, 0) + c.K[1] * d_lo(f, 1); }

std::array<double, 3> sym_d(const std::array<Jet, 2>& X) {
  return {X[0].d(0), 0.5 * (X[0].d(1) + X[1].d(0)), X[1].d(1)};
}

}  // namespace

HHConstants hh_constants(const HHData& hh) {
  if (hh.M * hh.N == 0.0) throw DomainError("M N = 0: the expanding ansatz needs tau = -2 M N nonzero");
  if (hh.mu && (depends_on(hh.mu, 0) || depends_on(hh.mu, 1)))
    throw DomainError("mu must be a function of X and Y only");
  HHConstants c;
  c.J = {hh.M, hh.N};
  c.Ju = {hh.N, -hh.M};
  c.K = {-hh.N, -hh.M};
  c.Kl = {hh.M, -hh.N};
  c.tau = -2.0 * hh.M * hh.N;
  return c;
}

double hh_constants_residual(const HHConstants& c) {
  double m = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double lhs = c.K[a] * c.Ju[b] - c.K[b] * c.Ju[a];
      m = std::max(m, std::abs(lhs + c.tau * kEps[a][b]));
    }
  double kj = c.K[0] * c.J[0] + c.K[1] * c.J[1];
  return std::max(m, std::abs(kj - c.tau));
}

HHMetric hh_metric(const HHData& hh, const Point& p, int K) {
  Fields f = fields(hh, p, K);
  HHMetric out;
  out.A = f.Wu[0][0];
  out.B = f.Wu[1][1];
  out.C = f.Wu[0][1];
  out.omega = f.omega;
  // Expanded lowered form: Omega^-2 delta_A delta_B (Omega theta) - 2 Omega J_A J_B theta + coef K_A K_B.
  Jet w = 1.0 / f.omega;
  Jet coef = (12.0 * f.mu * pow(w, 3) + hh.Shat) * f.coef_scale;
  Jet ot = f.omega * f.theta;
  double r = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Jet e = w * w * d_lo(d_lo(ot, b), a) - 2.0 * f.omega * f.theta * (f.c.J[a] * f.c.J[b]) +
              coef * (f.c.Kl[a] * f.c.Kl[b]);
      Jet diff = e - f.Wl[a][b];
      for (int k = 0; k < coeff_count(diff.order()); ++k) r = std::max(r, std::abs(diff.coeff(k)));
    }
  out.form_residual = r;
  return out;
}

Geometry hh_geometry(const HHData& hh, const Point& p) {
  HHMetric m = hh_metric(hh, p);
  return make_geometry(m.A, m.B, m.C, &m.omega, p);
}

RpsReport rps_residual(const Geometry& hatted) {
  RpsReport r;
  Jet om = ln(hatted.omega);
  double wu = om.d(0), wv = om.d(1);
  r.formula = {wu * wu - om.d(0, 0), wu * wv - om.d(0, 1), wv * wv - om.d(1, 1)};
  CurvatureSpinors cs = hatted_curvature_direct(hatted, presets::fixed_l);
  r.direct = {cs.phi[0][0], cs.phi[1][0], cs.phi[2][0]};
  Jet inv = 1.0 / hatted.omega;
  r.affine = {inv.d(0, 0), inv.d(0, 1), inv.d(1, 1)};
  return r;
}

ScalarHat scalar_hat(const Geometry& hatted) {
  const Jet& om = hatted.omega;
  Jet om3 = pow(om, 3);
  Jet ha = hatted.a * om3, hb = hatted.b * om3, hc = hatted.c * om3;
  double dd = ha.d(0, 0) + hb.d(1, 1) + 2.0 * hc.d(0, 1);
  ScalarHat s;
  s.formula = -std::pow(om.value(), -5) / 24.0 * dd;
  s.direct = riemann_ricci(hatted.metric, hatted.gamma).lambda;
  return s;
}

PhiMixed phi_mixed(const Geometry& hatted) {
  const Jet& A = hatted.a;
  const Jet& B = hatted.b;
  const Jet& C = hatted.c;
  double o = hatted.omega.value();
  Jet inv = 1.0 / hatted.omega;
  double M = inv.d(0), N = inv.d(1);
  double f = 1.0 / (o * o);
  PhiMixed r;
  r.formula[0] = -f / 4.0 * (C.d(0, 0) + B.d(0, 1) - 2.0 * o * (M * C.d(0) + N * B.d(0)));
  r.formula[1] = -f / 8.0 *
                 (B.d(1, 1) - A.d(0, 0) + 2.0 * o * ((A.d(0) - C.d(1)) * M + (C.d(0) - B.d(1)) * N));
  r.formula[2] = f / 4.0 * (A.d(0, 1) + C.d(1, 1) - 2.0 * o * (M * A.d(1) + N * C.d(1)));
  CurvatureSpinors cs = hatted_curvature_direct(hatted, presets::fixed_l);
  r.direct = {cs.phi[0][1], cs.phi[1][1], cs.phi[2][1]};
  return r;
}

std::array<double, 2> x_vector(const HHData& hh, const Point& p, bool shifted) {
  auto X = x_jets(fields(hh, p, kMaxOrder), shifted);
  return {X[0].value(), X[1].value()};
}

std::array<double, 3> sym_delta_x(const HHData& hh, const Point& p, bool shifted) {
  return sym_d(x_jets(fields(hh, p, kMaxOrder), shifted));
}

namespace {

Jet lagrangian_jet(const Fields& f, const HHData& hh) {
  const auto& c = f.c;
  const Jet& om = f.omega;
  Jet om2 = om * om;
  Jet Wsc(0.0, f.K);
  for (int b = 0; b < 2; ++b)
    for (int cc = 0; cc < 2; ++cc) Wsc += f.Wl[b][cc] * f.Wu[b][cc];
  Wsc = 0.5 * om2 * Wsc;
  Jet ot = om * f.theta;
  Jet jd = c.Ju[0] * d_lo(ot, 0) + c.Ju[1] * d_lo(ot, 1);
  Jet lap = p_lo(d_up(f.theta, 0), 0) + p_lo(d_up(f.theta, 1), 1);
  Jet TK = f.T[0] * c.Kl[0] + f.T[1] * c.Kl[1];
  Jet grad(0.0, f.K);
  for (int cc = 0; cc < 2; ++cc) grad += (2.0 / om * c.K[cc] - c.tau * f.T[cc]) * p_lo(f.mu, cc);
  Jet w = 1.0 / om;
  Jet L = Wsc + jd * jd + 2.0 * om * lap + TK * grad * (1.0 / (c.tau * c.tau));
  L -= f.mu * pow(w, 4) * along_k(c, pow(om, 3) * f.theta) * (1.0 / c.tau);
  L += om2 * along_k(c, f.theta) * (hh.Shat / (6.0 * c.tau));
  return L;
}

}  // namespace

LagrangianReport hh_lagrangian(const HHData& hh, const Point& p) {
  Fields f = fields(hh, p, kMaxOrder);
  Jet L = lagrangian_jet(f, hh);
  auto X = x_jets(f, true);
  LagrangianReport r;
  r.value = L.value();
  r.hessian = {L.d(0, 0), L.d(0, 1), L.d(1, 1)};
  r.x_minus_dl = {X[0].value() - L.d(0), X[1].value() - L.d(1)};
  return r;
}

HHPointReport hh_point(const HHData& hh, const Point& p) {
  Fields f = fields(hh, p, kMaxOrder);
  HHPointReport r;
  Jet L = lagrangian_jet(f, hh);
  auto X = x_jets(f, true);
  auto X0 = x_jets(f, false);
  r.lagrangian.value = L.value();
  r.lagrangian.hessian = {L.d(0, 0), L.d(0, 1), L.d(1, 1)};
  r.lagrangian.x_minus_dl = {X[0].value() - L.d(0), X[1].value() - L.d(1)};
  auto s = sym_d(X), s0 = sym_d(X0);
  double scale = std::pow(f.omega.value(), -6) / 4.0;
  Geometry geo = make_geometry(f.Wu[0][0], f.Wu[1][1], f.Wu[0][1], &f.omega, p);
  CurvatureSpinors cs = hatted_curvature_direct(geo, presets::fixed_l);
  for (int i = 0; i < 3; ++i) {
    r.phi11_identity[i] = scale * s[i];
    r.phi11_direct[i] = cs.phi[i][2];
    r.identity_residual = std::max(r.identity_residual, std::abs(r.phi11_identity[i] - r.phi11_direct[i]));
    r.shift_residual = std::max(r.shift_residual, std::abs(s[i] - s0[i]));
  }
  return r;
}

HHResidual hh_residual(const HHData& hh, const std::vector<Point>& pts, double tol) {
  if (pts.size() < 3) throw DomainError("affine fit needs at least three sample points");
  HHResidual out;
  out.points.reserve(pts.size());
  for (const auto& p : pts) out.points.push_back(hh_point(hh, p));
  for (const auto& r : out.points) {
    const auto& h = r.lagrangian.hessian;
    out.max_hessian = std::max(out.max_hessian, absmax({h[0], h[1], h[2]}));
    out.max_identity = std::max(out.max_identity, r.identity_residual);
    out.max_x_minus_dl = std::max(out.max_x_minus_dl, absmax({r.lagrangian.x_minus_dl[0], r.lagrangian.x_minus_dl[1]}));
    out.max_shift = std::max(out.max_shift, r.shift_residual);
  }
  Eigen::MatrixXd A(pts.size(), 3);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    A(i, 0) = pts[i][0];
    A(i, 1) = pts[i][1];
    A(i, 2) = 1.0;
    y(i) = out.points[i].lagrangian.value;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 1e-12 * sv(0)) throw DomainError("sample points not in general position");
  out.condition = sv(0) / sv(2);
  if (out.max_hessian < tol) {
    Eigen::Vector3d sol = svd.solve(y);
    out.fitted = true;
    out.eta = {sol(0), sol(1)};
    out.k = sol(2);
    out.fit_rms = std::sqrt((A * sol - y).squaredNorm() / static_cast<double>(pts.size()));
  }
  return out;
}

}  // namespace nsg
