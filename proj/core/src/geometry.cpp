#include "nsg/geometry.hpp"

namespace nsg {

WalkerSpec walker_spec(const char* a, const char* b, const char* c) { return {parse(a), parse(b), parse(c)}; }

MetricJet walker_metric(const Jet& a, const Jet& b, const Jet& c, const Jet* omega) {
  int K = std::min({a.order(), b.order(), c.order()});
  if (omega) {
    if (!(omega->value() > 0.0)) throw DomainError("non-positive conformal factor");
    K = std::min(K, omega->order());
  }
  MetricJet m;
  m.order = K;
  Jet zero(0.0, K), one(1.0, K);
  for (auto& row : m.g) row.fill(zero);
  for (auto& row : m.ginv) row.fill(zero);
  m.g[0][2] = m.g[2][0] = one;
  m.g[1][3] = m.g[3][1] = one;
  m.g[2][2] = a.truncated(K);
  m.g[3][3] = b.truncated(K);
  m.g[2][3] = m.g[3][2] = c.truncated(K);
  // Inverse of [[0, I], [I, W]] is [[-W, I], [I, 0]].
  m.ginv[0][2] = m.ginv[2][0] = one;
  m.ginv[1][3] = m.ginv[3][1] = one;
  m.ginv[0][0] = -m.g[2][2];
  m.ginv[1][1] = -m.g[3][3];
  m.ginv[0][1] = m.ginv[1][0] = -m.g[2][3];
  m.detg = one;
  if (omega) {
    Jet o = omega->truncated(K);
    Jet o2 = o * o;
    Jet inv2 = 1.0 / o2;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        m.g[i][j] = m.g[i][j] * o2;
        m.ginv[i][j] = m.ginv[i][j] * inv2;
      }
    m.detg = pow(o, 8);
  }
  return m;
}

MetricJet assemble_metric(const WalkerSpec& ws, const Expr& omega, const Point& p, int K) {
  Jet a = lift(ws.a, p, K), b = lift(ws.b, p, K), c = lift(ws.c, p, K);
  if (!omega) return walker_metric(a, b, c);
  Jet o = lift(omega, p, K);
  return walker_metric(a, b, c, &o);
}

Christoffel christoffel(const MetricJet& m) {
  if (m.order < 1) throw OrderError("christoffel needs metric order >= 1");
  int K = m.order - 1;
  Mat4<Vec4J> dg;  // dg[i][j][k] = d_k g_ij
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) dg[i][j][k] = m.g[i][j].deriv(k);
  Christoffel G;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = b; c < 4; ++c) {
        Jet s(0.0, K);
        for (int d = 0; d < 4; ++d) s += m.ginv[a][d] * (dg[d][c][b] + dg[d][b][c] - dg[b][c][d]);
        s *= 0.5;
        G[a][b][c] = s;
        G[a][c][b] = s;
      }
  return G;
}

Curvature riemann_ricci(const MetricJet& m) { return riemann_ricci(m, christoffel(m)); }

Curvature riemann_ricci(const MetricJet& m, const Christoffel& G) {
  if (m.order < 2) throw OrderError("curvature needs metric order >= 2");
  Curvature out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double r = G[a][d][b].d(c) - G[a][c][b].d(d);
          for (int e = 0; e < 4; ++e)
            r += G[a][c][e].value() * G[e][d][b].value() - G[a][d][e].value() * G[e][c][b].value();
          out.riemann[a][b][c][d] = r;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = 0.0;
          for (int e = 0; e < 4; ++e) s += m.g[a][e].value() * out.riemann[e][b][c][d];
          out.lowered[a][b][c][d] = s;
        }
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a) s += out.riemann[a][b][a][d];
      out.ricci[b][d] = s;
    }
  double S = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) S += m.ginv[a][b].value() * out.ricci[a][b];
  out.scalar = S;
  out.lambda = -S / 24.0;
  return out;
}

Mat4D hessian(const Christoffel& G, const Jet& f) {
  if (f.order() < 2) throw OrderError("hessian needs order >= 2");
  Mat4D h{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = f.d(a, b);
      for (int c = 0; c < 4; ++c) s -= G[c][a][b].value() * f.d(c);
      h[a][b] = s;
    }
  return h;
}

double box_scalar(const MetricJet& m, const Christoffel& G, const Jet& f) {
  Mat4D h = hessian(G, f);
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s += m.ginv[a][b].value() * h[a][b];
  return s;
}

Geometry make_geometry(const Jet& a, const Jet& b, const Jet& c, const Jet* omega, const Point& p) {
  Geometry g;
  g.p = p;
  g.metric = walker_metric(a, b, c, omega);
  g.order = g.metric.order;
  g.a = a.truncated(g.order);
  g.b = b.truncated(g.order);
  g.c = c.truncated(g.order);
  g.conformal = omega != nullptr;
  g.omega = omega ? omega->truncated(g.order) : Jet(1.0, g.order);
  g.gamma = christoffel(g.metric);
  return g;
}

Geometry make_geometry(const WalkerSpec& ws, const Expr& omega, const Point& p, int K) {
  Jet a = lift(ws.a, p, K), b = lift(ws.b, p, K), c = lift(ws.c, p, K);
  if (!omega) return make_geometry(a, b, c, nullptr, p);
  Jet o = lift(omega, p, K);
  return make_geometry(a, b, c, &o, p);
}

Mat4D values(const Mat4J& m) {
  Mat4D out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = m[i][j].value();
  return out;
}

}  // namespace nsg
