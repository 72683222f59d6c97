#include "nsg/spinor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace nsg {

namespace {

Jet dot(const Vec4J& a, const Vec4J& b) {
  Jet s = a[0] * b[0];
  for (int i = 1; i < 4; ++i) s += a[i] * b[i];
  return s;
}

Vec4J lower(const MetricJet& m, const Vec4J& v) {
  Vec4J out;
  for (int a = 0; a < 4; ++a) {
    Jet s = m.g[a][0] * v[0];
    for (int b = 1; b < 4; ++b) s += m.g[a][b] * v[b];
    out[a] = s;
  }
  return out;
}

// Unit antisymmetric symbol: s(0,1) = 1, s(1,0) = -1.
double sym01(int a, int b) { return a == b ? 0.0 : (a == 0 ? 1.0 : -1.0); }

int ones(int a, int b) { return a + b; }

}  // namespace

Jet directional(const Vec4J& X, const Jet& f) {
  Jet s = X[0] * f.deriv(0);
  for (int b = 1; b < 4; ++b) s += X[b] * f.deriv(b);
  return s;
}

NullTetrad walker_tetrad(const Geometry& geo) {
  int K = geo.order;
  Jet z(0.0, K), o(1.0, K);
  const Jet &a = geo.a, &b = geo.b, &c = geo.c;
  NullTetrad t;
  t.l = {o, z, z, z};
  t.mt = {z, o, z, z};
  t.n = {-0.5 * a, -0.5 * c, o, z};
  t.m = {0.5 * c, 0.5 * b, z, -o};
  t.l_flat = {z, z, o, z};
  t.mt_flat = {z, z, z, o};
  t.n_flat = {o, z, 0.5 * a, 0.5 * c};
  t.m_flat = {z, -o, -0.5 * c, -0.5 * b};
  return t;
}

Frame make_frame(const Geometry& geo, const Weights& w) {
  NullTetrad t = walker_tetrad(geo);
  Frame f;
  f.weights = w;
  f.order = geo.order;
  auto scale = [&](double expo) { return expo == 0.0 ? Jet(1.0, geo.order) : pow_real(geo.omega, expo); };
  std::array<const Vec4J*, 4> base = {&t.l, &t.m, &t.mt, &t.n};
  std::array<double, 4> expo = {w.v0 + w.w0, w.v0 + w.w1, w.v1 + w.w0, w.v1 + w.w1};
  for (int k = 0; k < 4; ++k) {
    Jet s = scale(expo[k]);
    for (int a = 0; a < 4; ++a) f.e[k][a] = s * (*base[k])[a];
  }
  std::array<Vec4J, 4> flat;
  for (int k = 0; k < 4; ++k) flat[k] = lower(geo.metric, f.e[k]);
  Jet p03 = dot(flat[0], f.e[3]);
  Jet p12 = dot(flat[1], f.e[2]);
  for (int a = 0; a < 4; ++a) {
    f.theta[0][a] = flat[3][a] / p03;
    f.theta[3][a] = flat[0][a] / p03;
    f.theta[1][a] = flat[2][a] / p12;
    f.theta[2][a] = flat[1][a] / p12;
  }
  double c1 = geo.conformal ? 1.0 : 0.0;
  f.chi = scale(w.v0 + w.v1 + c1);
  f.chit = scale(w.w0 + w.w1 + c1);
  return f;
}

namespace {

std::vector<double> contract_slots(std::vector<double> t, int rank, const std::vector<const Mat4D*>& maps) {
  // maps[s][k][a]: new component k from old coordinate component a in slot s.
  int n = 1;
  for (int i = 0; i < rank; ++i) n *= 4;
  for (int s = 0; s < rank; ++s) {
    int stride = 1;
    for (int i = s + 1; i < rank; ++i) stride *= 4;
    std::vector<double> out(n, 0.0);
    for (int idx = 0; idx < n; ++idx) {
      int k = (idx / stride) % 4;
      int base = idx - k * stride;
      double acc = 0.0;
      for (int a = 0; a < 4; ++a) acc += (*maps[s])[k][a] * t[base + a * stride];
      out[idx] = acc;
    }
    t = std::move(out);
  }
  return t;
}

Mat4D frame_values(const std::array<Vec4J, 4>& v) {
  Mat4D m{};
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 4; ++a) m[k][a] = v[k][a].value();
  return m;
}

Mat4D transpose(const Mat4D& m) {
  Mat4D t{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = m[j][i];
  return t;
}

}  // namespace

std::vector<double> tensor_to_dyad(const std::vector<double>& t, const std::vector<bool>& upper, const Frame& f) {
  int rank = static_cast<int>(upper.size());
  if (rank > 4) throw std::invalid_argument("tensor valence above 4 unsupported");
  Mat4D E = frame_values(f.e), T = frame_values(f.theta);
  std::vector<const Mat4D*> maps;
  for (bool up : upper) maps.push_back(up ? &T : &E);
  return contract_slots(t, rank, maps);
}

std::vector<double> dyad_to_tensor(const std::vector<double>& t, const std::vector<bool>& upper, const Frame& f) {
  int rank = static_cast<int>(upper.size());
  if (rank > 4) throw std::invalid_argument("tensor valence above 4 unsupported");
  Mat4D Et = transpose(frame_values(f.e)), Tt = transpose(frame_values(f.theta));
  std::vector<const Mat4D*> maps;
  for (bool up : upper) maps.push_back(up ? &Et : &Tt);
  return contract_slots(t, rank, maps);
}

// Fixed so that the Phi extracted from the decomposition equals half the trace-free
// Ricci tensor and Lambda = -S/24.
const double kSpinorRiemannSign = -1.0;

Tensor4 frame_riemann(const Curvature& curv, const Frame& f) {
  std::vector<double> t(256);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) t[((a * 4 + b) * 4 + c) * 4 + d] = kSpinorRiemannSign * curv.lowered[a][b][c][d];
  std::vector<double> r = tensor_to_dyad(t, {false, false, false, false}, f);
  Tensor4 out{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) out[a][b][c][d] = r[((a * 4 + b) * 4 + c) * 4 + d];
  return out;
}

CurvatureSpinors curvature_spinors(const Curvature& curv, const Frame& f) {
  auto R = frame_riemann(curv, f);
  double chi = f.chi.value(), chit = f.chit.value();
  auto eu = [&](int a, int b) { return sym01(a, b) / chi; };
  auto epu = [&](int a, int b) { return sym01(a, b) / chit; };
  auto r = [&](int A, int Ap, int B, int Bp, int C, int Cp, int D, int Dp) {
    return R[2 * A + Ap][2 * B + Bp][2 * C + Cp][2 * D + Dp];
  };
  double X[2][2][2][2] = {}, Xt[2][2][2][2] = {}, P[2][2][2][2] = {};
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      for (int C = 0; C < 2; ++C)
        for (int D = 0; D < 2; ++D) {
          double x = 0, xt = 0, ph = 0;
          for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t)
              for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v) {
                  x += r(A, s, B, t, C, u, D, v) * epu(s, t) * epu(u, v);
                  xt += r(s, A, t, B, u, C, v, D) * eu(s, t) * eu(u, v);
                  // Phi_{AB C'D'}: first pair unprimed free, second pair primed free.
                  ph += r(A, s, B, t, u, C, v, D) * epu(s, t) * eu(u, v);
                }
          X[A][B][C][D] = 0.25 * x;
          Xt[A][B][C][D] = 0.25 * xt;
          P[A][B][C][D] = 0.25 * ph;
        }
  CurvatureSpinors cs;
  std::array<int, 5> count{};
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      for (int C = 0; C < 2; ++C)
        for (int D = 0; D < 2; ++D) {
          int k = A + B + C + D;
          cs.psi[k] += X[A][B][C][D];
          cs.psit[k] += Xt[A][B][C][D];
          ++count[k];
        }
  for (int k = 0; k < 5; ++k) {
    cs.psi[k] /= count[k];
    cs.psit[k] /= count[k];
  }
  std::array<std::array<int, 3>, 3> pc{};
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      for (int C = 0; C < 2; ++C)
        for (int D = 0; D < 2; ++D) {
          cs.phi[ones(A, B)][ones(C, D)] += P[A][B][C][D];
          ++pc[ones(A, B)][ones(C, D)];
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) cs.phi[i][j] /= pc[i][j];
  double lam = 0.0;
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      for (int C = 0; C < 2; ++C)
        for (int D = 0; D < 2; ++D) lam += X[A][B][C][D] * eu(A, C) * eu(B, D);
  cs.lambda = lam / 6.0;
  return cs;
}

Tensor4 reassemble_riemann(const CurvatureSpinors& cs, double chi, double chit) {
  auto el = [&](int a, int b) { return chi * sym01(a, b); };
  auto epl = [&](int a, int b) { return chit * sym01(a, b); };
  auto X = [&](int A, int B, int C, int D) {
    return cs.psi[A + B + C + D] + cs.lambda * (el(A, C) * el(B, D) + el(A, D) * el(B, C));
  };
  auto Xt = [&](int A, int B, int C, int D) {
    return cs.psit[A + B + C + D] + cs.lambda * (epl(A, C) * epl(B, D) + epl(A, D) * epl(B, C));
  };
  Tensor4 R{};
  for (int A = 0; A < 2; ++A)
    for (int Ap = 0; Ap < 2; ++Ap)
      for (int B = 0; B < 2; ++B)
        for (int Bp = 0; Bp < 2; ++Bp)
          for (int C = 0; C < 2; ++C)
            for (int Cp = 0; Cp < 2; ++Cp)
              for (int D = 0; D < 2; ++D)
                for (int Dp = 0; Dp < 2; ++Dp) {
                  double v = X(A, B, C, D) * epl(Ap, Bp) * epl(Cp, Dp) +
                             cs.phi[A + B][Cp + Dp] * epl(Ap, Bp) * el(C, D) +
                             cs.phi[C + D][Ap + Bp] * el(A, B) * epl(Cp, Dp) +
                             Xt(Ap, Bp, Cp, Dp) * el(A, B) * el(C, D);
                  R[2 * A + Ap][2 * B + Bp][2 * C + Cp][2 * D + Dp] = v;
                }
  return R;
}

Mat3 phi_components(const Mat4D& t, const Frame& f) {
  std::vector<double> flat(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) flat[a * 4 + b] = t[a][b];
  std::vector<double> d = tensor_to_dyad(flat, {false, false}, f);
  Mat3 out{};
  std::array<std::array<int, 3>, 3> cnt{};
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      for (int Ap = 0; Ap < 2; ++Ap)
        for (int Bp = 0; Bp < 2; ++Bp) {
          out[A + B][Ap + Bp] += d[(2 * A + Ap) * 4 + 2 * B + Bp];
          ++cnt[A + B][Ap + Bp];
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] /= cnt[i][j];
  return out;
}

SpinConnection spin_connection(const Geometry& geo, const Frame& f) {
  if (f.order < 1) throw OrderError("spin connection needs frame order >= 1");
  const auto& G = geo.gamma;
  SpinConnection sc;
  sc.order = f.order - 1;
  std::array<Mat4J, 4> C;
  for (int n = 0; n < 4; ++n)
    for (int k = 0; k < 4; ++k) {
      Vec4J nab;
      for (int a = 0; a < 4; ++a) {
        Jet s = directional(f.e[n], f.e[k][a]);
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c) s += G[a][b][c] * f.e[n][b] * f.e[k][c];
        nab[a] = s;
      }
      for (int j = 0; j < 4; ++j) C[n][j][k] = dot(f.theta[j], nab);
    }
  double res = 0.0;
  for (int n = 0; n < 4; ++n) {
    auto c = [&](int j, int jp, int i, int ip) -> const Jet& { return C[n][2 * j + jp][2 * i + ip]; };
    Gam2& U = sc.unprimed[n];
    Gam2& P = sc.primed[n];
    U[1][0] = 0.5 * (c(1, 0, 0, 0) + c(1, 1, 0, 1));
    U[0][1] = 0.5 * (c(0, 0, 1, 0) + c(0, 1, 1, 1));
    P[1][0] = 0.5 * (c(0, 1, 0, 0) + c(1, 1, 1, 0));
    P[0][1] = 0.5 * (c(0, 0, 0, 1) + c(1, 0, 1, 1));
    Jet t = directional(f.e[n], f.chi) / f.chi.truncated(sc.order);
    Jet tt = directional(f.e[n], f.chit) / f.chit.truncated(sc.order);
    Jet d = 0.5 * ((c(0, 0, 0, 0) - c(1, 0, 1, 0)) + (c(0, 1, 0, 1) - c(1, 1, 1, 1)));
    Jet dt = 0.5 * ((c(0, 0, 0, 0) - c(0, 1, 0, 1)) + (c(1, 0, 1, 0) - c(1, 1, 1, 1)));
    U[0][0] = 0.5 * (t + d);
    U[1][1] = 0.5 * (t - d);
    P[0][0] = 0.5 * (tt + dt);
    P[1][1] = 0.5 * (tt - dt);
    for (int j = 0; j < 2; ++j)
      for (int jp = 0; jp < 2; ++jp)
        for (int i = 0; i < 2; ++i)
          for (int ip = 0; ip < 2; ++ip) {
            double model = (jp == ip ? U[j][i].value() : 0.0) + (j == i ? P[jp][ip].value() : 0.0);
            double actual = c(j, jp, i, ip).value();
            sc.C[n][2 * j + jp][2 * i + ip] = actual;
            res = std::max(res, std::abs(model - actual));
          }
  }
  sc.residual = res;
  return sc;
}

const std::array<std::array<SlotDef, 4>, 4>& unprimed_slots() {
  // Rows differentiate along D = e00', Delta = e10', delta = e01', D' = e11'.
  static const std::array<std::array<SlotDef, 4>, 4> t = {{
      {{{"epsilon", 0, 1, 0, 1}, {"kappa", 0, 0, 0, 1}, {"tau'", 0, 1, 1, -1}, {"gamma'", 0, 0, 1, -1}}},
      {{{"alpha", 2, 1, 0, 1}, {"rho", 2, 0, 0, -1}, {"sigma'", 2, 1, 1, -1}, {"beta'", 2, 0, 1, 1}}},
      {{{"beta", 1, 1, 0, 1}, {"sigma", 1, 0, 0, 1}, {"rho'", 1, 1, 1, 1}, {"alpha'", 1, 0, 1, 1}}},
      {{{"gamma", 3, 1, 0, 1}, {"tau", 3, 0, 0, -1}, {"kappa'", 3, 1, 1, 1}, {"epsilon'", 3, 0, 1, -1}}},
  }};
  return t;
}

const std::array<std::array<SlotDef, 4>, 4>& primed_slots() {
  // Rows differentiate along D, delta, Delta, D'.
  static const std::array<std::array<SlotDef, 4>, 4> t = {{
      {{{"epsilon~", 0, 1, 0, 1}, {"kappa~", 0, 0, 0, 1}, {"tau~'", 0, 1, 1, -1}, {"gamma~'", 0, 0, 1, -1}}},
      {{{"alpha~", 1, 1, 0, 1}, {"rho~", 1, 0, 0, -1}, {"sigma~'", 1, 1, 1, -1}, {"beta~'", 1, 0, 1, 1}}},
      {{{"beta~", 2, 1, 0, 1}, {"sigma~", 2, 0, 0, 1}, {"rho~'", 2, 1, 1, 1}, {"alpha~'", 2, 0, 1, 1}}},
      {{{"gamma~", 3, 1, 0, 1}, {"tau~", 3, 0, 0, -1}, {"kappa~'", 3, 1, 1, 1}, {"epsilon~'", 3, 0, 1, -1}}},
  }};
  return t;
}

namespace {

// chi^-1 p^A nabla q_A expressed through nabla o_i = Gamma^j_i o_j.
double contraction(const Gam2& g, int p, int q) {
  return (p == 1 ? 1.0 : -1.0) * g[1 - p][q].value();
}

}  // namespace

SpinCoefficientTables spin_coefficients(const SpinConnection& conn) {
  SpinCoefficientTables t;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const SlotDef& u = unprimed_slots()[r][c];
      t.unprimed[r][c] = u.sign * contraction(conn.unprimed[u.dir], u.p, u.q);
      const SlotDef& s = primed_slots()[r][c];
      t.primed[r][c] = s.sign * contraction(conn.primed[s.dir], s.p, s.q);
    }
  return t;
}

SpinCoefficientTables spin_coefficients(const Geometry& geo, const Frame& f, double* residual) {
  SpinConnection conn = spin_connection(geo, f);
  if (residual) *residual = conn.residual;
  return spin_coefficients(conn);
}

Dyad2 delta_op(const Jet& f) { return {f.d(0), f.d(1)}; }

Dyad2 sigma_op(const Geometry& geo, const Jet& f) {
  double a = geo.a.value(), b = geo.b.value(), c = geo.c.value();
  double fu = f.d(0), fv = f.d(1), fx = f.d(2), fy = f.d(3);
  return {0.5 * c * fu + 0.5 * b * fv - fy, -0.5 * a * fu - 0.5 * c * fv + fx};
}

Dyad2 alpha_beta_coefficients(const Dyad2& comps) { return {comps[1], -comps[0]}; }

double delta_sigma_identity_residual(const Geometry& geo, const Jet& f) {
  Frame fr = make_frame(geo, presets::walker);
  SpinConnection sc = spin_connection(geo, fr);
  // phi_B = sigma_B f and psi_B = delta_B f as jets.
  std::array<Jet, 2> phi, psi;
  for (int B = 0; B < 2; ++B) {
    phi[B] = directional(fr.e[2 * B + 1], f);
    psi[B] = directional(fr.e[2 * B], f);
  }
  double lhs[2][2], rhs[2][2];
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B) {
      int dl = 2 * A, dr = 2 * A + 1;
      double l = directional(fr.e[dl], phi[B]).value();
      double r = directional(fr.e[dr], psi[B]).value();
      for (int C = 0; C < 2; ++C) {
        l -= sc.unprimed[dl][C][B].value() * phi[C].value();
        r -= sc.unprimed[dr][C][B].value() * psi[C].value();
      }
      // [sigma_A pi^B'] nabla_BB' f with pi = o'.
      for (int Bp = 0; Bp < 2; ++Bp) r -= sc.primed[dr][Bp][0].value() * directional(fr.e[2 * B + Bp], f).value();
      lhs[A][B] = l;
      rhs[A][B] = r;
    }
  double res = 0.0;
  for (int A = 0; A < 2; ++A)
    for (int B = 0; B < 2; ++B)
      res = std::max(res, std::abs(0.5 * (lhs[A][B] + lhs[B][A]) - 0.5 * (rhs[A][B] + rhs[B][A])));
  return res;
}

namespace {

using cd = std::complex<double>;
using Poly = std::vector<cd>;  // ascending coefficients

cd peval(const Poly& p, cd z) {
  cd r = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * z + *it;
  return r;
}

// Horner bound with |z| floored at 1 so that roots at the origin keep a scale.
double pnorm(const Poly& p, cd z) {
  double r = 0.0, zk = 1.0, az = std::max(1.0, std::abs(z));
  for (const auto& c : p) {
    r += std::abs(c) * zk;
    zk *= az;
  }
  return r;
}

Poly pderiv(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<double>(k));
  return d;
}

std::vector<cd> proots(const Poly& p) {
  int n = static_cast<int>(p.size()) - 1;
  if (n <= 0) return {};
  if (n == 1) return {-p[0] / p[1]};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p[i] / p[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cd> r;
  for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()[i]);
  return r;
}

Poly deflate(const Poly& p, cd s) {
  int n = static_cast<int>(p.size()) - 1;
  Poly q(n);
  cd carry = p[n];
  for (int k = n - 1; k >= 0; --k) {
    q[k] = carry;
    carry = p[k] + carry * s;
  }
  return q;
}

constexpr double kEvalTol = 1e-10;
constexpr double kCoeffTol = 1e-12;
constexpr double kClusterTol = 1e-5;

}  // namespace

QuarticClass classify_quartic(const std::array<double, 5>& q) {
  static const double binom[5] = {1, 4, 6, 4, 1};
  QuarticClass out;
  double scale = 0.0;
  for (int k = 0; k < 5; ++k) scale = std::max(scale, std::abs(binom[k] * q[k]));
  if (scale == 0.0) {
    out.type = "O";
    return out;
  }
  int deg = 4;
  while (deg > 0 && std::abs(binom[deg] * q[deg]) <= kCoeffTol * scale) --deg;
  if (deg < 4) {
    QuarticRoot inf;
    inf.infinite = true;
    inf.multiplicity = 4 - deg;
    out.roots.push_back(inf);
  }
  Poly R;
  for (int k = 0; k <= deg; ++k) R.push_back(binom[k] * q[k] / (binom[deg] * q[deg]));
  while (R.size() > 1) {
    int n = static_cast<int>(R.size()) - 1;
    bool found = false;
    for (int m = n; m >= 2 && !found; --m) {
      std::vector<Poly> ders = {R};
      for (int k = 1; k < m; ++k) ders.push_back(pderiv(ders.back()));
      for (cd s : proots(ders[m - 1])) {
        bool ok = true;
        for (int k = 0; k < m - 1 && ok; ++k)
          ok = std::abs(peval(ders[k], s)) <= kEvalTol * pnorm(ders[k], s);
        if (!ok) continue;
        QuarticRoot r;
        r.z = s;
        r.multiplicity = m;
        out.roots.push_back(r);
        for (int k = 0; k < m; ++k) R = deflate(R, s);
        found = true;
        break;
      }
    }
    if (!found) {
      for (cd s : proots(R)) {
        QuarticRoot r;
        r.z = s;
        out.roots.push_back(r);
      }
      R = {R.back()};
    }
  }
  for (auto& r : out.roots) {
    if (r.infinite) continue;
    r.real = std::abs(r.z.imag()) <= kClusterTol * (1.0 + std::abs(r.z));
    if (r.real) r.z = {r.z.real(), 0.0};
  }
  std::stable_sort(out.roots.begin(), out.roots.end(),
                   [](const QuarticRoot& a, const QuarticRoot& b) { return a.multiplicity > b.multiplicity; });
  out.type = "{";
  for (const auto& r : out.roots) out.type += std::to_string(r.multiplicity);
  out.type += "}";
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.roots.size(); ++i)
    for (std::size_t j = i + 1; j < out.roots.size(); ++j) {
      const auto &a = out.roots[i], &b = out.roots[j];
      double dist;
      if (a.infinite || b.infinite) {
        cd z = a.infinite ? b.z : a.z;
        dist = 1.0 / (1.0 + std::abs(z));
      } else {
        dist = std::abs(a.z - b.z) / (1.0 + std::abs(a.z));
      }
      gap = std::min(gap, dist);
    }
  out.gap = std::isfinite(gap) ? gap : 0.0;
  return out;
}

int wps_multiplicity(const std::array<double, 5>& psit, const Dyad2& dir, double tol) {
  double scale = 0.0;
  for (double x : psit) scale = std::max(scale, std::abs(x));
  double dn = std::hypot(dir[0], dir[1]);
  if (dn == 0.0) throw std::invalid_argument("zero direction");
  Dyad2 d = {dir[0] / dn, dir[1] / dn};
  Dyad2 e = {-d[1], d[0]};
  // r_j = Psi~(d, .., d, e, .., e) with j copies of e.
  auto contract = [&](int j) {
    double s = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
      int k = __builtin_popcount(mask);
      double w = 1.0;
      for (int slot = 0; slot < 4; ++slot) {
        const Dyad2& v = slot < 4 - j ? d : e;
        w *= v[(mask >> slot) & 1];
      }
      s += psit[k] * w;
    }
    return s;
  };
  int m = 0;
  while (m < 4 && std::abs(contract(m)) <= tol * std::max(1.0, scale)) ++m;
  return m;
}

}  // namespace nsg
