#include "nsg/charts.hpp"

#include <algorithm>
#include <cmath>

namespace nsg {

namespace {

Mat2 inverse(const Mat2& m) {
  double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det == 0.0) throw DomainError("singular D block");
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

Mat2 transpose(const Mat2& m) { return {{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}; }

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Expr num(double v) { return make_num(v); }
Expr add(Expr a, Expr b) { return make_binary(Op::Add, std::move(a), std::move(b)); }
Expr mul(double s, Expr e) { return make_binary(Op::Mul, num(s), std::move(e)); }

// c + sum k_i v_i, skipping zero coefficients.
Expr affine(double c, const std::array<double, 4>& k, const std::array<Expr, 4>& v) {
  Expr out = num(c);
  for (int i = 0; i < 4; ++i)
    if (k[i] != 0.0) out = add(out, mul(k[i], v[i]));
  return out;
}

std::array<Expr, 4> old_coords(const ChartTransform& ct) {
  std::array<Expr, 4> nv = {make_var(0), make_var(1), make_var(2), make_var(3)};
  Mat2 dit = transpose(inverse(ct.D));
  const auto& D = ct.D;
  const auto& E = ct.E;
  const auto& o = ct.origin;
  return {affine(o[0], {D[0][0], D[0][1], E[0][0], E[0][1]}, nv),
          affine(o[1], {D[1][0], D[1][1], E[1][0], E[1][1]}, nv),
          affine(o[2], {0, 0, dit[0][0], dit[0][1]}, nv),
          affine(o[3], {0, 0, dit[1][0], dit[1][1]}, nv)};
}

Mat4D jacobian(const ChartTransform& ct) {
  Mat4D J{};
  Mat2 dit = transpose(inverse(ct.D));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      J[i][j] = ct.D[i][j];
      J[i][j + 2] = ct.E[i][j];
      J[i + 2][j + 2] = dit[i][j];
    }
  return J;
}

}  // namespace

Point to_old(const ChartTransform& ct, const Point& pn) {
  Mat4D J = jacobian(ct);
  Point p{};
  for (int i = 0; i < 4; ++i) {
    p[i] = ct.origin[i];
    for (int j = 0; j < 4; ++j) p[i] += J[i][j] * pn[j];
  }
  return p;
}

Expr pull_back(const Expr& e, const ChartTransform& ct) { return substitute(e, old_coords(ct)); }

Mat2 transformed_block(const Mat2& w, const ChartTransform& ct) {
  Mat2 di = inverse(ct.D);
  Mat2 dit = transpose(di);
  Mat2 a = mul(transpose(ct.E), dit);
  Mat2 b = mul(di, ct.E);
  Mat2 c = mul(mul(di, w), dit);
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] + b[i][j] + c[i][j];
  return r;
}

WalkerSpec transformed_spec(const WalkerSpec& ws, const ChartTransform& ct) {
  Mat2 di = inverse(ct.D);
  Mat2 k{};
  {
    Mat2 zero{};
    k = transformed_block(zero, ct);
  }
  Expr a = pull_back(ws.a, ct), b = pull_back(ws.b, ct), c = pull_back(ws.c, ct);
  // (D^-1 W D^-T)_ij = sum P_ik P_jl W_kl with W = [[a, c], [c, b]].
  auto entry = [&](int i, int j) {
    Expr out = num(k[i][j]);
    double ka = di[i][0] * di[j][0];
    double kb = di[i][1] * di[j][1];
    double kc = di[i][0] * di[j][1] + di[i][1] * di[j][0];
    if (ka != 0.0) out = add(out, mul(ka, a));
    if (kb != 0.0) out = add(out, mul(kb, b));
    if (kc != 0.0) out = add(out, mul(kc, c));
    return out;
  };
  return {entry(0, 0), entry(1, 1), entry(0, 1)};
}

ChartReport chart_check(const WalkerSpec& ws, const ChartTransform& ct, const Point& pn, const Expr& test_fn) {
  double dd = det(ct.D);
  if (!(dd > 0.0)) throw DomainError("det D must be positive");
  ChartReport r;
  Point po = to_old(ct, pn);
  const int K = 3;
  Geometry g_old = make_geometry(ws, nullptr, po, K);
  Geometry g_new = make_geometry(transformed_spec(ws, ct), nullptr, pn, K);

  Mat2 w_old = {{{g_old.a.value(), g_old.c.value()}, {g_old.c.value(), g_old.b.value()}}};
  Mat2 w_new = transformed_block(w_old, ct);
  Mat4D J = jacobian(ct);
  Mat4D g = values(g_old.metric.g);
  Mat4D gn = values(g_new.metric.g);
  double cong = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += J[k][i] * g[k][l] * J[l][j];
      double block = (i < 2 && j < 2) ? 0.0 : (i >= 2 && j >= 2) ? w_new[i - 2][j - 2] : (i + 2 == j || j + 2 == i);
      cong = std::max({cong, std::abs(s - block), std::abs(gn[i][j] - block)});
    }
  r.congruence_residual = cong;

  double chi = std::sqrt(dd);
  r.chi = chi;
  const auto& D = ct.D;
  const auto& E = ct.E;
  double a = w_old[0][0], b = w_old[1][1], c = w_old[0][1], cc = w_new[0][1];
  double q = ((D[0][0] * D[1][1] + D[1][0] * D[0][1]) * c - D[0][0] * D[0][1] * b - D[1][1] * D[1][0] * a) /
             (2.0 * chi * chi);
  r.mu_first = q - chi * chi * cc / 2.0 + D[0][0] * E[1][0] - D[1][0] * E[0][0];
  r.mu_second = chi * chi * cc / 2.0 - q + D[0][1] * E[1][1] - D[1][1] * E[0][1];
  r.mu_residual = std::abs(r.mu_first - r.mu_second);
  double mu = 0.5 * (r.mu_first + r.mu_second);

  Mat2 lam = {{{D[0][0] / chi, D[0][1] / chi}, {D[1][0] / chi, D[1][1] / chi}}};
  Mat2 lamt = {{{chi, mu / chi}, {0.0, 1.0 / chi}}};
  r.det_residual = std::abs(det(lam) - 1.0) + std::abs(det(lamt) - 1.0);

  NullTetrad t_old = walker_tetrad(g_old), t_new = walker_tetrad(g_new);
  std::array<const Vec4J*, 4> eo = {&t_old.l, &t_old.m, &t_old.mt, &t_old.n};
  std::array<const Vec4J*, 4> en = {&t_new.l, &t_new.m, &t_new.mt, &t_new.n};
  double fr = 0.0;
  for (int B = 0; B < 2; ++B)
    for (int Bp = 0; Bp < 2; ++Bp) {
      const Vec4J& v = *en[2 * B + Bp];
      for (int i = 0; i < 4; ++i) {
        double pushed = 0.0;
        for (int j = 0; j < 4; ++j) pushed += J[i][j] * v[j].value();
        double comb = 0.0;
        for (int A = 0; A < 2; ++A)
          for (int Ap = 0; Ap < 2; ++Ap) comb += lam[A][B] * lamt[Ap][Bp] * (*eo[2 * A + Ap])[i].value();
        fr = std::max(fr, std::abs(pushed - comb));
      }
    }
  r.frame_residual = fr;

  Jet f_old = lift(test_fn, po, K);
  Jet f_new = lift(pull_back(test_fn, ct), pn, K);
  Dyad2 d_old = delta_op(f_old), d_new = delta_op(f_new);
  Dyad2 s_old = sigma_op(g_old, f_old), s_new = sigma_op(g_new, f_new);
  for (int B = 0; B < 2; ++B) {
    double dp = 0.0, sp = 0.0;
    for (int A = 0; A < 2; ++A) {
      dp += D[A][B] * d_old[A];
      sp += D[A][B] * (s_old[A] + mu * d_old[A]);
    }
    sp /= chi * chi;
    r.delta_residual = std::max(r.delta_residual, std::abs(d_new[B] - dp));
    r.sigma_residual = std::max(r.sigma_residual, std::abs(s_new[B] - sp));
  }
  r.a7_residual = delta_sigma_identity_residual(g_new, f_new);
  return r;
}

AffineFactorReport affine_factor_check(double M, double N, const ChartTransform& ct, const Point& pn) {
  Expr w = add(mul(M, make_var(0)), mul(N, make_var(1)));
  Jet wn = lift(pull_back(w, ct), pn, 1);
  AffineFactorReport r;
  const auto& D = ct.D;
  const auto& E = ct.E;
  for (int B = 0; B < 2; ++B) {
    r.j_check[B] = wn.d(B);
    r.j_predicted[B] = D[0][B] * M + D[1][B] * N;
    r.et_j[B] = E[0][B] * M + E[1][B] * N;
    r.rs_gradient[B] = wn.d(2 + B);
    r.residual = std::max({r.residual, std::abs(r.j_check[B] - r.j_predicted[B]),
                           std::abs(r.rs_gradient[B] - r.et_j[B])});
  }
  return r;
}

}  // namespace nsg
