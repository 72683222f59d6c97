#include "nsg/jet.hpp"

#include <cmath>
#include <vector>

namespace nsg {

namespace {

struct Tables {
  std::array<MultiIndex, kMaxCoeffs> index{};
  std::array<int, kMaxCoeffs> degree{};
  // For each target index, the (a, b) coefficient pairs whose multi-indices add to it.
  std::array<std::vector<std::array<int, 2>>, kMaxCoeffs> pairs;
  // shift[k][slot] = position of index k plus one unit of slot, or -1.
  std::array<std::array<int, 4>, kMaxCoeffs> shift{};

  Tables() {
    int n = 0;
    for (int deg = 0; deg <= kMaxOrder; ++deg)
      for (int i0 = deg; i0 >= 0; --i0)
        for (int i1 = deg - i0; i1 >= 0; --i1)
          for (int i2 = deg - i0 - i1; i2 >= 0; --i2) {
            index[n] = {i0, i1, i2, deg - i0 - i1 - i2};
            degree[n] = deg;
            ++n;
          }
    for (int a = 0; a < kMaxCoeffs; ++a)
      for (int b = 0; b < kMaxCoeffs; ++b) {
        if (degree[a] + degree[b] > kMaxOrder) continue;
        MultiIndex s{};
        for (int k = 0; k < 4; ++k) s[k] = index[a][k] + index[b][k];
        pairs[find(s)].push_back({a, b});
      }
    for (int k = 0; k < kMaxCoeffs; ++k)
      for (int s = 0; s < 4; ++s) {
        MultiIndex m = index[k];
        ++m[s];
        shift[k][s] = degree[k] < kMaxOrder ? find(m) : -1;
      }
  }

  int find(const MultiIndex& m) const {
    for (int k = 0; k < kMaxCoeffs; ++k)
      if (index[k] == m) return k;
    return -1;
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

constexpr std::array<int, 5> kCounts = {1, 5, 15, 35, 70};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Horner evaluation of sum_k d[k] h^k where h has zero constant term.
Jet compose(const Jet& a, const std::array<double, kMaxOrder + 1>& d) {
  int K = a.order();
  Jet h = a;
  h.coeff(0) = 0.0;
  Jet r(d[K], K);
  for (int k = K - 1; k >= 0; --k) {
    r = r * h;
    r.coeff(0) += d[k];
  }
  r.coeff(0) = d[0];
  return r;
}

}  // namespace

int coeff_count(int K) { return kCounts.at(K); }

int index_of(const MultiIndex& m) {
  int deg = m[0] + m[1] + m[2] + m[3];
  if (deg > kMaxOrder || m[0] < 0 || m[1] < 0 || m[2] < 0 || m[3] < 0) throw OrderError("multi-index out of range");
  return tables().find(m);
}

const MultiIndex& multi_index(int idx) { return tables().index.at(idx); }

Jet::Jet(double c, int order) : order_(order) {
  if (order < 0 || order > kMaxOrder) throw OrderError("jet order out of range");
  c_[0] = c;
}

Jet Jet::variable(int slot, double at, int order) {
  Jet j(at, order);
  if (order >= 1) j.c_[1 + slot] = 1.0;
  return j;
}

double Jet::partial(const MultiIndex& m) const {
  int deg = m[0] + m[1] + m[2] + m[3];
  if (deg > order_) throw OrderError("partial exceeds jet order");
  double f = 1.0;
  for (int k : m) f *= factorial(k);
  return f * c_[index_of(m)];
}

double Jet::d(int slot) const {
  if (order_ < 1) throw OrderError("partial exceeds jet order");
  return c_[1 + slot];
}

double Jet::d(int s1, int s2) const {
  MultiIndex m{};
  ++m[s1];
  ++m[s2];
  return partial(m);
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw OrderError("cannot raise jet order");
  Jet r(0.0, order);
  for (int k = 0; k < kCounts[order]; ++k) r.c_[k] = c_[k];
  return r;
}

Jet Jet::deriv(int slot) const {
  if (order_ < 1) throw OrderError("derivative of order-0 jet");
  const auto& t = tables();
  Jet r(0.0, order_ - 1);
  for (int k = 0; k < kCounts[order_ - 1]; ++k) {
    int up = t.shift[k][slot];
    r.c_[k] = (t.index[k][slot] + 1) * c_[up];
  }
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  for (int k = 0; k < kCounts[order_]; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  for (int k = 0; k < kCounts[order_]; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int k = 0; k < kCounts[order_]; ++k) c_[k] *= s;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  r += b;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r -= b;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  r *= -1.0;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  int K = std::min(a.order_, b.order_);
  const auto& t = tables();
  Jet r(0.0, K);
  for (int k = 0; k < kCounts[K]; ++k) {
    double s = 0.0;
    for (const auto& pr : t.pairs[k]) s += a.c_[pr[0]] * b.c_[pr[1]];
    r.c_[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.c_[0] == 0.0) throw DomainError("division by zero");
  int K = std::min(a.order_, b.order_);
  const auto& t = tables();
  Jet r(0.0, K);
  for (int k = 0; k < kCounts[K]; ++k) {
    double s = a.c_[k];
    for (const auto& pr : t.pairs[k])
      if (pr[0] != k) s -= r.c_[pr[0]] * b.c_[pr[1]];
    r.c_[k] = s / b.c_[0];
  }
  return r;
}

Jet operator+(const Jet& a, double s) {
  Jet r = a;
  r.coeff(0) += s;
  return r;
}
Jet operator+(double s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, double s) { return a + (-s); }
Jet operator-(double s, const Jet& a) { return (-a) + s; }
Jet operator*(const Jet& a, double s) {
  Jet r = a;
  r *= s;
  return r;
}
Jet operator*(double s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, double s) {
  if (s == 0.0) throw DomainError("division by zero");
  Jet r = a;
  for (int k = 0; k < coeff_count(r.order()); ++k) r.coeff(k) /= s;
  return r;
}
Jet operator/(double s, const Jet& a) { return Jet(s, a.order()) / a; }

Jet exp(const Jet& a) {
  std::array<double, kMaxOrder + 1> d{};
  double e = std::exp(a.value());
  for (int k = 0; k <= kMaxOrder; ++k) d[k] = e / factorial(k);
  return compose(a, d);
}

Jet ln(const Jet& a) {
  double x = a.value();
  if (!(x > 0.0)) throw DomainError("ln of non-positive value");
  std::array<double, kMaxOrder + 1> d{};
  d[0] = std::log(x);
  for (int k = 1; k <= kMaxOrder; ++k) d[k] = ((k % 2) ? 1.0 : -1.0) / (k * std::pow(x, k));
  return compose(a, d);
}

Jet sin(const Jet& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  std::array<double, 4> cyc = {s, c, -s, -c};
  std::array<double, kMaxOrder + 1> d{};
  for (int k = 0; k <= kMaxOrder; ++k) d[k] = cyc[k % 4] / factorial(k);
  return compose(a, d);
}

Jet cos(const Jet& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  std::array<double, 4> cyc = {c, -s, -c, s};
  std::array<double, kMaxOrder + 1> d{};
  for (int k = 0; k <= kMaxOrder; ++k) d[k] = cyc[k % 4] / factorial(k);
  return compose(a, d);
}

Jet pow(const Jet& a, int n) {
  double x = a.value();
  if (x == 0.0 && n < 0) throw DomainError("division by zero");
  std::array<double, kMaxOrder + 1> d{};
  d[0] = std::pow(x, n);
  double falling = 1.0;
  for (int k = 1; k <= kMaxOrder; ++k) {
    falling *= (n - k + 1);
    d[k] = falling == 0.0 ? 0.0 : falling / factorial(k) * std::pow(x, n - k);
  }
  return compose(a, d);
}

Jet pow_real(const Jet& a, double r) {
  double x = a.value();
  if (!(x > 0.0)) throw DomainError("real power of non-positive value");
  std::array<double, kMaxOrder + 1> d{};
  d[0] = std::pow(x, r);
  double falling = 1.0;
  for (int k = 1; k <= kMaxOrder; ++k) {
    falling *= (r - k + 1);
    d[k] = falling / factorial(k) * std::pow(x, r - k);
  }
  return compose(a, d);
}

Jet lift(const Expr& e, const Point& p, int order) {
  switch (e->op) {
    case Op::Num: return Jet(e->value, order);
    case Op::Var: return Jet::variable(e->index, p[e->index], order);
    case Op::Add: return lift(e->lhs, p, order) + lift(e->rhs, p, order);
    case Op::Sub: return lift(e->lhs, p, order) - lift(e->rhs, p, order);
    case Op::Mul: return lift(e->lhs, p, order) * lift(e->rhs, p, order);
    case Op::Div: return lift(e->lhs, p, order) / lift(e->rhs, p, order);
    case Op::Neg: return -lift(e->lhs, p, order);
    case Op::Pow: return pow(lift(e->lhs, p, order), e->index);
    case Op::Exp: return exp(lift(e->lhs, p, order));
    case Op::Ln: return ln(lift(e->lhs, p, order));
    case Op::Sin: return sin(lift(e->lhs, p, order));
    case Op::Cos: return cos(lift(e->lhs, p, order));
  }
  return Jet(0.0, order);
}

}  // namespace nsg
