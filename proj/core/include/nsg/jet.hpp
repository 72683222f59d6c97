#pragma once

#include <array>
#include <stdexcept>

#include "nsg/expr.hpp"

namespace nsg {

inline constexpr int kMaxOrder = 4;
inline constexpr int kMaxCoeffs = 70;

using MultiIndex = std::array<int, 4>;

class OrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of multi-indices with |i| <= K in four variables.
int coeff_count(int K);
// Graded-lexicographic position of a multi-index: degree first, then
// descending exponent of u, v, x.
int index_of(const MultiIndex& m);
const MultiIndex& multi_index(int idx);

// Truncated Taylor expansion; coeffs[index_of(i)] = d^i f / i! at the base point.
class Jet {
 public:
  Jet() : Jet(0.0, kMaxOrder) {}
  explicit Jet(double c, int order = kMaxOrder);

  static Jet variable(int slot, double at, int order);

  int order() const { return order_; }
  double value() const { return c_[0]; }
  double coeff(int idx) const { return c_[idx]; }
  double& coeff(int idx) { return c_[idx]; }
  double partial(const MultiIndex& m) const;
  // Partial derivative of first order along slot.
  double d(int slot) const;
  double d(int s1, int s2) const;

  Jet truncated(int order) const;
  // Jet of the partial derivative along slot; order drops by one.
  Jet deriv(int slot) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a);

 private:
  int order_;
  std::array<double, kMaxCoeffs> c_{};
};

Jet operator+(const Jet& a, double s);
Jet operator+(double s, const Jet& a);
Jet operator-(const Jet& a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(const Jet& a, double s);
Jet operator*(double s, const Jet& a);
Jet operator/(const Jet& a, double s);
Jet operator/(double s, const Jet& a);

Jet exp(const Jet& a);
Jet ln(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, int n);
// Real power of a jet with positive value.
Jet pow_real(const Jet& a, double r);

Jet lift(const Expr& e, const Point& p, int order);

}  // namespace nsg
