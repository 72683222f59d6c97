#pragma once

#include <array>

#include "nsg/expr.hpp"
#include "nsg/jet.hpp"

namespace nsg {

struct WalkerSpec {
  Expr a, b, c;
};

WalkerSpec walker_spec(const char* a, const char* b, const char* c);

template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;
template <class T>
using Arr4 = std::array<T, 4>;

using Vec4J = Arr4<Jet>;
using Mat4J = Mat4<Jet>;
using Mat4D = Mat4<double>;
using Tensor4 = Arr4<Arr4<Mat4D>>;

struct MetricJet {
  Mat4J g;
  Mat4J ginv;
  Jet detg;
  int order = 0;
};

// Walker block metric from jets of a, b, c, optionally multiplied by omega^2.
MetricJet walker_metric(const Jet& a, const Jet& b, const Jet& c, const Jet* omega = nullptr);
// omega may be null (pure Walker).
MetricJet assemble_metric(const WalkerSpec& ws, const Expr& omega, const Point& p, int K);

// gamma[a][b][c] = Gamma^a_{bc}
using Christoffel = std::array<Mat4J, 4>;
Christoffel christoffel(const MetricJet& m);

struct Curvature {
  Tensor4 riemann{};  // R^a_{bcd} = riemann[a][b][c][d]
  Tensor4 lowered{};  // R_{abcd}
  Mat4D ricci{};
  double scalar = 0.0;
  double lambda = 0.0;  // -scalar / 24
};

Curvature riemann_ricci(const MetricJet& m);
Curvature riemann_ricci(const MetricJet& m, const Christoffel& gamma);

// Wave operator g^{ab}(d_a d_b f - Gamma^c_{ab} d_c f) at the base point.
double box_scalar(const MetricJet& m, const Christoffel& gamma, const Jet& f);

// Components of the covariant Hessian nabla_a nabla_b f at the base point.
Mat4D hessian(const Christoffel& gamma, const Jet& f);

Mat4D values(const Mat4J& m);

// Conformally Walker geometry Omega^2 g_W evaluated as jets about one point.
struct Geometry {
  Point p{};
  Jet a, b, c;
  Jet omega;  // constant 1 when absent
  bool conformal = false;
  MetricJet metric;
  Christoffel gamma;
  int order = 0;
};

Geometry make_geometry(const Jet& a, const Jet& b, const Jet& c, const Jet* omega, const Point& p);
Geometry make_geometry(const WalkerSpec& ws, const Expr& omega, const Point& p, int K);

}  // namespace nsg
