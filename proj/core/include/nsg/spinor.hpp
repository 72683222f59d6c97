#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "nsg/geometry.hpp"

namespace nsg {

// Conformal weights of a rescaled spin frame: o^A -> Omega^v0 o^A, iota^A -> Omega^v1 iota^A,
// and w0, w1 for the primed frame.
struct Weights {
  double v0 = 0, v1 = 0, w0 = 0, w1 = 0;
};

namespace presets {
inline constexpr Weights walker{0, 0, 0, 0};
// Tetrad L = Omega^-2 l, N = n, M = m, Mt = Omega^-2 mt.
inline constexpr Weights fixed_n{-0.5, -0.5, -1.5, 0.5};
// Tetrad L = l, N = Omega^-2 n, M = Omega^-2 m, Mt = mt.
inline constexpr Weights fixed_l{-0.5, -0.5, 0.5, -1.5};
}  // namespace presets

struct NullTetrad {
  Vec4J l, n, m, mt;
  Vec4J l_flat, n_flat, m_flat, mt_flat;
};

// Walker tetrad of the unscaled Walker metric at the geometry's base point.
NullTetrad walker_tetrad(const Geometry& geo);

// Soldering basis e[2A+A'] = o_A (x) o'_A': e[0] = l, e[1] = m, e[2] = mt, e[3] = n,
// scaled by Omega^{v_A + w_A'}; theta is the dual coframe. chi = iota^A o_A and
// chit = iota^A' o_A' with indices lowered in the geometry's own metric.
struct Frame {
  std::array<Vec4J, 4> e;
  std::array<Vec4J, 4> theta;
  Jet chi, chit;
  Weights weights;
  int order = 0;
};

Frame make_frame(const Geometry& geo, const Weights& w = presets::walker);

// X(f) as a jet of one lower order.
Jet directional(const Vec4J& X, const Jet& f);

// Dyad components of a tensor of valence <= 4 given by its coordinate components
// (flattened, first index slowest). upper[i] marks contravariant slots.
std::vector<double> tensor_to_dyad(const std::vector<double>& t, const std::vector<bool>& upper, const Frame& f);
std::vector<double> dyad_to_tensor(const std::vector<double>& t, const std::vector<bool>& upper, const Frame& f);

using Mat3 = std::array<std::array<double, 3>, 3>;

struct CurvatureSpinors {
  std::array<double, 5> psi{};
  std::array<double, 5> psit{};
  Mat3 phi{};  // phi[i][j]: i unprimed ones, j primed ones
  double lambda = 0.0;
};

// Sign relating the coordinate Riemann tensor to the spinor decomposition.
extern const double kSpinorRiemannSign;

// R(e_k1, e_k2, e_k3, e_k4) with the decomposition sign applied.
Tensor4 frame_riemann(const Curvature& curv, const Frame& f);
CurvatureSpinors curvature_spinors(const Curvature& curv, const Frame& f);
Tensor4 reassemble_riemann(const CurvatureSpinors& cs, double chi, double chit);
// Phi components of a symmetric covariant tensor (its trace-free part), e.g. half the Ricci tensor.
Mat3 phi_components(const Mat4D& t, const Frame& f);

using Gam2 = std::array<std::array<Jet, 2>, 2>;

// nabla_{e_n} o_i = unprimed[n][j][i] o_j, likewise for the primed frame.
struct SpinConnection {
  std::array<Gam2, 4> unprimed, primed;
  std::array<Mat4D, 4> C{};  // C[n][j][k] = theta^j(nabla_{e_n} e_k)
  double residual = 0.0;
  int order = 0;
};

SpinConnection spin_connection(const Geometry& geo, const Frame& f);

struct SpinCoefficientTables {
  Mat4D unprimed{};
  Mat4D primed{};
};

// One table slot: coefficient = sign * chi^-1 * p^A nabla_dir q_A (p, q in {0: o, 1: iota}).
struct SlotDef {
  const char* name;
  int dir;  // soldering index of the differentiation direction
  int p, q;
  int sign;
};

const std::array<std::array<SlotDef, 4>, 4>& unprimed_slots();
const std::array<std::array<SlotDef, 4>, 4>& primed_slots();

SpinCoefficientTables spin_coefficients(const SpinConnection& conn);
SpinCoefficientTables spin_coefficients(const Geometry& geo, const Frame& f, double* residual = nullptr);

// Components (phi_A o^A, phi_A iota^A) of dyad covectors.
using Dyad2 = std::array<double, 2>;

// delta_A f = alpha_A d_v f - beta_A d_u f, components (d_u f, d_v f).
Dyad2 delta_op(const Jet& f);
// sigma_A f in the Walker frame of the unscaled Walker metric.
Dyad2 sigma_op(const Geometry& geo, const Jet& f);
// Coefficients (c_alpha, c_beta) with phi_A = c_alpha alpha_A + c_beta beta_A.
Dyad2 alpha_beta_coefficients(const Dyad2& comps);

// Symmetrized difference of both sides of the delta/sigma commutation identity,
// evaluated in the Walker frame of a pure Walker geometry.
double delta_sigma_identity_residual(const Geometry& geo, const Jet& f);

struct QuarticRoot {
  std::complex<double> z;  // root of sum_k C(4,k) q_k z^k; direction (1, z)
  bool infinite = false;   // direction (0, 1)
  int multiplicity = 1;
  bool real = true;
};

struct QuarticClass {
  std::string type;  // "O", "{1111}", "{211}", "{22}", "{31}", "{4}"
  std::vector<QuarticRoot> roots;
  double gap = 0.0;  // smallest separation between distinct roots
};

QuarticClass classify_quartic(const std::array<double, 5>& q);
// Root order of the quartic at dir; components below tol * max(1, max |psit|) count as zero.
int wps_multiplicity(const std::array<double, 5>& psit, const Dyad2& dir, double tol = 1e-9);

}  // namespace nsg
