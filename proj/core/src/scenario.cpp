#include "nsg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nsg/charts.hpp"
#include "nsg/hyperheavenly.hpp"
#include "nsg/nullgeo.hpp"

namespace nsg {

using json = nlohmann::json;

// ---------------------------------------------------------------- parsing

namespace {

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ScenarioError(path + "/" + key, "missing field");
  return j.at(key);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ScenarioError(path, "expected string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "expected number");
  return j.get<double>();
}

void check_expr(const std::string& text, const std::string& path) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    throw ScenarioError(path, std::string("expression: ") + e.what());
  }
}

std::array<std::string, 4> four_strings(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) throw ScenarioError(path, "expected 4 expression strings");
  std::array<std::string, 4> out;
  for (int i = 0; i < 4; ++i) {
    std::string p = path + "/" + std::to_string(i);
    out[i] = get_string(j[i], p);
    check_expr(out[i], p);
  }
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ScenarioError("", "expected an object");
  Scenario s;
  s.name = get_string(require(j, "name", ""), "/name");
  const json& m = require(j, "metric", "");
  const char* keys[3] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) {
    std::string p = std::string("/metric/") + keys[i];
    s.metric[i] = get_string(require(m, keys[i], "/metric"), p);
    check_expr(s.metric[i], p);
  }
  if (j.contains("conformal_factor") && !j["conformal_factor"].is_null()) {
    const json& c = j["conformal_factor"];
    if (c.is_string()) {
      s.conformal.kind = ConformalSpec::Kind::Expression;
      s.conformal.expr = c.get<std::string>();
      check_expr(s.conformal.expr, "/conformal_factor");
    } else if (c.is_object() && c.contains("affine")) {
      const json& a = c["affine"];
      s.conformal.kind = ConformalSpec::Kind::Affine;
      s.conformal.M = get_number(require(a, "M", "/conformal_factor/affine"), "/conformal_factor/affine/M");
      s.conformal.N = get_number(require(a, "N", "/conformal_factor/affine"), "/conformal_factor/affine/N");
    } else {
      throw ScenarioError("/conformal_factor", "expected expression string or {\"affine\": {M, N}}");
    }
  }
  if (j.contains("hh") && !j["hh"].is_null()) {
    const json& h = j["hh"];
    HHSpec hs;
    hs.theta = get_string(require(h, "theta", "/hh"), "/hh/theta");
    check_expr(hs.theta, "/hh/theta");
    hs.mu = get_string(require(h, "mu", "/hh"), "/hh/mu");
    check_expr(hs.mu, "/hh/mu");
    hs.Shat = get_number(require(h, "Shat", "/hh"), "/hh/Shat");
    s.hh = hs;
  }
  if (j.contains("chart") && !j["chart"].is_null()) {
    const json& c = j["chart"];
    ChartSpec cs;
    cs.D = four_strings(require(c, "D", "/chart"), "/chart/D");
    cs.E = four_strings(require(c, "E", "/chart"), "/chart/E");
    if (c.contains("origin")) {
      const json& o = c["origin"];
      if (!o.is_array() || o.size() != 4) throw ScenarioError("/chart/origin", "expected 4 numbers");
      for (int i = 0; i < 4; ++i) cs.origin[i] = get_number(o[i], "/chart/origin/" + std::to_string(i));
    }
    s.chart = cs;
  }
  if (j.contains("test_function")) {
    s.test_function = get_string(j["test_function"], "/test_function");
    check_expr(s.test_function, "/test_function");
  }
  const json& pts = require(j, "points", "");
  if (pts.is_array()) {
    if (pts.empty()) throw ScenarioError("/points", "empty point list");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::string p = "/points/" + std::to_string(i);
      if (!pts[i].is_array() || pts[i].size() != 4) throw ScenarioError(p, "expected 4 coordinates");
      Point q{};
      for (int k = 0; k < 4; ++k) q[k] = get_number(pts[i][k], p + "/" + std::to_string(k));
      s.points.list.push_back(q);
    }
  } else if (pts.is_object()) {
    const json& seed = require(pts, "seed", "/points");
    if (!seed.is_number_integer() || seed.get<long long>() < 0) throw ScenarioError("/points/seed", "expected non-negative integer");
    s.points.seed = seed.get<std::uint64_t>();
    const json& count = require(pts, "count", "/points");
    if (!count.is_number_integer() || count.get<long long>() < 1) throw ScenarioError("/points/count", "expected integer >= 1");
    s.points.count = count.get<int>();
    const json& box = require(pts, "box", "/points");
    if (!box.is_array() || box.size() != 8) throw ScenarioError("/points/box", "expected 8 numbers");
    for (int i = 0; i < 8; ++i) s.points.box[i] = get_number(box[i], "/points/box/" + std::to_string(i));
    for (int i = 0; i < 4; ++i)
      if (!(s.points.box[2 * i] <= s.points.box[2 * i + 1])) throw ScenarioError("/points/box", "empty interval");
  } else {
    throw ScenarioError("/points", "expected a list of points or {seed, count, box}");
  }
  const json& checks = require(j, "checks", "");
  if (!checks.is_array()) throw ScenarioError("/checks", "expected a list");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string p = "/checks/" + std::to_string(i);
    std::string id = get_string(checks[i], p);
    const auto& cat = check_catalog();
    if (std::none_of(cat.begin(), cat.end(), [&](const CheckInfo& c) { return c.id == id; }))
      throw ScenarioError(p, "unknown check '" + id + "'");
    s.checks.push_back(id);
  }
  if (j.contains("tol")) {
    const json& t = j["tol"];
    if (t.contains("rel")) s.tol.rel = get_number(t["rel"], "/tol/rel");
    if (t.contains("abs")) s.tol.abs = get_number(t["abs"], "/tol/abs");
  }
  if (s.hh && s.conformal.kind != ConformalSpec::Kind::Affine)
    throw ScenarioError("/conformal_factor", "hh requires an affine conformal factor");
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["metric"] = {{"a", s.metric[0]}, {"b", s.metric[1]}, {"c", s.metric[2]}};
  if (s.conformal.kind == ConformalSpec::Kind::Expression) j["conformal_factor"] = s.conformal.expr;
  if (s.conformal.kind == ConformalSpec::Kind::Affine)
    j["conformal_factor"] = {{"affine", {{"M", s.conformal.M}, {"N", s.conformal.N}}}};
  if (s.hh) j["hh"] = {{"theta", s.hh->theta}, {"mu", s.hh->mu}, {"Shat", s.hh->Shat}};
  if (s.chart) j["chart"] = {{"D", s.chart->D}, {"E", s.chart->E}, {"origin", s.chart->origin}};
  j["test_function"] = s.test_function;
  if (!s.points.list.empty()) {
    j["points"] = s.points.list;
  } else {
    j["points"] = {{"seed", s.points.seed}, {"count", s.points.count}, {"box", s.points.box}};
  }
  j["checks"] = s.checks;
  j["tol"] = {{"rel", s.tol.rel}, {"abs", s.tol.abs}};
  return j.dump(2);
}

// ---------------------------------------------------------------- sampling

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Point> sample_points(std::uint64_t seed, int count, const std::array<double, 8>& box,
                                 const std::function<bool(const Point&)>& accept) {
  if (count < 1) throw ScenarioError("/points/count", "count must be >= 1");
  SplitMix64 rng(seed);
  std::vector<Point> out;
  long long attempts = 0;
  const long long limit = 100LL * count;
  while (static_cast<int>(out.size()) < count) {
    if (attempts++ >= limit) throw ScenarioError("/points", "unsatisfiable sampler: rejection rate above 99%");
    Point p{};
    for (int i = 0; i < 4; ++i) p[i] = box[2 * i] + (box[2 * i + 1] - box[2 * i]) * rng.uniform();
    if (!accept || accept(p)) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------- checks

namespace {

enum class Needs { Nothing, Conformal, Affine, HH, Chart, ChartAffine, XYConformal };

struct Built {
  WalkerSpec ws;
  Expr omega;  // null when absent
  bool affine = false;
  double M = 0.0, N = 0.0;
  std::optional<HHData> hh;
  std::optional<ChartTransform> ct;
  Expr test_fn;
};

double eval_const(const std::string& text, const std::string& path) {
  Expr e = parse(text);
  for (int s = 0; s < 4; ++s)
    if (depends_on(e, s)) throw ScenarioError(path, "chart blocks must be constant");
  return eval_scalar(e, Point{});
}

Built build(const Scenario& s) {
  Built b;
  b.ws = {parse(s.metric[0]), parse(s.metric[1]), parse(s.metric[2])};
  if (s.conformal.kind == ConformalSpec::Kind::Expression) {
    b.omega = parse(s.conformal.expr);
  } else if (s.conformal.kind == ConformalSpec::Kind::Affine) {
    b.affine = true;
    b.M = s.conformal.M;
    b.N = s.conformal.N;
    b.omega = make_binary(Op::Div, make_num(1.0),
                          make_binary(Op::Add, make_binary(Op::Mul, make_num(b.M), make_var(0)),
                                      make_binary(Op::Mul, make_num(b.N), make_var(1))));
  }
  if (s.hh) {
    HHData d{b.M, b.N, parse(s.hh->theta), parse(s.hh->mu), s.hh->Shat};
    try {
      hh_constants(d);
    } catch (const DomainError& e) {
      throw ScenarioError("/hh", e.what());
    }
    b.hh = d;
  }
  if (s.chart) {
    ChartTransform ct;
    for (int i = 0; i < 4; ++i) {
      ct.D[i / 2][i % 2] = eval_const(s.chart->D[i], "/chart/D/" + std::to_string(i));
      ct.E[i / 2][i % 2] = eval_const(s.chart->E[i], "/chart/E/" + std::to_string(i));
    }
    ct.origin = s.chart->origin;
    if (!(ct.D[0][0] * ct.D[1][1] - ct.D[0][1] * ct.D[1][0] > 0.0)) throw ScenarioError("/chart/D", "det D must be positive");
    b.ct = ct;
  }
  b.test_fn = parse(s.test_function);
  return b;
}

constexpr int kOrder = 4;

Geometry hatted_at(const Built& b, const Point& p) {
  if (b.hh) return hh_geometry(*b.hh, p);
  return make_geometry(b.ws, b.omega, p, kOrder);
}

using Residuals = std::vector<std::pair<std::string, double>>;

struct Eval {
  Residuals r;
  double scale = 1.0;
  bool informational = false;
};

using CheckFn = Eval (*)(const Built&, const Point&);

double amax(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t N>
double amax(const std::array<double, N>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

double amax_diff(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return amax({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
}

double tables_max(const SpinCoefficientTables& t) { return max_magnitude(t); }

Eval c_curvature_zero(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  CurvatureSpinors cs = hatted_curvature_direct(h, presets::walker);
  SpinCoefficientTables t = direct_hatted_tables(h, presets::walker);
  return {{{"curvature", max_magnitude(cs)}, {"spin_coefficients", tables_max(t)}}, 1.0};
}

Eval c_walker_scalar(const Built& b, const Point& p) {
  Geometry g = unhatted(hatted_at(b, p));
  double S = riemann_ricci(g.metric, g.gamma).scalar;
  double f = g.a.d(0, 0) + g.b.d(1, 1) + 2.0 * g.c.d(0, 1);
  return {{{"scalar", S - f}}, std::max(1.0, std::abs(S))};
}

Eval c_walker_degeneracy(const Built& b, const Point& p) {
  Geometry g = unhatted(hatted_at(b, p));
  CurvatureSpinors cs = curvature_spinors(riemann_ricci(g.metric, g.gamma), make_frame(g));
  return {{{"psit01", amax({cs.psit[0], cs.psit[1]})}, {"phi_00", amax({cs.phi[0][0], cs.phi[1][0], cs.phi[2][0]})}},
          std::max(1.0, max_magnitude(cs))};
}

Eval c_wps_multiple(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  CurvatureSpinors cs = hatted_curvature_direct(h, presets::walker);
  double mult_defect = wps_multiplicity(cs.psit, Dyad2{1.0, 0.0}, 1e-9) >= 2 ? 0.0 : 1.0;
  return {{{"psit01", conformally_walker_residual(h)}, {"multiplicity_below_two", mult_defect}},
          std::max(1.0, max_magnitude(cs))};
}

Eval c_conformal_laws(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  Eval e;
  double scale = 1.0;
  const std::pair<const char*, Weights> ws[] = {
      {"walker", presets::walker}, {"fixed_n", presets::fixed_n}, {"fixed_l", presets::fixed_l}};
  for (const auto& [name, w] : ws) {
    CurvatureSpinors d = hatted_curvature_direct(h, w);
    e.r.push_back({name, max_difference(hatted_curvature_predicted(h, w), d)});
    scale = std::max(scale, max_magnitude(d));
  }
  e.scale = scale;
  return e;
}

Eval c_weyl_invariance(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  Geometry g = unhatted(h);
  CurvatureSpinors base = curvature_spinors(riemann_ricci(g.metric, g.gamma), make_frame(g));
  CurvatureSpinors hat = hatted_curvature_direct(h, presets::walker);
  double r = 0.0, scale = 1.0;
  for (int k = 0; k < 5; ++k) {
    r = std::max({r, std::abs(hat.psi[k] - base.psi[k]), std::abs(hat.psit[k] - base.psit[k])});
    scale = std::max({scale, std::abs(base.psi[k]), std::abs(base.psit[k])});
  }
  return {{{"weyl", r}}, scale};
}

Eval c_spin_tables(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  Geometry g = unhatted(h);
  SpinCoefficientTables base = spin_coefficients(g, make_frame(g));
  auto ups = upsilon(h);
  Eval e;
  double scale = 1.0;
  const std::pair<const char*, Weights> ws[] = {{"fixed_n", presets::fixed_n}, {"fixed_l", presets::fixed_l}};
  for (const auto& [name, w] : ws) {
    SpinCoefficientTables d = direct_hatted_tables(h, w);
    e.r.push_back({name, max_difference(predicted_hatted_tables(base, ups, w, h.omega.value()), d)});
    scale = std::max(scale, tables_max(d));
  }
  e.scale = scale;
  return e;
}

const char* const kUnprimedZero[] = {"epsilon", "kappa", "tau'", "gamma'", "alpha", "rho", "sigma'", "beta'"};
const char* const kPrimedZero[] = {"epsilon~", "kappa~", "tau~'", "gamma~'", "beta~", "sigma~", "rho~'", "rho~", "tau~"};

Eval c_walker_zero_pattern(const Built& b, const Point& p) {
  Geometry g = unhatted(hatted_at(b, p));
  SpinCoefficientTables t = spin_coefficients(g, make_frame(g));
  double ru = 0.0, rp = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      std::string un = unprimed_slots()[r][c].name, pn = primed_slots()[r][c].name;
      for (const char* z : kUnprimedZero)
        if (un == z) ru = std::max(ru, std::abs(t.unprimed[r][c]));
      for (const char* z : kPrimedZero)
        if (pn == z) rp = std::max(rp, std::abs(t.primed[r][c]));
    }
  return {{{"unprimed", ru}, {"primed", rp}}, std::max(1.0, tables_max(t))};
}

Eval c_connection(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  double r = 0.0;
  for (const Weights& w : {presets::walker, presets::fixed_n, presets::fixed_l}) {
    double res = 0.0;
    spin_coefficients(h, make_frame(h, w), &res);
    r = std::max(r, res);
  }
  return {{{"metric_compatibility", r}}, 1.0};
}

Eval c_reassembly(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  Curvature curv = riemann_ricci(h.metric, h.gamma);
  Frame f = make_frame(h, presets::fixed_l);
  CurvatureSpinors cs = curvature_spinors(curv, f);
  Tensor4 a = frame_riemann(curv, f), r = reassemble_riemann(cs, f.chi.value(), f.chit.value());
  double res = 0.0, scale = 1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          res = std::max(res, std::abs(a[i][j][k][l] - r[i][j][k][l]));
          scale = std::max(scale, std::abs(a[i][j][k][l]));
        }
  return {{{"riemann", res}}, scale};
}

Eval c_delta_sigma(const Built& b, const Point& p) {
  Geometry g = unhatted(hatted_at(b, p));
  return {{{"identity", delta_sigma_identity_residual(g, lift(b.test_fn, p, 3))}}, 1.0};
}

Eval c_walker_criterion(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  WalkerCriterion wc = walker_criterion(h);
  AlphaInvariants inv = s_vector(h);
  bool s_zero = amax(inv.s) < 1e-9;
  return {{{"criterion_vs_s", wc.is_walker == s_zero ? 0.0 : 1.0}}, 1.0};
}

Eval c_rps(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  RpsReport r = rps_residual(h);
  bool zero_phi = amax(r.direct) < 1e-9, affine = amax(r.affine) < 1e-9;
  return {{{"formula", amax_diff(r.formula, r.direct)}, {"affine_iff", zero_phi == affine ? 0.0 : 1.0}},
          std::max(1.0, amax(r.direct))};
}

Eval c_box_pi(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  BoxPiReport r = box_pi_identity(h);
  return {{{"identity", r.residual}}, std::max({1.0, amax(r.lhs), amax(r.weyl)})};
}

Eval c_rescaled_chart(const Built& b, const Point& p) {
  RescaledChart r = rescaled_walker_chart(hatted_at(b, p));
  return {{{"block", r.block_residual}, {"frame", r.frame_residual}}, 1.0};
}

Eval c_scalar_hat(const Built& b, const Point& p) {
  ScalarHat s = scalar_hat(hatted_at(b, p));
  return {{{"lambda", s.formula - s.direct}}, std::max(1.0, std::abs(s.direct))};
}

Eval c_phi_mixed(const Built& b, const Point& p) {
  PhiMixed m = phi_mixed(hatted_at(b, p));
  return {{{"phi_10", amax_diff(m.formula, m.direct)}}, std::max(1.0, amax(m.direct))};
}

Eval c_hh_forms(const Built& b, const Point& p) {
  HHMetric m = hh_metric(*b.hh, p);
  return {{{"forms", m.form_residual}, {"constants", hh_constants_residual(hh_constants(*b.hh))}},
          std::max({1.0, std::abs(m.A.value()), std::abs(m.B.value()), std::abs(m.C.value())})};
}

Eval c_hh_alignment(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  CurvatureSpinors cs = hatted_curvature_direct(h, presets::fixed_l);
  return {{{"phi_00", amax({cs.phi[0][0], cs.phi[1][0], cs.phi[2][0]})},
           {"phi_10", amax({cs.phi[0][1], cs.phi[1][1], cs.phi[2][1]})},
           {"psit01", amax({cs.psit[0], cs.psit[1]})}},
          std::max(1.0, max_magnitude(cs))};
}

Eval c_hh_phi11(const Built& b, const Point& p) {
  HHPointReport r = hh_point(*b.hh, p);
  return {{{"identity", r.identity_residual}}, std::max(1.0, amax(r.phi11_direct))};
}

Eval c_hh_shift(const Built& b, const Point& p) {
  HHPointReport r = hh_point(*b.hh, p);
  return {{{"shift", r.shift_residual}}, 1.0};
}

Eval c_hh_gradient(const Built& b, const Point& p) {
  LagrangianReport r = hh_lagrangian(*b.hh, p);
  return {{{"x_minus_dl", amax(r.x_minus_dl)}}, std::max(1.0, std::abs(r.value))};
}

Eval c_hh_scalar(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  double lam = riemann_ricci(h.metric, h.gamma).lambda;
  return {{{"lambda_plus_shat_24", lam + b.hh->Shat / 24.0}}, 1.0};
}

Eval c_hh_equation(const Built& b, const Point& p) {
  LagrangianReport r = hh_lagrangian(*b.hh, p);
  return {{{"hessian", amax(r.hessian)}}, 1.0};
}

Eval c_einstein(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  CurvatureSpinors cs = hatted_curvature_direct(h, presets::fixed_l);
  double phi = 0.0;
  for (const auto& row : cs.phi)
    for (double v : row) phi = std::max(phi, std::abs(v));
  Eval e{{{"phi", phi}, {"lambda", cs.lambda}}, 1.0};
  if (b.hh) {
    LagrangianReport r = hh_lagrangian(*b.hh, p);
    e.r.push_back({"lagrangian", r.value});
    e.r.push_back({"hessian", amax(r.hessian)});
  }
  return e;
}

Eval c_omega_spinor(const Built& b, const Point& p) {
  AlphaInvariants inv = s_vector(hatted_at(b, p));
  return {{{"omega", inv.omega_residual}, {"integrability", inv.integrability_residual}},
          std::max(1.0, amax(inv.omega_predicted))};
}

Eval c_null(const Built& b, const Point& p) {
  Geometry h = hatted_at(b, p);
  DistributionReport d = distribution_report(h);
  AlphaInvariants inv = s_vector(h);
  double scale = std::max(1.0, amax(inv.s));
  return {{{"grad_dot_s", d.grad_dot_s},
           {"s_null", d.s_null},
           {"factorization", d.factorization},
           {"alignment_mismatch", d.alignment_consistent ? 0.0 : 1.0}},
          scale * scale};
}

Eval c_cited(const Built& b, const Point& p) {
  DistributionReport d = distribution_report(hatted_at(b, p));
  Eval e{{{"phi_omega_omega_pi_pi", d.phi_omega_omega}, {"phi_omega_pi_pi", amax(d.phi_omega)}}, 1.0};
  e.informational = true;
  return e;
}

ChartReport chart_report(const Built& b, const Point& p) { return chart_check(b.ws, *b.ct, p, b.test_fn); }

Eval c_chart_congruence(const Built& b, const Point& p) {
  return {{{"congruence", chart_report(b, p).congruence_residual}}, 1.0};
}

Eval c_chart_mu(const Built& b, const Point& p) {
  ChartReport r = chart_report(b, p);
  return {{{"mu", r.mu_residual}}, std::max(1.0, std::abs(r.mu_first))};
}

Eval c_chart_frame(const Built& b, const Point& p) {
  ChartReport r = chart_report(b, p);
  return {{{"frame", r.frame_residual}, {"unit_determinant", r.det_residual}}, 1.0};
}

Eval c_chart_operators(const Built& b, const Point& p) {
  ChartReport r = chart_report(b, p);
  return {{{"delta", r.delta_residual}, {"sigma", r.sigma_residual}}, 1.0};
}

Eval c_chart_a7(const Built& b, const Point& p) { return {{{"identity", chart_report(b, p).a7_residual}}, 1.0}; }

Eval c_chart_affine(const Built& b, const Point& p) {
  AffineFactorReport r = affine_factor_check(b.M, b.N, *b.ct, p);
  return {{{"transform", r.residual}}, std::max({1.0, std::abs(b.M), std::abs(b.N)})};
}

struct CheckDef {
  const char* id;
  const char* description;
  Needs needs;
  CheckFn fn;
};

const std::vector<CheckDef>& defs() {
  static const std::vector<CheckDef> d = {
      {"curvature_zero", "all curvature spinors and spin coefficients vanish", Needs::Nothing, c_curvature_zero},
      {"walker_scalar", "Walker scalar curvature equals a_uu + b_vv + 2 c_uv", Needs::Nothing, c_walker_scalar},
      {"walker_degeneracy", "Walker metric: Psi~_0 = Psi~_1 = 0 and Phi_AB0'0' = 0", Needs::Nothing, c_walker_degeneracy},
      {"wps_multiple", "pi is a multiple Weyl principal spinor of the rescaled metric", Needs::Nothing, c_wps_multiple},
      {"conformal_laws", "rescaled curvature spinors: predicted against direct", Needs::Nothing, c_conformal_laws},
      {"weyl_conformal_invariance", "Weyl spinors unchanged in unscaled frames", Needs::Nothing, c_weyl_invariance},
      {"spin_tables", "rescaled spin coefficient tables: predicted against direct", Needs::Nothing, c_spin_tables},
      {"walker_zero_pattern", "vanishing spin coefficients of Walker frames", Needs::Nothing, c_walker_zero_pattern},
      {"connection_compatibility", "spin connection reproduces the Levi-Civita connection", Needs::Nothing, c_connection},
      {"riemann_reassembly", "Riemann tensor rebuilt from curvature spinors", Needs::Nothing, c_reassembly},
      {"delta_sigma_identity", "symmetrized delta/sigma commutation identity", Needs::Nothing, c_delta_sigma},
      {"walker_criterion", "Omega constant on alpha-surfaces iff S_a = 0", Needs::Nothing, c_walker_criterion},
      {"rps_formula", "Phi-hat_AB0'0' through ln Omega; zero iff 1/Omega affine in (u, v)", Needs::Nothing, c_rps},
      {"box_pi", "box pi identity for the Walker spinor", Needs::Nothing, c_box_pi},
      {"rescaled_chart", "Omega(x, y): rescaled coordinates are Walker", Needs::XYConformal, c_rescaled_chart},
      {"scalar_hat", "closed form of Lambda-hat for affine 1/Omega", Needs::Affine, c_scalar_hat},
      {"phi_mixed", "closed forms of Phi-hat_AB1'0' for affine 1/Omega", Needs::Affine, c_phi_mixed},
      {"hh_forms", "two forms of the expanding ansatz agree; constant identities", Needs::HH, c_hh_forms},
      {"hh_ricci_alignment", "ansatz metrics: Phi-hat_AB0'0' = Phi-hat_AB1'0' = 0, multiple WPS", Needs::HH, c_hh_alignment},
      {"hh_phi11_identity", "Phi-hat_AB1'1' = Omega^-6/4 delta_(A X_B)", Needs::HH, c_hh_phi11},
      {"hh_shift_invariance", "delta_(A X_B) independent of the mu-gradient shift", Needs::HH, c_hh_shift},
      {"hh_lagrangian_gradient", "X_B = delta_B L", Needs::HH, c_hh_gradient},
      {"hh_scalar_shat", "Lambda-hat = -Shat / 24", Needs::HH, c_hh_scalar},
      {"hh_equation", "delta_A delta_B L = 0", Needs::HH, c_hh_equation},
      {"einstein_residual", "rescaled metric is Ricci-flat", Needs::Nothing, c_einstein},
      {"omega_spinor", "omega_A = Omega^-1/2 delta_A Omega and integrability of pi", Needs::Nothing, c_omega_spinor},
      {"null_distributions", "grad Omega orthogonal to S, S null and of the form omega^A pi^A'", Needs::Nothing, c_null},
      {"cited_criteria", "cited criteria for D auto-parallel and H integrable (reported only)", Needs::Nothing, c_cited},
      {"chart_congruence", "transformed metric block by congruence", Needs::Chart, c_chart_congruence},
      {"chart_mu", "two expressions of the frame parameter mu agree", Needs::Chart, c_chart_mu},
      {"chart_frame", "Walker frames related by Lambda and Lambda-tilde", Needs::Chart, c_chart_frame},
      {"chart_operators", "delta and sigma transformation rules", Needs::Chart, c_chart_operators},
      {"chart_a7", "delta/sigma identity in the transformed chart", Needs::Chart, c_chart_a7},
      {"chart_affine", "J transforms by D^T and E^T J gives the (r, s) gradient", Needs::ChartAffine, c_chart_affine},
  };
  return d;
}

const CheckDef& def(const std::string& id) {
  for (const auto& d : defs())
    if (id == d.id) return d;
  throw ScenarioError("/checks", "unknown check '" + id + "'");
}

void validate_needs(const Scenario& s, const Built& b) {
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const CheckDef& d = def(s.checks[i]);
    std::string path = "/checks/" + std::to_string(i);
    switch (d.needs) {
      case Needs::Nothing:
        break;
      case Needs::Conformal:
        if (!b.omega) throw ScenarioError(path, std::string(d.id) + " needs a conformal factor");
        break;
      case Needs::Affine:
        if (!b.affine) throw ScenarioError(path, std::string(d.id) + " needs an affine conformal factor");
        break;
      case Needs::HH:
        if (!b.hh) throw ScenarioError(path, std::string(d.id) + " needs hh data");
        break;
      case Needs::Chart:
        if (!b.ct) throw ScenarioError(path, std::string(d.id) + " needs a chart");
        break;
      case Needs::ChartAffine:
        if (!b.ct || !b.affine) throw ScenarioError(path, std::string(d.id) + " needs a chart and an affine factor");
        break;
      case Needs::XYConformal:
        if (!b.omega || b.hh || depends_on(b.omega, 0) || depends_on(b.omega, 1))
          throw ScenarioError(path, std::string(d.id) + " needs a conformal factor of (x, y) only");
        break;
    }
  }
}

bool passes(const Eval& e, const Tolerance& tol) {
  if (e.informational) return true;
  for (const auto& [name, v] : e.r)
    if (!(std::abs(v) < tol.abs + tol.rel * e.scale)) return false;
  return true;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> c = [] {
    std::vector<CheckInfo> out;
    for (const auto& d : defs()) out.push_back({d.id, d.description});
    return out;
  }();
  return c;
}

// ---------------------------------------------------------------- catalog

namespace {

Scenario base(const std::string& name, std::array<std::string, 3> metric, std::uint64_t seed,
              std::array<double, 8> box, std::vector<std::string> checks, int count = 20) {
  Scenario s;
  s.name = name;
  s.metric = std::move(metric);
  s.points.seed = seed;
  s.points.count = count;
  s.points.box = box;
  s.checks = std::move(checks);
  return s;
}

const std::array<std::string, 3> kPoly = {"u^2*x + 0.3*v*y*x", "v^2*y - 0.2*u*x + u*v", "0.5*u*v + x*y*u"};
constexpr std::array<double, 8> kUnitBox = {-1, 1, -1, 1, -1, 1, -1, 1};
constexpr std::array<double, 8> kPositiveBox = {0.5, 2, 0.5, 2, -1, 1, -1, 1};

const std::vector<std::string> kHHChecks = {"hh_forms",         "hh_ricci_alignment",     "hh_phi11_identity",
                                            "hh_shift_invariance", "hh_lagrangian_gradient", "hh_scalar_shat",
                                            "wps_multiple",     "scalar_hat",             "phi_mixed",
                                            "omega_spinor",     "null_distributions"};

Scenario hh_scenario(const std::string& name, HHSpec hh, std::uint64_t seed, std::vector<std::string> extra) {
  std::vector<std::string> checks = kHHChecks;
  checks.insert(checks.end(), extra.begin(), extra.end());
  Scenario s = base(name, {"0", "0", "0"}, seed, kPositiveBox, checks);
  s.conformal.kind = ConformalSpec::Kind::Affine;
  s.conformal.M = 0.5;
  s.conformal.N = 0.25;
  s.hh = hh;
  return s;
}

}  // namespace

std::vector<Scenario> catalog() {
  std::vector<Scenario> out;
  out.push_back(base("flat", {"0", "0", "0"}, 1, kUnitBox,
                     {"curvature_zero", "walker_scalar", "walker_degeneracy", "connection_compatibility",
                      "riemann_reassembly", "delta_sigma_identity", "omega_spinor"}));
  out.push_back(base("walker-poly", kPoly, 2, kUnitBox,
                     {"walker_scalar", "walker_degeneracy", "wps_multiple", "walker_zero_pattern", "weyl_conformal_invariance",
                      "conformal_laws", "spin_tables", "connection_compatibility", "riemann_reassembly",
                      "delta_sigma_identity", "walker_criterion", "omega_spinor", "null_distributions"}));
  {
    Scenario s = base("conf-null", {"0", "0", "0"}, 3, kPositiveBox,
                      {"einstein_residual", "rps_formula", "scalar_hat", "phi_mixed", "conformal_laws", "spin_tables",
                       "walker_criterion", "wps_multiple", "box_pi", "omega_spinor", "null_distributions",
                       "cited_criteria"});
    s.conformal.kind = ConformalSpec::Kind::Affine;
    s.conformal.M = 1.0;
    s.conformal.N = 0.5;
    out.push_back(s);
  }
  {
    Scenario s = base("conf-generic", kPoly, 4, kUnitBox,
                      {"conformal_laws", "spin_tables", "weyl_conformal_invariance", "wps_multiple", "box_pi", "rps_formula",
                       "walker_criterion", "omega_spinor", "null_distributions", "connection_compatibility",
                       "riemann_reassembly", "cited_criteria"});
    s.conformal.kind = ConformalSpec::Kind::Expression;
    s.conformal.expr = "exp(0.1*x + 0.2*u)";
    out.push_back(s);
  }
  {
    Scenario s = base("conf-xy", kPoly, 5, kUnitBox,
                      {"rescaled_chart", "walker_criterion", "conformal_laws", "spin_tables", "omega_spinor",
                       "rps_formula"});
    s.conformal.kind = ConformalSpec::Kind::Expression;
    s.conformal.expr = "exp(0.3*x*y + 0.1*y)";
    out.push_back(s);
  }
  out.push_back(hh_scenario("hh-zero", {"0", "0", 0.0}, 6, {"einstein_residual", "hh_equation"}));
  out.push_back(hh_scenario("hh-theta", {"u*v", "0", 0.0}, 7, {"hh_equation"}));
  out.push_back(hh_scenario("hh-curved", {"u^2*v + x*u + y*v^2*x", "x*y + 1", 1.0}, 8, {}));
  {
    Scenario s = base("chart-identity", kPoly, 9, kUnitBox,
                      {"chart_congruence", "chart_mu", "chart_frame", "chart_operators", "chart_a7", "chart_affine"});
    s.conformal.kind = ConformalSpec::Kind::Affine;
    s.conformal.M = 1.0;
    s.conformal.N = 0.5;
    s.chart = ChartSpec{};
    s.points.box = kPositiveBox;
    out.push_back(s);
  }
  return out;
}

std::optional<Scenario> catalog_scenario(const std::string& name) {
  for (auto& s : catalog())
    if (s.name == name) return s;
  return std::nullopt;
}

// ---------------------------------------------------------------- running

Report run_scenario(const Scenario& s, int jobs) {
  Built b = build(s);
  validate_needs(s, b);
  Report rep;
  rep.scenario = s.name;
  rep.tol = s.tol;
  if (!s.points.list.empty()) {
    rep.points = s.points.list;
  } else {
    std::function<bool(const Point&)> accept;
    if (b.omega) {
      Expr om = b.omega;
      accept = [om](const Point& p) {
        try {
          double v = eval_scalar(om, p);
          return std::isfinite(v) && v > 0.05;
        } catch (const DomainError&) {
          return false;
        }
      };
    }
    rep.points = sample_points(s.points.seed, s.points.count, s.points.box, accept);
  }
  const std::size_t n = rep.points.size();
  std::vector<std::vector<CheckOutcome>> per(n);
  auto work = [&](std::size_t i) {
    for (const auto& id : s.checks) {
      CheckOutcome o;
      o.check = id;
      o.point = static_cast<int>(i);
      try {
        Eval e = def(id).fn(b, rep.points[i]);
        o.residuals = std::move(e.r);
        o.scale = e.scale;
        o.informational = e.informational;
        o.pass = passes(Eval{o.residuals, o.scale, o.informational}, s.tol);
      } catch (const std::exception& ex) {
        o.error = ex.what();
        o.pass = false;
      }
      per[i].push_back(std::move(o));
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += jobs) work(i);
      });
    for (auto& th : pool) th.join();
  }
  rep.all_pass = true;
  for (auto& v : per)
    for (auto& o : v) {
      rep.all_pass = rep.all_pass && o.pass;
      rep.outcomes.push_back(std::move(o));
    }
  if (b.hh && std::find(s.checks.begin(), s.checks.end(), "hh_equation") != s.checks.end()) {
    rep.hh_fit.present = true;
    try {
      HHResidual r = hh_residual(*b.hh, rep.points, s.tol.abs);
      rep.hh_fit.max_hessian = r.max_hessian;
      rep.hh_fit.fitted = r.fitted;
      rep.hh_fit.eta = r.eta;
      rep.hh_fit.k = r.k;
      rep.hh_fit.fit_rms = r.fit_rms;
      rep.hh_fit.condition = r.condition;
    } catch (const std::exception& ex) {
      rep.hh_fit.error = ex.what();
    }
  }
  return rep;
}

std::string report_to_json(const Report& r) {
  json j;
  j["scenario"] = r.scenario;
  j["engine"] = kEngineVersion;
  j["conventions_fingerprint"] = fingerprint_hex();
  j["tol"] = {{"rel", r.tol.rel}, {"abs", r.tol.abs}};
  j["points"] = r.points;
  json results = json::array();
  std::map<std::string, std::pair<double, int>> summary;  // max residual, failures
  std::vector<std::string> order;
  for (const auto& o : r.outcomes) {
    json e;
    e["check"] = o.check;
    e["point"] = o.point;
    json res = json::object();
    double mx = 0.0;
    for (const auto& [k, v] : o.residuals) {
      res[k] = v;
      mx = std::max(mx, std::abs(v));
    }
    e["residuals"] = res;
    e["scale"] = o.scale;
    e["pass"] = o.pass;
    if (o.informational) e["informational"] = true;
    if (!o.error.empty()) e["error"] = o.error;
    results.push_back(e);
    if (!summary.count(o.check)) order.push_back(o.check);
    auto& s = summary[o.check];
    if (!o.informational) s.first = std::max(s.first, mx);
    if (!o.pass) ++s.second;
  }
  j["results"] = results;
  json sum = json::array();
  for (const auto& id : order)
    sum.push_back({{"check", id}, {"max_residual", summary[id].first}, {"failures", summary[id].second}});
  j["summary"] = sum;
  if (r.hh_fit.present) {
    json f;
    f["max_hessian"] = r.hh_fit.max_hessian;
    f["fitted"] = r.hh_fit.fitted;
    if (r.hh_fit.fitted) {
      f["eta"] = r.hh_fit.eta;
      f["K"] = r.hh_fit.k;
      f["fit_rms"] = r.hh_fit.fit_rms;
    }
    f["condition"] = r.hh_fit.condition;
    if (!r.hh_fit.error.empty()) f["error"] = r.hh_fit.error;
    j["hh_fit"] = f;
  }
  j["all_pass"] = r.all_pass;
  return j.dump(2) + "\n";
}

std::string report_table(const Report& r) {
  std::map<std::string, std::tuple<double, int, int>> agg;
  std::vector<std::string> order;
  for (const auto& o : r.outcomes) {
    if (!agg.count(o.check)) order.push_back(o.check);
    auto& [mx, n, fails] = agg[o.check];
    for (const auto& kv : o.residuals)
      if (!o.informational) mx = std::max(mx, std::abs(kv.second));
    ++n;
    if (!o.pass) ++fails;
  }
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "scenario %s: %zu points, tol rel %.1e abs %.1e\n", r.scenario.c_str(),
                r.points.size(), r.tol.rel, r.tol.abs);
  os << line;
  std::snprintf(line, sizeof line, "%-26s %12s %8s %s\n", "check", "max", "fail", "status");
  os << line;
  for (const auto& id : order) {
    auto [mx, n, fails] = agg[id];
    std::snprintf(line, sizeof line, "%-26s %12.3e %5d/%-3d %s\n", id.c_str(), mx, fails, n, fails ? "FAIL" : "ok");
    os << line;
  }
  for (const auto& o : r.outcomes)
    if (!o.error.empty()) os << "  error in " << o.check << " at point " << o.point << ": " << o.error << "\n";
  if (r.hh_fit.present) {
    if (!r.hh_fit.error.empty()) {
      os << "hh fit: " << r.hh_fit.error << "\n";
    } else if (r.hh_fit.fitted) {
      std::snprintf(line, sizeof line, "hh fit: eta = (%.6g, %.6g), K = %.6g, rms %.2e, cond %.2e\n", r.hh_fit.eta[0],
                    r.hh_fit.eta[1], r.hh_fit.k, r.hh_fit.fit_rms, r.hh_fit.condition);
      os << line;
    } else {
      std::snprintf(line, sizeof line, "hh fit: not affine (max |dd L| = %.3e)\n", r.hh_fit.max_hessian);
      os << line;
    }
  }
  os << (r.all_pass ? "all checks passed\n" : "some checks FAILED\n");
  return os.str();
}

// ---------------------------------------------------------------- conventions

std::string conventions_text() {
  std::ostringstream os;
  os << "nsg conventions, engine " << kEngineVersion << "\n"
     << "coordinates: (u, v, x, y), slot order 0..3\n"
     << "metric: g = [[0, I], [I, W]], W = [[a, c], [c, b]]; rescaled h = Omega^2 g\n"
     << "curvature: R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb; "
        "Ric_bd = R^a_bad; S = g^bd Ric_bd; Lambda = -S/24\n"
     << "spinor decomposition sign relative to R_abcd: -1; Phi_ab = (Ric_ab - S g_ab / 4) / 2\n"
     << "Walker tetrad: l = d_u, mt = d_v, n = d_x - (a d_u + c d_v)/2, m = (c d_u + b d_v)/2 - d_y\n"
     << "soldering: e[2A+A'] with e0 = l, e1 = m, e2 = mt, e3 = n\n"
     << "frame weights (v0, v1, w0, w1): e[2A+A'] scaled by Omega^(v_A + w_A'); chi = Omega^(v0+v1+1), "
        "chit = Omega^(w0+w1+1) for rescaled metrics\n"
     << "presets: walker (0,0,0,0); fixed_n (-1/2,-1/2,-3/2,1/2); fixed_l (-1/2,-1/2,1/2,-3/2)\n"
     << "Phi components phi[i][j]: i unprimed ones, j primed ones\n"
     << "dyad operators on functions: delta_A = (d_u, d_v), sigma_A = ((c d_u + b d_v)/2 - d_y, "
        "d_x - (a d_u + c d_v)/2)\n"
     << "quartic: sum C(4,k) q_k z^k, direction (1, z); root at infinity is (0, 1)\n"
     << "expanding ansatz: 1/Omega = M U + N V; J_A = (M, N); K^A = (-N, -M); tau = -2 M N; T^A = (U, V); "
        "partial_B = (-d_Y, d_X); d/dw = K^D delta_D\n"
     << "chart changes: constant D, E blocks; chi = +sqrt(det D)\n"
     << "transforms with non-constant D, E and the tensoriality conditions for W^AB are not checked\n"
     << "sampler: splitmix64, state += 0x9E3779B97F4A7C15, mix constants 0xBF58476D1CE4E5B9, 0x94D049BB133111EB; "
        "uniform = (z >> 11) * 2^-53; coordinates drawn u, v, x, y; points with Omega <= 0.05 rejected\n"
     << "pass rule: |r| < abs + rel * scale; defaults rel 1e-8, abs 1e-10\n";
  return os.str();
}

std::uint64_t conventions_fingerprint() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : conventions_text()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fingerprint_hex() {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(conventions_fingerprint()));
  return buf;
}

}  // namespace nsg
