#include <benchmark/benchmark.h>

#include "nsg/conformal.hpp"
#include "nsg/hyperheavenly.hpp"
#include "nsg/scenario.hpp"

using namespace nsg;

namespace {

const Point kP{0.7, 0.4, -0.3, 0.5};

void BM_JetProduct(benchmark::State& st) {
  Jet a = lift(parse("exp(u*x) + v"), kP, static_cast<int>(st.range(0)));
  Jet b = lift(parse("sin(y) * u + x"), kP, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetProduct)->DenseRange(1, kMaxOrder);

void BM_Lift(benchmark::State& st) {
  Expr e = parse("u^2*x + 0.3*v*y*x + sin(u + y) * exp(0.1*x)");
  for (auto _ : st) benchmark::DoNotOptimize(lift(e, kP, kMaxOrder));
}
BENCHMARK(BM_Lift);

void BM_Curvature(benchmark::State& st) {
  WalkerSpec ws = walker_spec("u^2*x + 0.3*v*y*x", "v^2*y - 0.2*u*x + u*v", "0.5*u*v + x*y*u");
  Expr om = parse("exp(0.1*x + 0.2*u)");
  for (auto _ : st) {
    Geometry g = make_geometry(ws, om, kP, 4);
    benchmark::DoNotOptimize(riemann_ricci(g.metric, g.gamma));
  }
}
BENCHMARK(BM_Curvature);

void BM_HattedSpinors(benchmark::State& st) {
  Geometry g = make_geometry(walker_spec("u^2*x", "v^2*y", "u*v"), parse("exp(0.1*x + 0.2*u)"), kP, 4);
  for (auto _ : st) benchmark::DoNotOptimize(hatted_curvature_direct(g, presets::fixed_l));
}
BENCHMARK(BM_HattedSpinors);

void BM_HHPoint(benchmark::State& st) {
  HHData d{0.5, 0.25, parse("u^2*v + x*u"), parse("x*y + 1"), 1.0};
  for (auto _ : st) benchmark::DoNotOptimize(hh_point(d, {1.1, 0.9, 0.2, -0.3}));
}
BENCHMARK(BM_HHPoint);

void BM_Scenario(benchmark::State& st) {
  Scenario s = *catalog_scenario("walker-poly");
  for (auto _ : st) benchmark::DoNotOptimize(run_scenario(s, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_Scenario)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ClassifyQuartic(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(classify_quartic({1, -0.5, 0.25, 2, -1}));
}
BENCHMARK(BM_ClassifyQuartic);

}  // namespace
BENCHMARK_MAIN();
