#include <benchmark/benchmark.h>

#include "volex/expr.hpp"
#include "volex/flow.hpp"
#include "volex/geometry.hpp"
#include "volex/integrate.hpp"
#include "volex/lorentz.hpp"

using namespace volex;

namespace {

Chart torus() {
  return Chart(Signature::Riemannian, {"x1", "x2"},
               {CoordDomain::periodic(6.283185307179586), CoordDomain::periodic(6.283185307179586)});
}

Chart flrw() {
  return Chart(Signature::Lorentzian, {"t", "x", "y", "z"},
               {CoordDomain::bounded(0.5, 2.5), CoordDomain::periodic(1.0),
                CoordDomain::periodic(1.0), CoordDomain::periodic(1.0)});
}

geom::MetricSpec flrw_metric(const Chart& chart) {
  std::vector<Expr> lower;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j)
      lower.push_back(i == j ? Expr::parse(i == 0 ? "-1" : "t^(4/3)", chart)
                             : Expr::number(0.0, chart));
  return geom::MetricSpec(chart, std::move(lower));
}

void JetEvaluation(benchmark::State& state) {
  const Chart chart = torus();
  const Expr e = Expr::parse("sin(x1)*exp(cos(x2)) + x1^3/(2 + cos(x1 - x2))", chart);
  const std::vector<double> p{0.7, 1.9};
  for (auto _ : state) {
    auto jet = e.eval_jet2(p);
    benchmark::DoNotOptimize(jet);
  }
}
BENCHMARK(JetEvaluation);

void CurvatureFlrw(benchmark::State& state) {
  const Chart chart = flrw();
  const auto g = flrw_metric(chart);
  const std::vector<double> p{1.3, 0.2, 0.5, 0.8};
  for (auto _ : state) {
    auto curv = geom::curvature(chart, g, p);
    benchmark::DoNotOptimize(curv);
  }
}
BENCHMARK(CurvatureFlrw);

void ExpansionAcceleration(benchmark::State& state) {
  const Chart chart = flrw();
  const auto g = flrw_metric(chart);
  const auto xi = geom::VectorFieldSpec::parse(chart, {"1", "0", "0", "0"});
  const std::vector<double> p{1.3, 0.2, 0.5, 0.8};
  for (auto _ : state) {
    auto acc = geom::expansion_acceleration(chart, g, xi, p);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(ExpansionAcceleration);

void RaychaudhuriResidual(benchmark::State& state) {
  const Chart chart = flrw();
  const auto g = flrw_metric(chart);
  const lorentz::SliceSpec slice(chart, g, 0, 1.0);
  const std::vector<double> q{0.2, 0.5, 0.8};
  for (auto _ : state) {
    auto terms = lorentz::raychaudhuri_residual(slice, q);
    benchmark::DoNotOptimize(terms);
  }
}
BENCHMARK(RaychaudhuriResidual);

void GreenCheckTorus(benchmark::State& state) {
  const Chart chart = torus();
  std::vector<Expr> lower{Expr::number(1.0, chart), Expr::number(0.0, chart),
                          Expr::number(1.0, chart)};
  const geom::MetricSpec g(chart, std::move(lower));
  const auto x =
      geom::VectorFieldSpec::parse(chart, {"cos(x1)*sin(x2)", "sin(x1)*cos(x2)"});
  const quad::GridSpec grid = quad::GridSpec::uniform(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    auto res = quad::green_check(chart, g, x, grid);
    benchmark::DoNotOptimize(res);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(GreenCheckTorus)->RangeMultiplier(2)->Range(16, 64)->Complexity();

void Rk4Trajectory(benchmark::State& state) {
  const Chart chart = torus();
  const auto xi = geom::VectorFieldSpec::parse(chart, {"sin(x2)", "cos(x1)"});
  const std::vector<double> x0{0.5, 0.5};
  for (auto _ : state) {
    auto path = flow::integrate_trajectory(chart, xi, x0, 2.0, 256);
    benchmark::DoNotOptimize(path);
  }
}
BENCHMARK(Rk4Trajectory);

}  // namespace

BENCHMARK_MAIN();
