// Timings of the hot paths: jet arithmetic, expression evaluation, frame
// brackets, prequantization frames, A-path development and period integrals.

#include <benchmark/benchmark.h>

#include <numbers>

#include "jd/apaths.hpp"
#include "jd/expr.hpp"
#include "jd/groupoids.hpp"
#include "jd/prequantize.hpp"
#include "jd/vorobjev.hpp"

using namespace jd;

namespace {

const Chart R3({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});

void BM_JetProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Point p(static_cast<std::size_t>(n), 0.3);
  const JetVec x = seed(p);
  for (auto _ : state) {
    Jet acc = x[0];
    for (int i = 1; i < n; ++i) acc = acc * x[static_cast<std::size_t>(i)] + sin(acc);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_JetProduct)->Arg(2)->Arg(5)->Arg(12);

void BM_ExprParse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse("exp(x)*sin(y*z) + (x^2 - y)/(1 + z^2)", R3));
}
BENCHMARK(BM_ExprParse);

void BM_ExprEvalJet(benchmark::State& state) {
  const ScalarField f = field_from("exp(x)*sin(y*z) + (x^2 - y)/(1 + z^2)", R3);
  const Point p{0.1, 0.2, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(f(p));
}
BENCHMARK(BM_ExprEvalJet);

void BM_SchoutenSo3(benchmark::State& state) {
  const MultiField lam = make_multi(3, 2, {{{0, 1}, field_from("z", R3)}, {{1, 2}, field_from("x", R3)},
                                           {{0, 2}, field_from("-y", R3)}});
  const Point p{0.1, 0.2, 0.3};
  for (auto _ : state) {
    const Multi m = lam(p);
    benchmark::DoNotOptimize(schouten(m, m));
  }
}
BENCHMARK(BM_SchoutenSo3);

void BM_ClosureCheck(benchmark::State& state) {
  const StructureFrame g = graph_of_2form(
      make_form(3, 2, {{{0, 1}, field_from("-z + sin(x*y)", R3)}, {{1, 2}, field_from("x + exp(y)", R3)}}), R3);
  const auto pts = sample_points(R3, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(is_closed_under_bracket(g, pts, 1e-8));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClosureCheck)->Arg(100);

void BM_LbarFramePlane(benchmark::State& state) {
  const Chart P({"x", "y"}, {{-1, 1}, {-1, 1}});
  const TwoForm om = make_form(2, 2, {{{0, 1}, field_from("1", P)}});
  PreqInput in;
  in.P = P;
  in.Q = circle_bundle(P);
  in.L = graph_of_2form(om, P);
  in.Omega = om;
  in.A = zero_vector(2);
  in.alpha = zero_form(2, 1);
  in.sigma = make_one_form({field_from("-y/2", in.Q), field_from("x/2", in.Q), field_from("1", in.Q)});
  const StructureFrame lbar = build_Lbar(in);
  const Point q{0.2, -0.4, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(lbar.matrix(q));
}
BENCHMARK(BM_LbarFramePlane);

void BM_Develop1dim(benchmark::State& state) {
  const GroupoidChart g = example_1dim();
  const AlgebroidModel model{
      graph_of_jacobi_pair(make_multi(2, 2, {{{0, 1}, field_from("-x", g.base)}}), coordinate_vector(1, 2), g.base)};
  const CoefficientPath a = [](double t) {
    VecX v(3);
    v << 0.3 * std::cos(2 * std::numbers::pi * t), 0.2, -0.1 * t;
    return v;
  };
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(develop(g, model, a, {0.2, 0.1}, n));
}
BENCHMARK(BM_Develop1dim)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SpherePeriod(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(period_integral(normalized_area_form(), unit_sphere(), n, n));
}
BENCHMARK(BM_SpherePeriod)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_VorobjevPoisson(benchmark::State& state) {
  const VorobjevData data = vorobjev_plane();
  const BivectorField pi = build_vorobjev(data);
  const auto pts = sample_points(data.total, 100, 2);
  for (auto _ : state) benchmark::DoNotOptimize(check_poisson(pi, pts, 1e-8));
}
BENCHMARK(BM_VorobjevPoisson)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
