// Microbenchmarks for the hot paths: jet arithmetic, the dual prolongation
// map, and the force pipeline along a path.

#include <benchmark/benchmark.h>

#include "alvc/mechanics.hpp"
#include "alvc/problem.hpp"
#include "alvc/prolong.hpp"
#include "alvc/util.hpp"

using namespace alvc;

namespace {

Jet<double> random_jet(Rng& rng, int order) {
    return Jet<double>(rng.vector(static_cast<std::size_t>(order) + 1, -1.0, 1.0));
}

AlgebroidStructure bench_structure() {
    std::vector<std::vector<Expr>> rho = {{parse("x1"), parse("x2"), parse("0")},
                                          {parse("-x2"), parse("0"), parse("x1")}};
    std::vector<std::vector<std::vector<Expr>>> c(
        3, std::vector<std::vector<Expr>>(3, std::vector<Expr>(3, parse("0"))));
    c[1][0][1] = parse("-2");
    c[1][1][0] = parse("2");
    c[2][0][2] = parse("2");
    c[2][2][0] = parse("-2");
    c[0][1][2] = parse("-1");
    c[0][2][1] = parse("1");
    return make_algebroid(2, 3, std::move(rho), std::move(c), "bench");
}

void BM_JetMultiply(benchmark::State& state) {
    Rng rng(1);
    const auto a = random_jet(rng, 8);
    const auto b = random_jet(rng, 8);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetMultiply);

void BM_JetExp(benchmark::State& state) {
    Rng rng(2);
    const auto a = random_jet(rng, 8);
    for (auto _ : state) benchmark::DoNotOptimize(exp(a));
}
BENCHMARK(BM_JetExp);

void BM_DualProlongation(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const auto A = bench_structure();
    Rng rng(3);
    EkCovector psi;
    psi.base.k = k;
    psi.base.x = rng.vector(2, -1.0, 1.0);
    psi.base.y.resize(3);
    psi.dy.resize(3);
    for (int i = 0; i < 3; ++i) {
        psi.base.y[static_cast<std::size_t>(i)] = rng.vector(static_cast<std::size_t>(k), -1.0, 1.0);
        psi.dy[static_cast<std::size_t>(i)] = rng.vector(static_cast<std::size_t>(k), -1.0, 1.0);
    }
    psi.dx = rng.vector(2, -1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(eps_k(A, psi));
}
BENCHMARK(BM_DualProlongation)->Arg(1)->Arg(2)->Arg(3);

void BM_ForceAlongPath(benchmark::State& state) {
    const auto A = preset_tangent(1);
    const Lagrangian L{2, parse("y1_1^2/2")};
    AdmissiblePath path;
    path.y = {parse("4*t^3")};
    path.x0 = {0.0};
    path.steps = 400;
    const PathEval<double> pe(A, path, {}, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(force_components(L, pe, 0.3));
}
BENCHMARK(BM_ForceAlongPath);

void BM_BaseFlowIntegration(benchmark::State& state) {
    const auto A = bench_structure();
    AdmissiblePath path;
    path.y = {parse("0.2*sin(t)"), parse("0.1*cos(t)"), parse("0.1")};
    path.x0 = {0.1, -0.2};
    path.steps = static_cast<int>(state.range(0));
    for (auto _ : state) {
        PathEval<double> pe(A, path, {}, 0.0);
        benchmark::DoNotOptimize(pe.x_at(1.0));
    }
}
BENCHMARK(BM_BaseFlowIntegration)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
