#include <benchmark/benchmark.h>

#include <memory>

#include "contactlab/bounds.hpp"
#include "contactlab/catalog.hpp"
#include "contactlab/contact.hpp"
#include "contactlab/expr.hpp"
#include "contactlab/foliation.hpp"
#include "contactlab/geodesic.hpp"
#include "contactlab/levi.hpp"

using namespace contactlab;

namespace {

EvalContext entry(const char* name) { return EvalContext(catalog_get(name).spec); }

void BM_ExprTree(benchmark::State& state) {
    const Expr e = parse_expr("besselJ1(sqrt(x^2+y^2))/sqrt(x^2+y^2) * cos(2*z) + exp(-y)");
    const std::map<std::string, double> env{{"x", 0.3}, {"y", 1.2}, {"z", -0.4}};
    for (auto _ : state) benchmark::DoNotOptimize(eval_expr(e, env));
}
BENCHMARK(BM_ExprTree);

void BM_ExprProgram(benchmark::State& state) {
    const Expr e = parse_expr("besselJ1(sqrt(x^2+y^2))/sqrt(x^2+y^2) * cos(2*z) + exp(-y)");
    const Program prog(e, {"x", "y", "z"});
    const double x[3] = {0.3, 1.2, -0.4};
    for (auto _ : state) benchmark::DoNotOptimize(prog(x));
}
BENCHMARK(BM_ExprProgram);

void BM_Christoffel(benchmark::State& state) {
    const EvalContext ctx = entry("h3-upper-half");
    const Vec3 p(0.1, 0.2, 1.3);
    for (auto _ : state) benchmark::DoNotOptimize(christoffel(ctx, p));
}
BENCHMARK(BM_Christoffel);

void BM_Riemann(benchmark::State& state) {
    const EvalContext ctx = entry("s3-round");
    const Vec3 p(0.1, 0.2, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(riemann(ctx, p));
}
BENCHMARK(BM_Riemann);

void BM_ContactPoint(benchmark::State& state) {
    const EvalContext ctx = entry("r3-bessel-ot");
    const Vec3 p(1.1, -0.7, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(contact_point(ctx, p));
}
BENCHMARK(BM_ContactPoint);

void BM_MgPoint(benchmark::State& state) {
    const EvalContext ctx = entry("h3-upper-half");
    const Vec3 p(0.1, 0.2, 1.3);
    for (auto _ : state) benchmark::DoNotOptimize(m_g_point(ctx, p));
}
BENCHMARK(BM_MgPoint);

void BM_ExpMap(benchmark::State& state) {
    const EvalContext ctx = entry("h3-upper-half");
    for (auto _ : state) benchmark::DoNotOptimize(exp_map(ctx, Vec3(0, 0, 1), Vec3(0.6, 0, 0.8)));
}
BENCHMARK(BM_ExpMap);

void BM_JacobiField(benchmark::State& state) {
    const EvalContext ctx = entry("s3-round");
    for (auto _ : state)
        benchmark::DoNotOptimize(jacobi_field(ctx, Vec3::Zero(), Vec3(0.5, 0, 0), Vec3::Zero(), Vec3(0, 1, 0), 1.0));
}
BENCHMARK(BM_JacobiField);

void BM_Classify(benchmark::State& state) {
    const CatalogEntry e = catalog_get("h3-upper-half");
    const EvalContext ctx(e.spec);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(classify_compatibility(ctx, e.region, Grid{{n, n, n}}, 1e-4));
    state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Classify)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SphereChart(benchmark::State& state) {
    const EvalContext ctx = entry("s3-round");
    for (auto _ : state) benchmark::DoNotOptimize(sphere_chart(ctx, Vec3::Zero(), 0.5, 8, 16));
}
BENCHMARK(BM_SphereChart)->Unit(benchmark::kMillisecond);

void BM_TraceFlatSphere(benchmark::State& state) {
    const EvalContext ctx = entry("r3-bessel-ot");
    const FoliationConfig cfg;
    const int n = static_cast<int>(state.range(0));
    auto chart = std::make_shared<const SphereChart>(sphere_chart(ctx, Vec3::Zero(), 2.0, n, 2 * n));
    const std::vector<Vec3> seeds = meridian_seeds(24, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(trace_foliation(ctx, chart, seeds, cfg));
}
BENCHMARK(BM_TraceFlatSphere)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LeviIdentity(benchmark::State& state) {
    const EvalContext ctx = entry("t3-flat");
    const ScalarField f = [](const Vec3& x) { return 0.5 * (x - Vec3(9, 9, 9)).squaredNorm(); };
    const SymplectizationPoint x{1.0, Vec3(0.3, 0.4, 0.5)};
    const Vec4 v = complex_tangency_sample(ctx, f, x, 7);
    for (auto _ : state) benchmark::DoNotOptimize(levi_identity(ctx, f, x, v));
}
BENCHMARK(BM_LeviIdentity);

}  // namespace

BENCHMARK_MAIN();
