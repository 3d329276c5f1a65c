// Reference vs optimized (serial and OpenMP) solver timings.

#include <benchmark/benchmark.h>

#include "mcsp/certificate.hpp"
#include "mcsp/gmm_solver.hpp"
#include "mcsp/maltsev_solver.hpp"
#include "mcsp/oracle.hpp"
#include "mcsp/reference.hpp"

using namespace mcsp;

namespace {

oracle::Generated lin(std::size_t p, std::size_t n, std::size_t m, bool sat) {
    oracle::GeneratorSpec spec;
    spec.family = oracle::Family::LinP;
    spec.p = p;
    spec.n = n;
    spec.m = m;
    spec.seed = 17;
    spec.satisfiable = sat;
    return oracle::generate(spec);
}

void BM_ReferenceMaltsev(benchmark::State& state) {
    const auto gen = lin(3, state.range(0), 2 * state.range(0), true);
    for (auto _ : state) benchmark::DoNotOptimize(reference::run(gen.instance, gen.op, Mode::Maltsev));
}

void BM_Maltsev(benchmark::State& state, ExecPolicy policy) {
    const auto gen = lin(3, state.range(0), 3 * state.range(0), state.range(1) != 0);
    for (auto _ : state) benchmark::DoNotOptimize(solve(gen.instance, gen.op, policy));
}

void BM_ReferenceGmm(benchmark::State& state) {
    const auto gen = lin(2, state.range(0), 2 * state.range(0), true);
    const auto ctx = make_gmm_context(gen.op);
    for (auto _ : state) benchmark::DoNotOptimize(reference::run(gen.instance, ctx.op, Mode::Gmm, &ctx.pairs));
}

void BM_Gmm(benchmark::State& state, ExecPolicy policy) {
    const auto gen = lin(2, state.range(0), 2 * state.range(0), true);
    const auto ctx = make_gmm_context(gen.op);
    for (auto _ : state) benchmark::DoNotOptimize(solve_gmm(gen.instance, ctx, policy));
}

void BM_CheckCertificate(benchmark::State& state, ExecPolicy policy) {
    const auto gen = lin(3, state.range(0), 3 * state.range(0), false);
    const std::string cert = emit_certificate(solve(gen.instance, gen.op));
    for (auto _ : state) benchmark::DoNotOptimize(check_certificate(gen.instance, gen.op, cert, policy));
}

}  // namespace

BENCHMARK(BM_ReferenceMaltsev)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Maltsev, serial, ExecPolicy::Serial)
    ->ArgsProduct({{4, 6, 8, 25, 50}, {0, 1}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Maltsev, parallel, ExecPolicy::Parallel)
    ->ArgsProduct({{4, 6, 8, 25, 50}, {0, 1}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReferenceGmm)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Gmm, serial, ExecPolicy::Serial)->Arg(3)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Gmm, parallel, ExecPolicy::Parallel)->Arg(3)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CheckCertificate, serial, ExecPolicy::Serial)->Arg(25)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CheckCertificate, parallel, ExecPolicy::Parallel)->Arg(25)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
