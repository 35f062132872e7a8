// Serial reference vs OpenMP kernels. One CPU gives no speedup; the numbers
// are still useful for spotting overhead.

#include <benchmark/benchmark.h>

#include "bpc/search.hpp"

using namespace bpc;

static void BM_Algo1Reference(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(algo1_scan_reference(st.range(0)));
}
BENCHMARK(BM_Algo1Reference)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Algo1Serial(benchmark::State& st)
{
    Algo1Options o;
    o.p_max = st.range(0);
    o.parallel = false;
    for (auto _ : st) benchmark::DoNotOptimize(algo1_scan(o));
}
BENCHMARK(BM_Algo1Serial)->Arg(300)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_Algo1Parallel(benchmark::State& st)
{
    Algo1Options o;
    o.p_max = st.range(0);
    o.parallel = true;
    for (auto _ : st) benchmark::DoNotOptimize(algo1_scan(o));
}
BENCHMARK(BM_Algo1Parallel)->Arg(300)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_Algo1Bloom(benchmark::State& st)
{
    Algo1Options o;
    o.p_max = st.range(0);
    o.store = StoreMode::Bloom;
    o.bloom_log2_bits = 24;
    for (auto _ : st) benchmark::DoNotOptimize(algo1_scan(o));
}
BENCHMARK(BM_Algo1Bloom)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_TwoBpcReference(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(two_bpc_scan_reference(st.range(0)));
}
BENCHMARK(BM_TwoBpcReference)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_TwoBpcSerial(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(two_bpc_scan(st.range(0), false));
}
BENCHMARK(BM_TwoBpcSerial)->Arg(60)->Arg(120)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_TwoBpcParallel(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(two_bpc_scan(st.range(0), true));
}
BENCHMARK(BM_TwoBpcParallel)->Arg(60)->Arg(120)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_ExcludeFace(benchmark::State& st)
{
    const auto rank = descent_provider();
    const auto pp = ParamPair::make(st.range(0), st.range(1));
    for (auto _ : st) benchmark::DoNotOptimize(exclude_face(pp, rank));
}
BENCHMARK(BM_ExcludeFace)->Args({2, 1})->Args({5, 2})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
