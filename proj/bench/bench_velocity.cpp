/// Benchmark: Biot-Savart summation, serial reference vs the table-based
/// kernel (single-threaded and OpenMP). Run manually:
///   ./bench_velocity [--benchmark_filter=...]

#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <benchmark/benchmark.h>

#include "cylflow/velocity.hpp"

using namespace cylflow;

namespace {

std::vector<Blob> make_blobs(std::size_t n) {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> ux1(-2.0, 2.0), ux2(0.0, two_pi);
    std::vector<Blob> blobs(n);
    for (auto& b : blobs) {
        b.pos = CylPoint(ux1(gen), ux2(gen));
        b.gamma = 1.0 / static_cast<double>(n);
        b.core = 0.05;
    }
    return blobs;
}

KernelConfig cfg() {
    KernelConfig c;
    c.core_radius = 0.05;
    return c;
}

void BM_SerialReference(benchmark::State& state) {
    const auto blobs = make_blobs(static_cast<std::size_t>(state.range(0)));
    std::vector<CylPoint> pts(blobs.size());
    std::vector<PointSource> srcs(blobs.size());
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        pts[i] = blobs[i].pos;
        srcs[i] = {blobs[i].pos, blobs[i].gamma};
    }
    for (auto _ : state) {
        auto v = induced_velocity_serial(pts, srcs, cfg());
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(blobs.size() * blobs.size()));
}

void BM_PairKernel1Thread(benchmark::State& state) {
    const auto blobs = make_blobs(static_cast<std::size_t>(state.range(0)));
#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
    std::vector<Vec2> out;
    for (auto _ : state) {
        self_induced_velocity(blobs, cfg(), out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(blobs.size() * blobs.size() / 2));
}

void BM_PairKernelOmp(benchmark::State& state) {
    const auto blobs = make_blobs(static_cast<std::size_t>(state.range(0)));
#ifdef _OPENMP
    omp_set_num_threads(omp_get_num_procs());
#endif
    std::vector<Vec2> out;
    for (auto _ : state) {
        self_induced_velocity(blobs, cfg(), out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(blobs.size() * blobs.size() / 2));
}

} // namespace

BENCHMARK(BM_SerialReference)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairKernel1Thread)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairKernelOmp)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
