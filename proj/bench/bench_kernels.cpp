// Serial reference vs OpenMP kernels on the default analysis window
// (500 frames of 2048 samples) and the default 23 x 23 map.

#include "gonio/features.hpp"
#include "gonio/som.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

gonio::AudioBuffer noise_song(std::size_t samples)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    gonio::AudioBuffer buf;
    buf.sample_rate = 22050;
    buf.source_id = "bench";
    buf.left.resize(samples);
    buf.right.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        buf.left[i] = u(rng);
        buf.right[i] = 0.7 * buf.left[i] + 0.3 * u(rng);
    }
    return buf;
}

const gonio::AudioBuffer& song()
{
    static const gonio::AudioBuffer buf = noise_song(500 * 2048);
    return buf;
}

void BM_FeaturesSerial(benchmark::State& state)
{
    const auto frames = gonio::extract_frames(song(), {});
    for (auto _ : state)
        benchmark::DoNotOptimize(gonio::extract_features_serial(frames));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frames.size()));
}

void BM_FeaturesOpenMP(benchmark::State& state)
{
    const auto frames = gonio::extract_frames(song(), {});
    for (auto _ : state)
        benchmark::DoNotOptimize(gonio::extract_features(frames));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frames.size()));
}

gonio::SomModel random_model()
{
    gonio::Dataset data(2);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double p[] = {n(rng), n(rng)};
        data.push_back(p);
    }
    return gonio::initialize(data, {});
}

void BM_UMatrixSerial(benchmark::State& state)
{
    const auto model = random_model();
    for (auto _ : state)
        benchmark::DoNotOptimize(gonio::u_matrix_serial(model));
}

void BM_UMatrixOpenMP(benchmark::State& state)
{
    const auto model = random_model();
    for (auto _ : state)
        benchmark::DoNotOptimize(gonio::u_matrix(model));
}

void BM_BmuBatchSerial(benchmark::State& state)
{
    const auto model = random_model();
    const auto frames_data = gonio::Dataset(2, std::vector<double>(2 * 4096, 0.25));
    for (auto _ : state)
        benchmark::DoNotOptimize(gonio::bmu_batch_serial(model, frames_data));
}

void BM_BmuBatchOpenMP(benchmark::State& state)
{
    const auto model = random_model();
    const auto frames_data = gonio::Dataset(2, std::vector<double>(2 * 4096, 0.25));
    for (auto _ : state)
        benchmark::DoNotOptimize(gonio::bmu_batch(model, frames_data));
}

} // namespace

BENCHMARK(BM_FeaturesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeaturesOpenMP)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UMatrixSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_UMatrixOpenMP)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BmuBatchSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BmuBatchOpenMP)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
