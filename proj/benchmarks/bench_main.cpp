#include "qmc/ergodic.hpp"
#include "qmc/qubit_example.hpp"
#include "qmc/statmodel.hpp"
#include "qmc/trajectories.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_Channel(benchmark::State& state) {
    std::mt19937_64 rng(1);
    qmc::Isometry iso = qmc::random_isometry(static_cast<int>(state.range(0)), 2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(qmc::channel(iso, qmc::Picture::schrodinger));
}
BENCHMARK(BM_Channel)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_Analyze(benchmark::State& state) {
    std::mt19937_64 rng(2);
    qmc::Isometry iso = qmc::random_isometry(static_cast<int>(state.range(0)), 2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(qmc::analyze(iso));
}
BENCHMARK(BM_Analyze)->Arg(2)->Arg(4)->Arg(8);

void BM_QfiFinite(benchmark::State& state) {
    qmc::QubitModel m = qmc::model(qmc::ModelId::m1);
    qmc::Isometry iso = qmc::isometry(m, 0.3);
    qmc::TangentVector tv = qmc::make_tangent(iso, -qmc::I_UNIT * qmc::numeric_derivative(m, 0.3));
    qmc::Vec phi = qmc::Vec::Zero(2);
    phi(0) = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(qmc::qfi_finite(tv, phi, static_cast<int>(state.range(0))));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_QfiFinite)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Sampling(benchmark::State& state) {
    qmc::Isometry iso = qmc::isometry(qmc::model(qmc::ModelId::m3), 0.2);
    qmc::BlockKraus ops = qmc::block_kraus(iso, qmc::standard_measurement(2));
    qmc::Mat rho = qmc::Mat::Identity(2, 2) / 2.0;
    const int n = static_cast<int>(state.range(0));
    std::uint64_t trial = 0;
    for (auto _ : state) {
        auto rng = qmc::trial_engine(7, trial++);
        benchmark::DoNotOptimize(qmc::sample_counts(ops, rho, n, rng));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Sampling)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
