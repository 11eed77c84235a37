// Serial reference vs OpenMP path for the two parallel kernels.

#include <benchmark/benchmark.h>

#include "exwa/bwm/bwm.hpp"
#include "exwa/ml/forest.hpp"
#include "exwa/random.hpp"
#include "support.hpp"

#include <vector>

using namespace exwa;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_ForestFit(benchmark::State& state) {
    Rng rng(7);
    Matrix X(300, 12);
    for (auto& v : X.data()) v = rng.uniform();
    std::vector<double> y(X.rows());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 3.0 * X(i, 0) + X(i, 1) * X(i, 2) + 0.1 * rng.normal();
    ml::ForestParams params;
    params.trees = 50;
    for (auto _ : state) {
        ml::RandomForest rf;
        rf.fit(X, y, params, 42, mode(state));
        benchmark::DoNotOptimize(rf.trees().data());
    }
    label(state);
}

void BM_BwmBatch(benchmark::State& state) {
    Rng rng(11);
    std::vector<bwm::BwmInstance> batch;
    for (int i = 0; i < 200; ++i) batch.push_back(testing::random_valid_instance(rng, 3 + rng.index(6)));
    for (auto _ : state) {
        auto out = bwm::solve_batch(batch, mode(state));
        benchmark::DoNotOptimize(out.data());
    }
    label(state);
}

}  // namespace

BENCHMARK(BM_ForestFit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BwmBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
