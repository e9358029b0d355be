#include <benchmark/benchmark.h>

#include <vector>

#include "qsb/amplify.hpp"
#include "qsb/dataset.hpp"
#include "qsb/hypothesis.hpp"
#include "qsb/ledger.hpp"
#include "qsb/numeric.hpp"
#include "qsb/oracles.hpp"
#include "qsb/rng.hpp"
#include "qsb/smoothboost.hpp"
#include "qsb/weak_learner.hpp"

namespace {

using namespace qsb;

void BM_weight_from_margin(benchmark::State& state) {
    double margin = 0.0;
    for (auto _ : state) {
        margin = margin_step(margin, 1.0, 0.1);
        benchmark::DoNotOptimize(weight_from_margin(margin, 0.2));
        if (margin > 64.0) margin = 0.0;
    }
}
BENCHMARK(BM_weight_from_margin);

void BM_weight_state_update(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const LabeledSample sample = draw_sample(make_majority_task(6, 3), m, 1);
    const DecisionStump stump(0, 0.5, 1);
    WeightState weights(m);
    for (auto _ : state) weights.update(sample, stump, 0.2, default_theta(0.2));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(m));
}
BENCHMARK(BM_weight_state_update)->Arg(256)->Arg(4096);

void BM_neumaier_sum(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    Rng rng(7, stream::checks);
    std::vector<double> xs(m);
    for (auto& x : xs) x = rng.uniform01();
    for (auto _ : state) benchmark::DoNotOptimize(neumaier_sum(xs));
}
BENCHMARK(BM_neumaier_sum)->Arg(4096);

void BM_train_stump_weighted(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const LabeledSample sample = draw_sample(make_majority_task(6, 3, 0.05), m, 3);
    Rng rng(9, stream::checks);
    std::vector<double> weights(m);
    for (auto& w : weights) w = rng.uniform01();
    for (auto _ : state) benchmark::DoNotOptimize(train_stump_weighted(sample, weights));
}
BENCHMARK(BM_train_stump_weighted)->Arg(64)->Arg(256);

void BM_rejection_draw(benchmark::State& state) {
    Rng rng(11, stream::rejection);
    CostLedger ledger;
    std::vector<double> weights(1024);
    for (auto& w : weights) w = 0.25 + 0.75 * rng.uniform01();
    for (auto _ : state)
        benchmark::DoNotOptimize(rejection_draw(weights, rng, ledger, 1024));
}
BENCHMARK(BM_rejection_draw);

void BM_prepare_distribution(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    Rng rng(13, stream::backend);
    std::vector<double> weights(m);
    for (auto& w : weights) w = 0.3 + 0.7 * rng.uniform01();
    const WeightOracle oracle(weights, 32);
    CostLedger ledger;
    for (auto _ : state)
        benchmark::DoNotOptimize(prepare_distribution_state(oracle, m, 0.25, rng, &ledger));
}
BENCHMARK(BM_prepare_distribution)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
