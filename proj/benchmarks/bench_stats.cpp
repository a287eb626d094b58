#include <memory>

#include <benchmark/benchmark.h>

#include "ordforms/stats.hpp"
#include "ordforms/synth.hpp"

using namespace ordforms;

namespace {

void BM_ReferencePmf(benchmark::State& state) {
    const auto f = SpaceForm::hyperbolic(2);
    const auto m = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(reference_pmf(f, DistributionSpec::default_for(f), 20, m, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReferencePmf)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_TreeCliquePmf(benchmark::State& state) {
    const auto d = std::make_shared<const DissimilarityMatrix>(tree_distance_matrix(random_weighted_tree(1000, 3, 1)));
    const auto m = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(empirical_alpha_pmfs({MatrixSource{d}, 20, m, 1, 1}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TreeCliquePmf)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_TvDistance(benchmark::State& state) {
    const auto f = SpaceForm::euclidean(2);
    const auto p = reference_pmf(f, DistributionSpec::default_for(f), 20, 2000, 1).at(20);
    const auto q = reference_pmf(f, DistributionSpec::default_for(f), 20, 2000, 2).at(20);
    for (auto _ : state) benchmark::DoNotOptimize(tv_distance(p, q));
}
BENCHMARK(BM_TvDistance);

} // namespace
