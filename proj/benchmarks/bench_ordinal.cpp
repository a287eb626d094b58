#include <vector>

#include <benchmark/benchmark.h>

#include "ordforms/ordinal.hpp"
#include "ordforms/synth.hpp"

using namespace ordforms;

namespace {

DissimilarityMatrix cloud(std::size_t n) {
    const auto f = SpaceForm::euclidean(2);
    return DissimilarityMatrix::from_points(f, sample_points(f, DistributionSpec::euclidean_normal(1.0), n, 1));
}

void BM_SortedIndexList(benchmark::State& state) {
    const auto d = cloud(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sorted_index_list(d));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SortedIndexList)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_SpreadFromSort(benchmark::State& state) {
    const auto d = cloud(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ordinal_spread_vector(sorted_index_list(d)));
}
BENCHMARK(BM_SpreadFromSort)->Arg(20)->Arg(100);

// Same answer as above without sorting all pairs.
void BM_SpreadCalculator(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto condensed = cloud(n).condensed();
    SpreadCalculator calc;
    for (auto _ : state) benchmark::DoNotOptimize(calc.compute(n, condensed).data());
}
BENCHMARK(BM_SpreadCalculator)->Arg(20)->Arg(100);

void BM_TreeDistances(benchmark::State& state) {
    const auto tree = random_weighted_tree(static_cast<std::size_t>(state.range(0)), 3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(tree_distance_matrix(tree));
}
BENCHMARK(BM_TreeDistances)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace
