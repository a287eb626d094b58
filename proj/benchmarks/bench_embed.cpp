#include <benchmark/benchmark.h>

#include "ordforms/embed.hpp"
#include "ordforms/ordinal.hpp"

using namespace ordforms;

namespace {

SortedIndexList planar_target(std::size_t n) {
    const auto f = SpaceForm::euclidean(2);
    return sorted_index_list(DissimilarityMatrix::from_points(f, sample_points(f, DistributionSpec::euclidean_normal(1.0), n, 5)));
}

void BM_Embed(benchmark::State& state, SpaceForm form) {
    const auto target = planar_target(static_cast<std::size_t>(state.range(0)));
    EmbedOptions opts;
    opts.dim = 2;
    for (auto _ : state) benchmark::DoNotOptimize(embed_nonmetric(form, target, opts, 1));
}
BENCHMARK_CAPTURE(BM_Embed, euclidean, SpaceForm::euclidean(2))->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Embed, hyperbolic, SpaceForm::hyperbolic(2))->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Embed, spherical, SpaceForm::spherical(2))->Arg(30)->Unit(benchmark::kMillisecond);

void BM_ExactErrorRate(benchmark::State& state) {
    const auto target = planar_target(static_cast<std::size_t>(state.range(0)));
    const auto d = rank_matrix(target);
    for (auto _ : state) benchmark::DoNotOptimize(comparison_error_rate(d, target));
}
BENCHMARK(BM_ExactErrorRate)->Arg(30)->Arg(200);

} // namespace

BENCHMARK_MAIN();
