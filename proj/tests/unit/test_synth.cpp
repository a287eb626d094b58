#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include <gtest/gtest.h>

#include "ordforms/error.hpp"
#include "ordforms/ordinal.hpp"
#include "ordforms/synth.hpp"
#include "support/oracles.hpp"

using namespace ordforms;

namespace {

std::vector<std::tuple<int, int, double>> edges_of(const WeightedTree& t) {
    std::vector<std::tuple<int, int, double>> out;
    for (const auto& e : t.edges()) out.emplace_back(static_cast<int>(e.u), static_cast<int>(e.v), e.weight);
    return out;
}

SortedIndexList identity_list(std::size_t n) {
    std::vector<IndexPair> pairs;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
    }
    return SortedIndexList(n, pairs);
}

} // namespace

TEST(WeightedTree, Validation) {
    EXPECT_THROW(WeightedTree(3, {{0, 1, 1.0}}), Error);
    EXPECT_THROW(WeightedTree(3, {{0, 1, 1.0}, {0, 1, 1.0}}), Error);
    EXPECT_THROW(WeightedTree(3, {{0, 1, 1.0}, {1, 2, 0.0}}), Error);
    EXPECT_THROW(WeightedTree(3, {{0, 1, 1.0}, {1, 3, 1.0}}), Error);
    EXPECT_NO_THROW(WeightedTree(3, {{0, 1, 1.0}, {1, 2, 2.0}}));
}

TEST(RandomTree, TwoNodes) {
    const auto t = random_weighted_tree(2, 1, 0);
    ASSERT_EQ(t.edges().size(), 1u);
    EXPECT_GT(t.edges()[0].weight, 0.0);
    EXPECT_LT(t.edges()[0].weight, 1.0);
}

TEST(RandomTree, DegreeCapAndEdgeCount) {
    const auto t = random_weighted_tree(1000, 3, 42);
    EXPECT_EQ(t.edges().size(), 999u);
    EXPECT_LE(t.max_degree(), 3u);
    for (const auto& e : t.edges()) {
        EXPECT_GT(e.weight, 0.0);
        EXPECT_LT(e.weight, 1.0);
    }
    EXPECT_EQ(t, random_weighted_tree(1000, 3, 42));
    EXPECT_NE(t, random_weighted_tree(1000, 3, 43));
    EXPECT_THROW(random_weighted_tree(4, 1, 0), Error);
}

TEST(TreeDistance, PathAndStar) {
    const auto path = tree_distance_matrix(WeightedTree(3, {{0, 1, 0.3}, {1, 2, 0.5}}));
    EXPECT_DOUBLE_EQ(path(0, 2), 0.8);
    const auto star = tree_distance_matrix(WeightedTree(5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}}));
    for (std::size_t i = 1; i < 5; ++i) {
        for (std::size_t j = i + 1; j < 5; ++j) EXPECT_EQ(star(i, j), 2.0);
    }
}

TEST(TreeDistance, MatchesFloydWarshall) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto t = random_weighted_tree(120, 3, seed);
        const auto d = tree_distance_matrix(t);
        const auto expected = oracle::floyd(120, edges_of(t));
        EXPECT_LE((d.values() - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
}

// Trees are 0-hyperbolic: the two largest of the three pair sums over any quadruple coincide.
TEST(TreeDistance, FourPointCondition) {
    const auto d = tree_distance_matrix(random_weighted_tree(200, 3, 9));
    std::mt19937_64 gen(10);
    std::uniform_int_distribution<std::size_t> u(0, 199);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t a = u(gen), b = u(gen), c = u(gen), e = u(gen);
        double s[] = {d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)};
        std::sort(s, s + 3);
        EXPECT_NEAR(s[1], s[2], 1e-9);
    }
}

TEST(Noise, SentinelLeavesMatrixAlone) {
    const auto d = tree_distance_matrix(random_weighted_tree(30, 3, 1));
    EXPECT_EQ(add_noise_snr(d, kNoNoise, 5).values(), d.values());
    EXPECT_THROW(add_noise_snr(d, std::nan(""), 5), Error);
}

TEST(Noise, EmpiricalSnrNearTarget) {
    const auto d = tree_distance_matrix(random_weighted_tree(150, 3, 2));  // 11175 off-diagonal entries
    for (double snr : {10.0, 20.0, 30.0}) {
        const auto noisy = add_noise_snr(d, snr, 7);
        double signal = 0.0, noise = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            for (std::size_t j = i + 1; j < d.size(); ++j) {
                signal += d(i, j) * d(i, j);
                noise += (noisy(i, j) - d(i, j)) * (noisy(i, j) - d(i, j));
            }
        }
        EXPECT_NEAR(10.0 * std::log10(signal / noise), snr, 0.5);
    }
    EXPECT_EQ(add_noise_snr(d, 20.0, 3).values(), add_noise_snr(d, 20.0, 3).values());
}

TEST(Permute, ZeroIsIdentity) {
    const auto list = identity_list(20);
    EXPECT_EQ(permute_index_list(list, 0.0, 1), list);
}

TEST(Permute, HitsTargetDisplacement) {
    // 142 points give 10011 pairs
    const auto list = identity_list(142);
    for (double target : {10.0, 100.0}) {
        const auto out = permute_index_list(list, target, 3);
        std::vector<IndexPair> a = list.pairs(), b = out.pairs();
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b);
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> rank;
        for (std::size_t r = 0; r < list.size(); ++r) rank[{list[r].i, list[r].j}] = r;
        double total = 0.0;
        for (std::size_t r = 0; r < out.size(); ++r) {
            total += std::abs(static_cast<double>(rank[{out[r].i, out[r].j}]) - static_cast<double>(r));
        }
        const double measured = total / static_cast<double>(out.size());
        EXPECT_NEAR(measured, target, 0.1 * target);
        EXPECT_DOUBLE_EQ(mean_rank_displacement(list, out), measured);
    }
    EXPECT_THROW(permute_index_list(identity_list(5), 6.0, 0), Error);
}

TEST(Circumscribe, EuclideanExample) {
    std::vector<Point> pts{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 2), Eigen::Vector2d(0, 0)};
    const auto out = circumscribe_project(pts, SpaceForm::euclidean(2));
    EXPECT_TRUE(out[0].isApprox(Eigen::Vector2d(2, 0)));
    EXPECT_TRUE(out[1].isApprox(Eigen::Vector2d(0, 2)));
    EXPECT_EQ(out[2], Eigen::Vector2d(0, 0));
    std::vector<Point> bad{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
    EXPECT_THROW(circumscribe_project(bad, SpaceForm::euclidean(2)), Error);
    EXPECT_THROW(circumscribe_project(pts, SpaceForm::spherical(1)), Error);
}

TEST(Circumscribe, EquidistantFromLastPoint) {
    for (const auto& f : {SpaceForm::euclidean(3), SpaceForm::hyperbolic(2)}) {
        const auto pts = sample_points(f, DistributionSpec::lognormal_centered(0.5), 15, 3);
        const auto out = circumscribe_project(pts, f);
        const double r = space_distance(f, out[0], out.back());
        for (std::size_t i = 0; i + 1 < out.size(); ++i) EXPECT_NEAR(space_distance(f, out[i], out.back()), r, 1e-9);
    }
}

// The projection improves the extremal estimate over many clouds; it is not monotone cloud by cloud.
TEST(Circumscribe, RaisesMaximumAndMeanSpread) {
    const auto f = SpaceForm::euclidean(2);
    std::int64_t max_before = 0, max_after = 0, sum_before = 0, sum_after = 0, lowered = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto pts = sample_points(f, DistributionSpec::euclidean_normal(1.0), 8, seed);
        const auto before = ordinal_spread_vector(DissimilarityMatrix::from_points(f, pts)).alpha(8);
        const auto after =
            ordinal_spread_vector(DissimilarityMatrix::from_points(f, circumscribe_project(pts, f))).alpha(8);
        max_before = std::max(max_before, before);
        max_after = std::max(max_after, after);
        sum_before += before;
        sum_after += after;
        lowered += after < before;
    }
    EXPECT_GE(max_after, max_before);
    EXPECT_GT(sum_after, sum_before);
    EXPECT_GT(lowered, 0);
}

TEST(DenseHyperbolic, RadiusForEightPoints) {
    EXPECT_NEAR(dense_hyperbolic_radius(8) / 1.01, 1.320, 1e-3);
    const double c = 1.0 - std::cos(2.0 * std::numbers::pi / 7.0);
    const double r = dense_hyperbolic_radius(8);
    EXPECT_GE(1.0 + c * r * r, std::sqrt(1.0 + r * r));
    for (std::size_t n = 3; n <= 7; ++n) EXPECT_EQ(dense_hyperbolic_radius(n), 1.0) << n;
}

TEST(DenseHyperbolic, EveryNUpToHundred) {
    for (std::size_t n = 3; n <= 100; ++n) {
        const auto pts = dense_hyperbolic_set(n, 2);
        ASSERT_EQ(pts.size(), n);
        const auto d = DissimilarityMatrix::from_points(SpaceForm::hyperbolic(2), pts);
        EXPECT_TRUE(is_ordinally_dense(d)) << n;
        EXPECT_TRUE(oracle::is_dense(d.values())) << n;
    }
    for (int dim = 3; dim <= 5; ++dim) {
        EXPECT_TRUE(is_ordinally_dense(DissimilarityMatrix::from_points(SpaceForm::hyperbolic(dim),
                                                                        dense_hyperbolic_set(30, dim))));
    }
}

TEST(Polygon, DensityCases) {
    const auto dense = [](std::size_t n) {
        return is_ordinally_dense(DissimilarityMatrix::from_points(SpaceForm::euclidean(2), regular_polygon_with_center(n)));
    };
    EXPECT_TRUE(dense(7));
    EXPECT_FALSE(dense(9));
    EXPECT_TRUE(dense(6));
    EXPECT_FALSE(dense(8));
}
