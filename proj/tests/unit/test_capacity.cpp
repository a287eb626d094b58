#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "ordforms/capacity.hpp"
#include "ordforms/ordinal.hpp"
#include "support/oracles.hpp"

using namespace ordforms;

TEST(Turan, Examples) {
    for (int n = 1; n <= 10; ++n) EXPECT_EQ(turan_edge_count(n, 1), 0);
    EXPECT_EQ(turan_edge_count(12, 6), 60);
    EXPECT_EQ(turan_edge_count(5, 7), 10);
    EXPECT_EQ(turan_edge_count(5, 5), 10);
}

TEST(Turan, MatchesExplicitGraph) {
    for (int n = 1; n <= 40; ++n) {
        for (int k = 1; k <= 45; ++k) EXPECT_EQ(turan_edge_count(n, k), oracle::turan_edges(n, k)) << n << "," << k;
    }
}

TEST(Turan, PartSizes) {
    const TuranGraphSpec t{17, 5};
    EXPECT_EQ(t.base_part_size(), 3);
    EXPECT_EQ(t.n_large_parts(), 2);
    EXPECT_EQ(t.part_sizes(), (std::vector<std::int64_t>{4, 4, 3, 3, 3}));
}

TEST(Capacity, Values) {
    EXPECT_EQ(ordinal_capacity(SpaceForm::euclidean(2)), Capacity::finite(7));
    EXPECT_EQ(ordinal_capacity(SpaceForm::euclidean(3)), Capacity::finite(16));
    EXPECT_EQ(ordinal_capacity(SpaceForm::spherical(2)), Capacity::finite(7));
    const std::int64_t rho[] = {2, 6, 15, 31, 59, 106};
    for (int d = 1; d <= 6; ++d) EXPECT_EQ(ordinal_capacity(SpaceForm::euclidean(d)).value(), rho[d - 1] + 1);
    for (int d = 1; d <= 10; ++d) EXPECT_TRUE(ordinal_capacity(SpaceForm::hyperbolic(d)).is_infinite());
    EXPECT_THROW(ordinal_capacity(SpaceForm::euclidean(7)), Error);
    EXPECT_EQ(Capacity::infinite().to_string(), "inf");
    EXPECT_THROW(Capacity::infinite().value(), Error);
}

TEST(Capacity, TableExactness) {
    const auto& t = CapPackingTable::builtin();
    EXPECT_TRUE(t.is_exact(1));
    EXPECT_TRUE(t.is_exact(2));
    EXPECT_FALSE(t.is_exact(3));
    EXPECT_FALSE(t.rho(7).has_value());
}

TEST(Capacity, ExtendedTableFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "ordforms_table_test.csv";
    {
        std::ofstream out(path);
        out << "d,rho,exact\n7,200,0\n";
    }
    const auto t = CapPackingTable::extended_from_file(path);
    EXPECT_EQ(t.rho(7), 200);
    EXPECT_EQ(t.rho(2), 6);
    EXPECT_EQ(ordinal_capacity(SpaceForm::euclidean(7), t).value(), 201);
    std::filesystem::remove(path);
}

TEST(NPointSpread, GoldenRows) {
    const std::int64_t ns[] = {6, 8, 10, 12, 14, 16, 18, 20};
    const std::int64_t e2[] = {11, 21, 34, 51, 71, 94, 121, 151};
    const std::int64_t e3[] = {11, 22, 37, 56, 79, 106, 135, 168};
    for (int i = 0; i < 8; ++i) {
        EXPECT_EQ(n_point_ordinal_spread(SpaceForm::euclidean(2), ns[i]), e2[i]);
        EXPECT_EQ(n_point_ordinal_spread(SpaceForm::euclidean(3), ns[i]), e3[i]);
    }
    EXPECT_EQ(n_point_ordinal_spread(SpaceForm::euclidean(3), 100), 4573);
    EXPECT_EQ(n_point_ordinal_spread(SpaceForm::euclidean(4), 20), 172);
    EXPECT_EQ(n_point_ordinal_spread(SpaceForm::hyperbolic(2), 13), 67);
}

TEST(NPointSpread, FormulaCellsDifferingFromPublishedTable) {
    EXPECT_EQ(n_point_ordinal_spread(SpaceForm::euclidean(2), 13), 61);
    EXPECT_EQ(n_point_ordinal_spread(SpaceForm::euclidean(2), 100), 4084);
}

TEST(NPointSpread, MatchesTuranOracleAndBounds) {
    for (int d = 1; d <= 6; ++d) {
        const auto f = SpaceForm::euclidean(d);
        const int k = static_cast<int>(ordinal_capacity(f).value());
        for (int n = 2; n <= 60; ++n) {
            const auto a = n_point_ordinal_spread(f, n);
            EXPECT_EQ(a, oracle::turan_edges(n - 1, k - 1) + 1);
            EXPECT_LE(a, choose2(n - 1) + 1);
            EXPECT_EQ(n_point_ordinal_spread(SpaceForm::spherical(d), n), a);
        }
    }
    for (int n = 2; n <= 60; ++n) EXPECT_EQ(n_point_ordinal_spread(SpaceForm::hyperbolic(5), n), choose2(n - 1) + 1);
    EXPECT_THROW(n_point_ordinal_spread(SpaceForm::euclidean(2), 1), Error);
}

TEST(DimensionBound, PublishedSpreadRow) {
    const std::map<std::int64_t, std::int64_t> observed{{6, 11},   {8, 22},   {10, 37},  {12, 56},  {14, 79},
                                                        {16, 106}, {18, 137}, {20, 169}, {100, 4421}};
    EXPECT_EQ(dimension_lower_bound(observed), 4);
}

TEST(DimensionBound, Examples) {
    std::map<std::int64_t, std::int64_t> minimal;
    for (std::int64_t n = 4; n <= 50; ++n) minimal[n] = (n + 1) / 2;
    EXPECT_EQ(dimension_lower_bound(minimal), 1);
    EXPECT_EQ(dimension_lower_bound({{8, 22}}), 3);
}

TEST(DimensionBound, HyperbolicSpreadExceedsTable) {
    try {
        dimension_lower_bound({{200, choose2(199) + 1}});
        FAIL() << "expected DimensionBoundError";
    } catch (const DimensionBoundError& e) {
        EXPECT_EQ(e.violating_n(), 200);
    }
}

TEST(DimensionBound, MonotoneInObservations) {
    std::map<std::int64_t, std::int64_t> obs{{10, 30}};
    int prev = dimension_lower_bound(obs);
    for (std::int64_t a = 31; a <= 37; ++a) {
        obs[10] = a;
        const int d = dimension_lower_bound(obs);
        EXPECT_GE(d, prev);
        prev = d;
    }
}

TEST(TreeDegreeBound, Examples) {
    EXPECT_EQ(tree_degree_lower_bound(3), 2);
    EXPECT_EQ(tree_degree_lower_bound(6), 2);
    EXPECT_EQ(tree_degree_lower_bound(7), 3);
    EXPECT_EQ(tree_degree_lower_bound(1), 1);
    EXPECT_EQ(tree_degree_lower_bound(2), 1);
}

TEST(RefinedCapAngle, Examples) {
    EXPECT_NEAR(refined_cap_angle(1e-9), std::numbers::pi / 6, 1e-9);
    EXPECT_NEAR(refined_cap_angle(std::numbers::pi / 2), std::numbers::pi / 4, 1e-12);
    EXPECT_NEAR(refined_cap_angle(std::numbers::pi / 3), 0.5 * std::acos(1.0 / 3.0), 1e-12);
    EXPECT_NEAR(refined_cap_angle(std::numbers::pi / 3), 0.6155, 1e-4);
}

TEST(RefinedCapAngle, IncreasesWithSeparation) {
    double prev = refined_cap_angle(0.01);
    for (double d = 0.02; d < 3.1; d += 0.01) {
        const double a = refined_cap_angle(d);
        EXPECT_GE(a, prev);
        prev = a;
    }
}
