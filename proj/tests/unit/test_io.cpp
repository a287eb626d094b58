#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ordforms/error.hpp"
#include "ordforms/ingest.hpp"
#include "ordforms/io.hpp"

using namespace ordforms;

TEST(Io, IndexListRoundTrip) {
    const auto d = tree_distance_matrix(random_weighted_tree(15, 3, 1));
    const auto list = sorted_index_list(d);
    std::stringstream buf;
    write_index_list_csv(buf, list);
    EXPECT_EQ(buf.str().substr(0, 11), "rank,i,j\n1,");
    EXPECT_EQ(read_index_list_csv(buf), list);
    std::istringstream zero("1,0,1\n");
    EXPECT_THROW(read_index_list_csv(zero), Error);
    std::istringstream unordered("1,1,2\n3,1,3\n2,2,3\n");
    EXPECT_NO_THROW(read_index_list_csv(unordered));
    std::istringstream missing("1,1,2\n3,2,3\n");
    EXPECT_THROW(read_index_list_csv(missing), Error);
}

TEST(Io, TreeRoundTrip) {
    const auto tree = random_weighted_tree(40, 3, 2);
    std::stringstream buf;
    write_tree_csv(buf, tree);
    EXPECT_TRUE(looks_like_tree_csv(buf));
    EXPECT_EQ(read_tree_csv(buf), tree);
    std::istringstream matrix("0,1\n1,0\n");
    EXPECT_FALSE(looks_like_tree_csv(matrix));
}

TEST(Io, PmfJsonRoundTrip) {
    const PmfFamily fam{{3, Pmf::point_mass(2)}, {4, Pmf({2, 3, 4}, {0.25, 0.5, 0.25})}};
    const auto j = pmf_family_to_json(fam, 100, 9);
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j[1]["k"], 4);
    EXPECT_EQ(j[1]["n_samples"], 100);
    EXPECT_EQ(j[1]["seed"], 9);
    EXPECT_EQ(pmf_family_from_json(j), fam);
    EXPECT_EQ(pmf_family_from_json(nlohmann::json{{"pmfs", j}}), fam);
    EXPECT_THROW(pmf_family_from_json(nlohmann::json::parse(R"([{"k": 3}])")), Error);
}

TEST(Io, PmfCsv) {
    std::ostringstream one, many;
    write_pmf_csv(one, Pmf({2, 3}, {0.5, 0.5}));
    EXPECT_EQ(one.str(), "value,prob\n2,0.5\n3,0.5\n");
    write_pmf_family_csv(many, {{3, Pmf::point_mass(2)}});
    EXPECT_EQ(many.str(), "k,value,prob\n3,2,1\n");
}

TEST(Io, MatrixCsvRoundTripsThroughIngest) {
    const auto d = tree_distance_matrix(random_weighted_tree(12, 3, 3));
    std::vector<std::string> labels;
    for (int i = 0; i < 12; ++i) labels.push_back("n" + std::to_string(i));
    std::stringstream buf;
    write_matrix_csv(buf, d.values(), labels);
    const auto back = parse_dissimilarity_csv(buf, SimilarityKind::dissimilarity);
    EXPECT_EQ(back.labels, labels);
    EXPECT_EQ(back.matrix.values(), d.values());
}

TEST(Io, PointsCsv) {
    std::vector<Point> pts{Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4)};
    std::vector<std::string> ids{"a", "b"};
    std::ostringstream out;
    write_points_csv(out, ids, pts);
    EXPECT_EQ(out.str(), "id,c0,c1\na,1,2\nb,3,4\n");
}

TEST(Io, AtomicWrite) {
    const auto path = std::filesystem::temp_directory_path() / "ordforms_atomic_test.txt";
    atomic_write(path, "first");
    atomic_write(path, "second");
    EXPECT_EQ(read_text_file(path), "second");
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
    EXPECT_THROW(read_text_file(path), Error);
}
