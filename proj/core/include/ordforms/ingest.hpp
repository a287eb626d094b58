#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ordforms/ordinal.hpp"

namespace ordforms {

enum class SimilarityKind { dissimilarity, similarity };

struct LatLongRecord {
    std::string id;
    double latitude = 0.0;   ///< degrees, [-90, 90]
    double longitude = 0.0;  ///< degrees, (-180, 180]
};

/// Relative forest accessibility settings. Without an explicit sigma the width is
/// (1 / (sqrt(10) N^2)) * sum over ordered pairs of |x_i - x_j|.
struct RfaConfig {
    std::optional<double> sigma;
    std::optional<std::size_t> knn;  ///< symmetric k-NN edge mask; soft assignment when unset
};

struct MatrixCsv {
    DissimilarityMatrix matrix;
    std::vector<std::string> labels;
    double max_asymmetry = 0.0;  ///< max |a_ij - a_ji| before averaging
    std::vector<std::string> warnings;
};

struct FeatureTable {
    std::vector<std::string> ids;
    Eigen::MatrixXd values;  ///< one row per record
};

/// Square numeric CSV with optional header row / label column. Asymmetric input is
/// averaged (warning past 1e-6 relative), the diagonal forced to 0. Similarities are
/// converted by order reversal.
MatrixCsv read_dissimilarity_csv(const std::filesystem::path& path, SimilarityKind kind);
MatrixCsv parse_dissimilarity_csv(std::istream& in, SimilarityKind kind);

/// Dissimilarities whose sorted index list is the ascending-similarity order of
/// `similarity` (diagonal ignored): value = number of distinct off-diagonal
/// similarities strictly greater than the entry. Ties stay ties.
DissimilarityMatrix similarity_to_dissimilarity(const Eigen::MatrixXd& similarity);

/// `id,lat,lon` rows, optional header.
std::vector<LatLongRecord> read_latlong_csv(const std::filesystem::path& path);
std::vector<LatLongRecord> parse_latlong_csv(std::istream& in);

/// Great-circle distances; with radius 1 these are central angles in [0, pi].
DissimilarityMatrix haversine_matrix(std::span<const LatLongRecord> records, double radius = 1.0);

/// `id,f1..fp` rows, optional header.
FeatureTable read_features_csv(const std::filesystem::path& path);
FeatureTable parse_features_csv(std::istream& in);

DissimilarityMatrix l2_dissimilarity(const Eigen::MatrixXd& features);

/// Angles between mean-centred rows.
DissimilarityMatrix angular_dissimilarity(const Eigen::MatrixXd& features);

double rfa_auto_sigma(const Eigen::MatrixXd& features);

/// P = (I + L)^{-1}, L = D - A, A_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)) (masked by
/// k-NN when configured). Symmetric positive definite, doubly stochastic.
Eigen::MatrixXd rfa_similarity(const Eigen::MatrixXd& features, const RfaConfig& cfg = {});

} // namespace ordforms
