#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ordforms/geometry.hpp"

namespace ordforms {

/// Symmetric, nonnegative, zero-diagonal n x n dissimilarities (n >= 2).
class DissimilarityMatrix {
public:
    /// Validates exact symmetry, an exact zero diagonal and finite nonnegative entries.
    explicit DissimilarityMatrix(Eigen::MatrixXd values);

    static DissimilarityMatrix from_points(const SpaceForm& form, std::span<const Point> points);

    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const Eigen::MatrixXd& values() const noexcept { return values_; }

    /// Principal submatrix on `indices` (in the given order).
    DissimilarityMatrix restrict(std::span<const std::size_t> indices) const;

    /// Upper triangle in row-major (i < j) order, i.e. lexicographic pair order.
    std::vector<double> condensed() const;

private:
    Eigen::MatrixXd values_;
};

/// Unordered index pair, 0-based, with i < j. Serialized formats are 1-based.
struct IndexPair {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

/// Every unordered pair over [n] exactly once, ordered by non-increasing dissimilarity.
class SortedIndexList {
public:
    /// Validates that `pairs` is a permutation of all C(n, 2) pairs.
    SortedIndexList(std::size_t n, std::vector<IndexPair> pairs);

    std::size_t num_points() const noexcept { return n_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    const IndexPair& operator[](std::size_t rank0) const { return pairs_[rank0]; }
    const std::vector<IndexPair>& pairs() const noexcept { return pairs_; }

    friend bool operator==(const SortedIndexList&, const SortedIndexList&) = default;

private:
    std::size_t n_;
    std::vector<IndexPair> pairs_;
};

enum class TiePolicy {
    lexicographic,  ///< exact ties ordered by ascending (i, j)
    reject,         ///< exact ties raise an Error
};

SortedIndexList sorted_index_list(const DissimilarityMatrix& d, TiePolicy ties = TiePolicy::lexicographic);

/// Rank-valued dissimilarities realizing `list` exactly: the pair at rank r (1-based)
/// gets C(n,2) - r + 1. Useful after editing a list (e.g. permutation noise).
DissimilarityMatrix rank_matrix(const SortedIndexList& list);

/// alpha_1..alpha_n; alpha(n) is 1-based to follow the usual notation.
class OrdinalSpreadVector {
public:
    OrdinalSpreadVector() = default;
    explicit OrdinalSpreadVector(std::vector<std::int64_t> alphas) : alphas_(std::move(alphas)) {}

    std::size_t size() const noexcept { return alphas_.size(); }
    std::int64_t alpha(std::size_t n) const { return alphas_.at(n - 1); }
    const std::vector<std::int64_t>& values() const noexcept { return alphas_; }

    friend bool operator==(const OrdinalSpreadVector&, const OrdinalSpreadVector&) = default;

private:
    std::vector<std::int64_t> alphas_;
};

/// alpha_n = first rank whose prefix of the list touches n distinct points.
OrdinalSpreadVector ordinal_spread_vector(const SortedIndexList& list);

/// Spread vector directly from dissimilarities, same tie rule as sorted_index_list.
OrdinalSpreadVector ordinal_spread_vector(const DissimilarityMatrix& d);

/// Reusable O(m log n) spread computation on condensed dissimilarities, avoiding a
/// full sort: point p first appears at the rank of its own largest pair, so only
/// the ranks of those (at most n) pairs are needed.
class SpreadCalculator {
public:
    /// `condensed` is the row-major upper triangle for n points. The returned
    /// reference stays valid until the next call.
    const std::vector<std::int64_t>& compute(std::size_t n, std::span<const double> condensed);

private:
    std::vector<std::int64_t> alphas_;
    std::vector<std::size_t> first_pair_;
    std::vector<std::size_t> keys_;
    std::vector<std::int64_t> rank_diff_;
    std::vector<std::int64_t> point_rank_;
};

/// Witness n0 of an ordinally dense set: every distance to n0 is <= every distance
/// among the remaining points. Comparisons allow a relative slack `rel_tol` so that
/// exact geometric ties (hexagon + center) survive rounding.
std::optional<std::size_t> ordinally_dense_center(const DissimilarityMatrix& d, double rel_tol = 1e-12);

bool is_ordinally_dense(const DissimilarityMatrix& d, double rel_tol = 1e-12);

/// C(n, 2).
constexpr std::int64_t choose2(std::int64_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

} // namespace ordforms
