#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ordforms/geometry.hpp"
#include "ordforms/ordinal.hpp"

namespace ordforms {

struct WeightedEdge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    double weight = 0.0;
    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Connected acyclic graph on n nodes with positive edge weights.
class WeightedTree {
public:
    /// Validates n - 1 edges, positive weights, connectivity (hence acyclicity).
    WeightedTree(std::size_t n, std::vector<WeightedEdge> edges);

    std::size_t num_nodes() const noexcept { return n_; }
    const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
    std::vector<std::size_t> degrees() const;
    std::size_t max_degree() const;

    friend bool operator==(const WeightedTree&, const WeightedTree&) = default;

private:
    std::size_t n_;
    std::vector<WeightedEdge> edges_;
};

/// Sequential attachment: node k joins a uniformly chosen earlier node whose degree
/// is still below `max_degree`; weights i.i.d. uniform(0, 1).
WeightedTree random_weighted_tree(std::size_t n, std::size_t max_degree, std::uint64_t seed);

/// Path-weight metric of the tree.
DissimilarityMatrix tree_distance_matrix(const WeightedTree& tree);

/// Sentinel for "no additive noise".
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Adds symmetric zero-mean Gaussian noise at the requested SNR (signal power is the
/// mean square off-diagonal entry) and clamps at zero.
DissimilarityMatrix add_noise_snr(const DissimilarityMatrix& d, double snr_db, std::uint64_t seed);

/// Reorders ranks by random swaps inside windows of half-width 2 * avg_displacement
/// until the mean |pi(r) - r| reaches the target (within 10%).
SortedIndexList permute_index_list(const SortedIndexList& list, double avg_displacement, std::uint64_t seed);

/// Mean |rank_b(pair) - rank_a(pair)| between two lists over the same points.
double mean_rank_displacement(const SortedIndexList& a, const SortedIndexList& b);

/// Moves the last point to the origin (base point) and scales every other point
/// radially to the largest radius among them. Hyperbolic inputs are handled in
/// the 'Loid spatial chart and re-lifted.
std::vector<Point> circumscribe_project(std::span<const Point> points, const SpaceForm& form);

/// Radius used by dense_hyperbolic_set: 1.01 * r_min with
/// r_min^2 = max(0, 1 - 2c) / c^2, c = 1 - cos(2 pi / (N - 1)); 1 when r_min = 0.
double dense_hyperbolic_radius(std::size_t n);

/// Regular (N-1)-gon in the first two spatial coordinates of H^d plus the base point
/// (last); ordinally dense for every N.
std::vector<Point> dense_hyperbolic_set(std::size_t n, int dim);

/// Unit regular (N-1)-gon in E^2 plus its center (last).
std::vector<Point> regular_polygon_with_center(std::size_t n);

} // namespace ordforms
