#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ordforms/geometry.hpp"
#include "ordforms/ordinal.hpp"

namespace ordforms {

struct EmbedOptions {
    int dim = 2;
    std::size_t max_iterations = 300;
    /// Stop once the best disagreement count has not improved for this many iterations.
    std::size_t stall_window = 50;
    /// Starting dissimilarities; when unset, distances of seeded random points drawn
    /// from `init_dist` (the form's default oracle distribution when that is unset too).
    std::optional<DissimilarityMatrix> initial;
    std::optional<DistributionSpec> init_dist;
};

enum class StopReason { converged, max_iterations, cycle, stalled };

std::string to_string(StopReason reason);

struct EmbeddingResult {
    SpaceForm form = SpaceForm::euclidean(1);
    std::vector<Point> points;
    std::size_t iterations = 0;
    bool converged = false;
    std::int64_t disagreements = 0;  ///< violated ordered constraints of the returned iterate
    double p_e = 0.0;
    StopReason stop = StopReason::max_iterations;
};

/// Eigenpairs of a symmetric matrix, eigenvalues descending; each eigenvector is
/// signed so that its largest-magnitude entry is nonnegative.
struct SymmetricEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  ///< columns
};
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a);

/// Reassigns the off-diagonal values of `d` so that the r-th largest lands on the
/// r-th pair of `target`.
DissimilarityMatrix sort_to_target(const DissimilarityMatrix& d, const SortedIndexList& target);

/// Number of ordered pairs (r, s), r < s in the target, with d(target[r]) <= d(target[s]).
std::int64_t count_violated_constraints(const DissimilarityMatrix& d, const SortedIndexList& target);

struct ExactErrorMode {};
struct SampledErrorMode {
    std::size_t num_constraints = 100000;
    std::uint64_t seed = 0;
};
using ErrorMode = std::variant<ExactErrorMode, SampledErrorMode>;

/// Fraction of violated ordered constraints, exact or Monte Carlo.
double comparison_error_rate(const DissimilarityMatrix& d, const SortedIndexList& target,
                             const ErrorMode& mode = ExactErrorMode{});

/// Alternating projections between the target ordering and distance matrices of
/// `form` at dimension opts.dim. Returns the best iterate seen.
EmbeddingResult embed_nonmetric(const SpaceForm& form, const SortedIndexList& target, const EmbedOptions& opts,
                                std::uint64_t seed);

} // namespace ordforms
