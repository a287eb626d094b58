#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ordforms/geometry.hpp"
#include "ordforms/ordinal.hpp"

namespace ordforms {

/// Finite PMF over a strictly increasing integer support.
class Pmf {
public:
    Pmf() = default;
    /// Validates nonnegative probabilities summing to 1 within 1e-12.
    Pmf(std::vector<std::int64_t> support, std::vector<double> probs);

    static Pmf point_mass(std::int64_t value) { return Pmf({value}, {1.0}); }
    /// Normalized histogram; zero counts are dropped.
    static Pmf from_counts(const std::map<std::int64_t, std::int64_t>& counts);

    const std::vector<std::int64_t>& support() const noexcept { return support_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    double prob(std::int64_t value) const;
    bool empty() const noexcept { return support_.empty(); }
    std::int64_t min_value() const { return support_.front(); }
    std::int64_t max_value() const { return support_.back(); }

    friend bool operator==(const Pmf&, const Pmf&) = default;

private:
    std::vector<std::int64_t> support_;
    std::vector<double> probs_;
};

/// PMFs of alpha_k keyed by k.
using PmfFamily = std::map<int, Pmf>;

/// Point clouds drawn afresh for every sample.
struct GeneratorSource {
    SpaceForm form;
    DistributionSpec dist;
};

/// Clique subsampling from a fixed dissimilarity matrix.
struct MatrixSource {
    std::shared_ptr<const DissimilarityMatrix> matrix;
};

using SampleSource = std::variant<MatrixSource, GeneratorSource>;

struct SamplingPlan {
    SampleSource source;
    std::size_t clique_size = 20;
    std::size_t num_samples = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    /// Checks 4 <= N <= source size (for matrices) and M >= 1.
    void validate() const;
};

/// For sample m = 0..M-1, drawn from stream (seed, m): a uniform N-subset of the
/// matrix (or a fresh N-point cloud), its spread vector, and histograms of every
/// alpha_k for k = 3..N. Independent of `threads`.
PmfFamily empirical_alpha_pmfs(const SamplingPlan& plan);

/// Oracle PMFs for M random N-point clouds on `form`.
PmfFamily reference_pmf(const SpaceForm& form, const DistributionSpec& spec, std::size_t n, std::size_t m,
                        std::uint64_t seed, unsigned threads = 1);

/// Unhalved total variation: sum over the union support of |p - q|, in [0, 2].
double tv_distance(const Pmf& p, const Pmf& q);

struct SingleMode {
    int k;
};
/// Aggregate over k in [k_min, k_max]; unset bounds mean 3..N.
struct AggregateMode {
    std::optional<int> k_min;
    std::optional<int> k_max;
};
using DetectMode = std::variant<SingleMode, AggregateMode>;

struct Hypothesis {
    std::string label;
    PmfFamily pmfs;
};

struct DetectionReport {
    std::vector<std::pair<std::string, double>> distances;  ///< in hypothesis order
    std::vector<std::string> winners;                       ///< every label at the minimum
    double margin = 0.0;                                    ///< runner-up minus winner; 0 on ties
    std::string mode;                                       ///< "single" or "aggregate"
    int k_min = 0;
    int k_max = 0;

    bool tied() const noexcept { return winners.size() > 1; }
    /// The unique winner, or nullopt on a tie.
    std::optional<std::string> winner() const;
};

/// Minimum-TV test of `target` against each hypothesis.
DetectionReport detect_space_form(const PmfFamily& target, const std::vector<Hypothesis>& hypotheses,
                                  const DetectMode& mode);

enum class Projection { none, circumscribed };

/// Max alpha_N over the plan's samples for each requested clique size (the plan's
/// own clique_size when `clique_sizes` is empty). Circumscribed projection needs a
/// Euclidean or hyperbolic generator source.
std::map<std::size_t, std::int64_t> max_observed_spread(const SamplingPlan& plan,
                                                        std::span<const std::size_t> clique_sizes,
                                                        Projection projection = Projection::none);

} // namespace ordforms
