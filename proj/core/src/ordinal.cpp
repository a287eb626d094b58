#include "ordforms/ordinal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ordforms/error.hpp"

namespace ordforms {

DissimilarityMatrix::DissimilarityMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols()) throw Error("dissimilarity matrix must be square");
    if (values_.rows() < 2) throw Error("dissimilarity matrix needs at least 2 points");
    const Eigen::Index n = values_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (values_(i, i) != 0.0) throw Error("dissimilarity matrix diagonal must be exactly 0");
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = values_(i, j);
            if (!std::isfinite(v)) throw Error("dissimilarity matrix has a non-finite entry");
            if (v < 0.0) throw Error("dissimilarity matrix has a negative entry");
            if (v != values_(j, i)) throw Error("dissimilarity matrix is not symmetric");
        }
    }
}

DissimilarityMatrix DissimilarityMatrix::from_points(const SpaceForm& form, std::span<const Point> points) {
    return DissimilarityMatrix(pairwise_distances(form, points));
}

DissimilarityMatrix DissimilarityMatrix::restrict(std::span<const std::size_t> indices) const {
    const auto m = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        if (indices[a] >= size()) throw Error("restrict: index out of range");
        for (Eigen::Index b = 0; b < m; ++b) {
            sub(a, b) = values_(static_cast<Eigen::Index>(indices[a]), static_cast<Eigen::Index>(indices[b]));
        }
    }
    return DissimilarityMatrix(std::move(sub));
}

std::vector<double> DissimilarityMatrix::condensed() const {
    const Eigen::Index n = values_.rows();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(choose2(n)));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(values_(i, j));
    }
    return out;
}

SortedIndexList::SortedIndexList(std::size_t n, std::vector<IndexPair> pairs) : n_(n), pairs_(std::move(pairs)) {
    if (n < 2) throw Error("index list needs at least 2 points");
    if (pairs_.size() != static_cast<std::size_t>(choose2(static_cast<std::int64_t>(n)))) {
        throw Error("index list must contain all C(n,2) pairs");
    }
    std::vector<char> seen(pairs_.size(), 0);
    for (const auto& p : pairs_) {
        if (!(p.i < p.j) || p.j >= n) throw Error("index list pair out of range or not ordered i < j");
        // row-major position of (i, j) among pairs with i < j
        const std::size_t i = p.i, j = p.j;
        const std::size_t pos = i * (2 * n - i - 1) / 2 + (j - i - 1);
        if (seen[pos]) throw Error("index list repeats a pair");
        seen[pos] = 1;
    }
}

SortedIndexList sorted_index_list(const DissimilarityMatrix& d, TiePolicy ties) {
    const std::size_t n = d.size();
    const std::vector<double> values = d.condensed();
    std::vector<IndexPair> pairs;
    pairs.reserve(values.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairs.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
        }
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // condensed position is lexicographic (i, j), so it doubles as the tie-breaker
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] > values[b] || (values[a] == values[b] && a < b);
    });
    if (ties == TiePolicy::reject) {
        for (std::size_t r = 1; r < order.size(); ++r) {
            if (values[order[r]] == values[order[r - 1]]) {
                throw Error("exact tie between dissimilarities (strict tie mode)");
            }
        }
    }
    std::vector<IndexPair> sorted;
    sorted.reserve(order.size());
    for (std::size_t idx : order) sorted.push_back(pairs[idx]);
    return SortedIndexList(n, std::move(sorted));
}

DissimilarityMatrix rank_matrix(const SortedIndexList& list) {
    const auto n = static_cast<Eigen::Index>(list.num_points());
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, n);
    const auto m = static_cast<double>(list.size());
    for (std::size_t r = 0; r < list.size(); ++r) {
        const auto& p = list[r];
        values(p.i, p.j) = values(p.j, p.i) = m - static_cast<double>(r);
    }
    return DissimilarityMatrix(std::move(values));
}

OrdinalSpreadVector ordinal_spread_vector(const SortedIndexList& list) {
    const std::size_t n = list.num_points();
    std::vector<char> seen(n, 0);
    std::vector<std::int64_t> alphas(n, 0);
    std::size_t count = 0;
    for (std::size_t r = 0; r < list.size() && count < n; ++r) {
        for (std::uint32_t p : {list[r].i, list[r].j}) {
            if (!seen[p]) {
                seen[p] = 1;
                alphas[count++] = static_cast<std::int64_t>(r + 1);
            }
        }
    }
    return OrdinalSpreadVector(std::move(alphas));
}

OrdinalSpreadVector ordinal_spread_vector(const DissimilarityMatrix& d) {
    SpreadCalculator calc;
    const auto condensed = d.condensed();
    return OrdinalSpreadVector(calc.compute(d.size(), condensed));
}

const std::vector<std::int64_t>& SpreadCalculator::compute(std::size_t n, std::span<const double> v) {
    if (n < 2) throw Error("spread vector needs at least 2 points");
    if (v.size() != static_cast<std::size_t>(choose2(static_cast<std::int64_t>(n)))) {
        throw Error("condensed dissimilarities have the wrong length");
    }
    const auto precedes = [&v](std::size_t a, std::size_t b) {
        return v[a] > v[b] || (v[a] == v[b] && a < b);
    };
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    first_pair_.assign(n, none);
    std::size_t e = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++e) {
            if (first_pair_[i] == none || precedes(e, first_pair_[i])) first_pair_[i] = e;
            if (first_pair_[j] == none || precedes(e, first_pair_[j])) first_pair_[j] = e;
        }
    }
    keys_.assign(first_pair_.begin(), first_pair_.end());
    std::sort(keys_.begin(), keys_.end(), precedes);
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());

    // rank(key t) = 1 + #{pairs f : f precedes key t}; each f precedes a suffix of keys.
    rank_diff_.assign(keys_.size() + 1, 0);
    for (std::size_t f = 0; f < v.size(); ++f) {
        const auto it = std::partition_point(keys_.begin(), keys_.end(),
                                             [&](std::size_t k) { return !precedes(f, k); });
        ++rank_diff_[static_cast<std::size_t>(it - keys_.begin())];
    }
    std::int64_t running = 0;
    for (std::size_t t = 0; t < keys_.size(); ++t) {
        running += rank_diff_[t];
        rank_diff_[t] = running + 1;
    }
    point_rank_.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        const auto it = std::lower_bound(keys_.begin(), keys_.end(), first_pair_[p], precedes);
        point_rank_[p] = rank_diff_[static_cast<std::size_t>(it - keys_.begin())];
    }
    std::sort(point_rank_.begin(), point_rank_.end());
    alphas_.assign(point_rank_.begin(), point_rank_.end());
    return alphas_;
}

std::optional<std::size_t> ordinally_dense_center(const DissimilarityMatrix& d, double rel_tol) {
    const std::size_t n = d.size();
    if (n < 3) throw Error("ordinal density needs at least 3 points");

    std::size_t a = 0, b = 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d(i, j) < d(a, b)) a = i, b = j;
        }
    }
    const auto min_excluding = [&](std::size_t skip) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (i == skip) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (j != skip) best = std::min(best, d(i, j));
            }
        }
        return best;
    };
    const double min_a = min_excluding(a);
    const double min_b = min_excluding(b);
    for (std::size_t c = 0; c < n; ++c) {
        double spoke = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != c) spoke = std::max(spoke, d(c, k));
        }
        const double rest = c == a ? min_a : c == b ? min_b : d(a, b);
        if (spoke <= rest * (1.0 + rel_tol)) return c;
    }
    return std::nullopt;
}

bool is_ordinally_dense(const DissimilarityMatrix& d, double rel_tol) {
    return ordinally_dense_center(d, rel_tol).has_value();
}

} // namespace ordforms
