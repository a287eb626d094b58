#include "ordforms/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ordforms/error.hpp"
#include "ordforms/rng.hpp"

namespace ordforms {

WeightedTree::WeightedTree(std::size_t n, std::vector<WeightedEdge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 2) throw Error("tree needs at least 2 nodes");
    if (edges_.size() != n - 1) throw Error("tree on n nodes needs exactly n - 1 edges");
    // union-find: n - 1 edges without a cycle means connected
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges_) {
        if (e.u >= n || e.v >= n || e.u == e.v) throw Error("tree edge endpoint out of range");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw Error("tree edge weights must be positive");
        const auto a = find(e.u), b = find(e.v);
        if (a == b) throw Error("tree edges contain a cycle");
        parent[a] = b;
    }
}

std::vector<std::size_t> WeightedTree::degrees() const {
    std::vector<std::size_t> deg(n_, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

std::size_t WeightedTree::max_degree() const {
    const auto deg = degrees();
    return *std::max_element(deg.begin(), deg.end());
}

WeightedTree random_weighted_tree(std::size_t n, std::size_t max_degree, std::uint64_t seed) {
    if (n < 2) throw Error("random_weighted_tree needs n >= 2");
    if (max_degree < 1 || (n >= 3 && max_degree < 2)) {
        throw Error("random_weighted_tree: no tree on " + std::to_string(n) + " nodes has max degree " +
                    std::to_string(max_degree));
    }
    CounterRng rng(seed);
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::uint32_t> open{0};  // nodes whose degree is below the cap
    std::vector<WeightedEdge> edges;
    edges.reserve(n - 1);
    for (std::uint32_t k = 1; k < n; ++k) {
        const auto slot = static_cast<std::size_t>(rng.below(open.size()));
        const std::uint32_t parent = open[slot];
        edges.push_back({parent, k, rng.uniform_open()});
        if (++degree[parent] == max_degree) {
            open[slot] = open.back();
            open.pop_back();
        }
        if (++degree[k] < max_degree) open.push_back(k);
    }
    return WeightedTree(n, std::move(edges));
}

DissimilarityMatrix tree_distance_matrix(const WeightedTree& tree) {
    const std::size_t n = tree.num_nodes();
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
    for (const auto& e : tree.edges()) {
        adj[e.u].emplace_back(e.v, e.weight);
        adj[e.v].emplace_back(e.u, e.weight);
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<std::uint32_t> stack;
    std::vector<std::uint32_t> from(n);
    for (std::uint32_t root = 0; root < n; ++root) {
        stack.assign(1, root);
        from[root] = root;
        while (!stack.empty()) {
            const std::uint32_t x = stack.back();
            stack.pop_back();
            for (const auto& [y, w] : adj[x]) {
                if (y == from[x]) continue;
                from[y] = x;
                d(root, y) = d(root, x) + w;
                stack.push_back(y);
            }
        }
    }
    // path sums are accumulated in different orders from the two ends
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < d.cols(); ++j) d(j, i) = d(i, j);
    }
    return DissimilarityMatrix(std::move(d));
}

DissimilarityMatrix add_noise_snr(const DissimilarityMatrix& d, double snr_db, std::uint64_t seed) {
    if (snr_db == kNoNoise) return d;
    if (!std::isfinite(snr_db)) throw Error("add_noise_snr: SNR must be finite (or the no-noise sentinel)");
    const auto& v = d.values();
    const Eigen::Index n = v.rows();
    double power = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) power += v(i, j) * v(i, j);
    }
    power /= static_cast<double>(choose2(n));
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    CounterRng rng(seed);
    Eigen::MatrixXd out = v;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double noisy = std::max(0.0, v(i, j) + sigma * rng.normal());
            out(i, j) = noisy;
            out(j, i) = noisy;
        }
    }
    return DissimilarityMatrix(std::move(out));
}

SortedIndexList permute_index_list(const SortedIndexList& list, double avg_displacement, std::uint64_t seed) {
    const std::size_t len = list.size();
    if (!(avg_displacement >= 0.0)) throw Error("permute_index_list: displacement must be >= 0");
    if (avg_displacement > static_cast<double>(len) / 2.0) {
        throw Error("permute_index_list: displacement exceeds half the list length");
    }
    if (avg_displacement == 0.0 || len < 2) return list;

    const auto width = static_cast<std::int64_t>(std::max(1.0, std::round(2.0 * avg_displacement)));
    const auto n = static_cast<std::int64_t>(len);
    std::vector<std::int64_t> origin(len);  // origin[pos] = original rank now at pos
    for (std::size_t r = 0; r < len; ++r) origin[r] = static_cast<std::int64_t>(r);

    CounterRng rng(seed);
    const double target_sum = avg_displacement * static_cast<double>(len);
    double sum = 0.0;
    const std::uint64_t cap = 1000ULL * len + 1000000ULL;
    std::uint64_t steps = 0;
    while (sum < target_sum) {
        if (++steps > cap) {
            throw Error("permute_index_list: target displacement not reached within the iteration cap");
        }
        const auto r = static_cast<std::int64_t>(rng.below(len));
        const auto s = r + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * width + 1))) - width;
        if (s < 0 || s >= n || s == r) continue;
        sum -= static_cast<double>(std::llabs(origin[r] - r) + std::llabs(origin[s] - s));
        std::swap(origin[r], origin[s]);
        sum += static_cast<double>(std::llabs(origin[r] - r) + std::llabs(origin[s] - s));
    }
    const double achieved = sum / static_cast<double>(len);
    if (std::abs(achieved - avg_displacement) > 0.1 * avg_displacement) {
        throw Error("permute_index_list: achieved displacement " + std::to_string(achieved) +
                    " is not within 10% of the target");
    }
    std::vector<IndexPair> pairs(len);
    for (std::size_t pos = 0; pos < len; ++pos) pairs[pos] = list[static_cast<std::size_t>(origin[pos])];
    return SortedIndexList(list.num_points(), std::move(pairs));
}

double mean_rank_displacement(const SortedIndexList& a, const SortedIndexList& b) {
    if (a.num_points() != b.num_points()) throw Error("mean_rank_displacement: lists differ in size");
    const std::size_t n = a.num_points();
    const auto key = [n](const IndexPair& p) {
        const std::size_t i = p.i, j = p.j;
        return i * (2 * n - i - 1) / 2 + (j - i - 1);
    };
    std::vector<std::int64_t> rank_a(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) rank_a[key(a[r])] = static_cast<std::int64_t>(r);
    double total = 0.0;
    for (std::size_t r = 0; r < b.size(); ++r) {
        total += static_cast<double>(std::llabs(rank_a[key(b[r])] - static_cast<std::int64_t>(r)));
    }
    return total / static_cast<double>(a.size());
}

std::vector<Point> circumscribe_project(std::span<const Point> points, const SpaceForm& form) {
    if (points.size() < 2) throw Error("circumscribe_project needs at least 2 points");
    if (form.curvature() == Curvature::spherical) {
        throw Error("circumscribe_project is defined for Euclidean and hyperbolic forms only");
    }
    const bool hyperbolic = form.curvature() == Curvature::hyperbolic;
    const Eigen::Index d = form.dim();
    const auto chart = [&](const Point& p) -> Eigen::VectorXd {
        if (p.size() != form.ambient_dim()) throw Error("circumscribe_project: point has wrong dimension");
        return hyperbolic ? Eigen::VectorXd(p.tail(d)) : Eigen::VectorXd(p);
    };

    const std::size_t last = points.size() - 1;
    std::vector<Eigen::VectorXd> coords(last);
    double radius = 0.0;
    for (std::size_t k = 0; k < last; ++k) {
        coords[k] = chart(points[k]);
        const double norm = coords[k].norm();
        if (!(norm > 0.0)) throw Error("circumscribe_project: a non-final point sits at the origin");
        radius = std::max(radius, norm);
    }
    std::vector<Point> out;
    out.reserve(points.size());
    for (auto& z : coords) {
        z *= radius / z.norm();
        out.push_back(hyperbolic ? lift_to_hyperboloid(z) : Point(z));
    }
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(d);
    out.push_back(hyperbolic ? lift_to_hyperboloid(origin) : Point(origin));
    return out;
}

double dense_hyperbolic_radius(std::size_t n) {
    if (n < 3) throw Error("dense_hyperbolic_set needs N >= 3");
    const double c = 1.0 - std::cos(2.0 * std::numbers::pi / static_cast<double>(n - 1));
    // c = 1/2 exactly for the hexagon; rounding must not turn r_min = 0 into a tiny radius
    const double slack = 1.0 - 2.0 * c;
    if (slack <= 1e-12) return 1.0;
    return 1.01 * std::sqrt(slack) / c;
}

std::vector<Point> dense_hyperbolic_set(std::size_t n, int dim) {
    if (dim < 2) throw Error("dense_hyperbolic_set needs d >= 2");
    const double r = dense_hyperbolic_radius(n);
    std::vector<Point> out;
    out.reserve(n);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1);
        y[0] = r * std::cos(angle);
        y[1] = r * std::sin(angle);
        out.push_back(lift_to_hyperboloid(y));
    }
    out.push_back(lift_to_hyperboloid(Eigen::VectorXd::Zero(dim)));
    return out;
}

std::vector<Point> regular_polygon_with_center(std::size_t n) {
    if (n < 4) throw Error("regular_polygon_with_center needs N >= 4");
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1);
        Point p(2);
        p << std::cos(angle), std::sin(angle);
        out.push_back(p);
    }
    out.push_back(Point::Zero(2));
    return out;
}

} // namespace ordforms
