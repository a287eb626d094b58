#include "ordforms/embed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <span>
#include <unordered_set>

#include "ordforms/error.hpp"
#include "ordforms/rng.hpp"

namespace ordforms {

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::converged: return "converged";
        case StopReason::max_iterations: return "max_iterations";
        case StopReason::cycle: return "cycle";
        case StopReason::stalled: return "stalled";
    }
    return "unknown";
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw Error("symmetric_eigen: matrix must be square");
    if (!a.allFinite()) throw Error("symmetric_eigen: matrix has non-finite entries");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw Error("symmetric_eigen: decomposition failed");
    const Eigen::Index n = a.rows();
    SymmetricEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = solver.eigenvalues()[n - 1 - k];
        Eigen::VectorXd v = solver.eigenvectors().col(n - 1 - k);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v[arg] < 0.0) v = -v;
        out.vectors.col(k) = v;
    }
    return out;
}

namespace {

std::size_t pair_key(std::size_t n, const IndexPair& p) {
    const std::size_t i = p.i, j = p.j;
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

void check_sizes(const DissimilarityMatrix& d, const SortedIndexList& target) {
    if (d.size() != target.num_points()) {
        throw Error("matrix has " + std::to_string(d.size()) + " points but the target list has " +
                    std::to_string(target.num_points()));
    }
}

// condensed values in place: the r-th largest moves to target[r]
void sort_condensed(std::vector<double>& cond, std::vector<double>& scratch, const SortedIndexList& target) {
    const std::size_t n = target.num_points();
    scratch = cond;
    std::sort(scratch.begin(), scratch.end(), std::greater<>());
    for (std::size_t r = 0; r < scratch.size(); ++r) cond[pair_key(n, target[r])] = scratch[r];
}

// pairs r < s with v[r] <= v[s]; sorts v descending as a side effect
std::int64_t count_non_descents(std::vector<double>& v, std::vector<double>& buf) {
    buf.resize(v.size());
    std::int64_t total = 0;
    for (std::size_t width = 1; width < v.size(); width *= 2) {
        for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, v.size());
            const std::size_t hi = std::min(lo + 2 * width, v.size());
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (v[i] > v[j]) {
                    buf[k++] = v[i++];
                } else {
                    total += static_cast<std::int64_t>(mid - i);
                    buf[k++] = v[j++];
                }
            }
            while (i < mid) buf[k++] = v[i++];
            while (j < hi) buf[k++] = v[j++];
        }
        std::swap(v, buf);
    }
    return total;
}

std::int64_t count_violations(std::span<const double> cond, const SortedIndexList& target, std::vector<double>& v,
                              std::vector<double>& buf) {
    const std::size_t n = target.num_points();
    v.resize(target.size());
    for (std::size_t r = 0; r < target.size(); ++r) v[r] = cond[pair_key(n, target[r])];
    return count_non_descents(v, buf);
}

Eigen::MatrixXd square_of(std::span<const double> cond, std::size_t n, double diag) {
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m(nn, nn);
    std::size_t e = 0;
    for (Eigen::Index i = 0; i < nn; ++i) {
        m(i, i) = diag;
        for (Eigen::Index j = i + 1; j < nn; ++j) m(i, j) = m(j, i) = cond[e++];
    }
    return m;
}

std::uint64_t hash_state(std::span<const double> cond) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (double x : cond) h = hash_combine(h, std::bit_cast<std::uint64_t>(x));
    return h;
}

/// One spectral projection plus per-form point projection. `cond` holds the
/// current dissimilarities (squared for Euclidean) and is overwritten with the
/// dissimilarities of the returned points.
std::vector<Point> project_step(Curvature curvature, int d, std::size_t n, std::vector<double>& cond) {
    const auto nn = static_cast<Eigen::Index>(n);
    std::vector<Point> pts(n);
    if (curvature == Curvature::euclidean) {
        const Eigen::MatrixXd dsq = square_of(cond, n, 0.0);
        const Eigen::MatrixXd centred = dsq.rowwise() - dsq.colwise().mean();
        Eigen::MatrixXd jdj = centred.colwise() - centred.rowwise().mean();
        jdj = 0.5 * (jdj + jdj.transpose());
        const Eigen::MatrixXd g = -0.5 * jdj;
        const auto eig = symmetric_eigen(g);
        Eigen::MatrixXd x(d, nn);
        for (int k = 0; k < d; ++k) x.row(k) = std::sqrt(std::max(eig.values[k], 0.0)) * eig.vectors.col(k).transpose();
        const Eigen::MatrixXd gram = x.transpose() * x;
        std::size_t e = 0;
        for (Eigen::Index i = 0; i < nn; ++i) {
            pts[static_cast<std::size_t>(i)] = x.col(i);
            for (Eigen::Index j = i + 1; j < nn; ++j) {
                cond[e++] = std::max(0.0, gram(i, i) + gram(j, j) - 2.0 * gram(i, j));
            }
        }
        return pts;
    }
    if (curvature == Curvature::hyperbolic) {
        Eigen::MatrixXd g = square_of(cond, n, 0.0);
        g = -g.array().cosh();
        const auto eig = symmetric_eigen(g);
        // rows 1..d spatial from the top eigenpairs; the time-like row is recomputed by the lift
        Eigen::MatrixXd y(d, nn);
        for (int k = 0; k < d; ++k) y.row(k) = std::sqrt(std::max(eig.values[k], 0.0)) * eig.vectors.col(k).transpose();
        for (Eigen::Index i = 0; i < nn; ++i) pts[static_cast<std::size_t>(i)] = lift_to_hyperboloid(y.col(i));
    } else {
        Eigen::MatrixXd g = square_of(cond, n, 0.0);
        g = g.array().cos();
        const auto eig = symmetric_eigen(g);
        Eigen::MatrixXd x(d + 1, nn);
        for (int k = 0; k <= d; ++k) x.row(k) = std::sqrt(std::max(eig.values[k], 0.0)) * eig.vectors.col(k).transpose();
        for (Eigen::Index i = 0; i < nn; ++i) {
            Eigen::VectorXd p = x.col(i);
            const double norm = p.norm();
            if (norm > 0.0) {
                p /= norm;
            } else {
                p.setZero();
                p[0] = 1.0;
            }
            pts[static_cast<std::size_t>(i)] = p;
        }
    }
    std::size_t e = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) cond[e++] = distance_unchecked(curvature, pts[i], pts[j]);
    }
    return pts;
}

} // namespace

DissimilarityMatrix sort_to_target(const DissimilarityMatrix& d, const SortedIndexList& target) {
    check_sizes(d, target);
    std::vector<double> cond = d.condensed();
    std::vector<double> scratch;
    sort_condensed(cond, scratch, target);
    return DissimilarityMatrix(square_of(cond, d.size(), 0.0));
}

std::int64_t count_violated_constraints(const DissimilarityMatrix& d, const SortedIndexList& target) {
    check_sizes(d, target);
    const std::vector<double> cond = d.condensed();
    std::vector<double> v, buf;
    return count_violations(cond, target, v, buf);
}

double comparison_error_rate(const DissimilarityMatrix& d, const SortedIndexList& target, const ErrorMode& mode) {
    check_sizes(d, target);
    const std::size_t m = target.size();
    if (m < 2) return 0.0;
    if (std::holds_alternative<ExactErrorMode>(mode)) {
        return static_cast<double>(count_violated_constraints(d, target)) /
               static_cast<double>(choose2(static_cast<std::int64_t>(m)));
    }
    const auto& sampled = std::get<SampledErrorMode>(mode);
    if (sampled.num_constraints == 0) throw Error("sampled error rate needs at least one constraint");
    CounterRng rng(sampled.seed);
    std::size_t violated = 0;
    for (std::size_t t = 0; t < sampled.num_constraints; ++t) {
        auto r = static_cast<std::size_t>(rng.below(m));
        auto s = static_cast<std::size_t>(rng.below(m - 1));
        if (s >= r) ++s;
        if (s < r) std::swap(r, s);
        const auto& a = target[r];
        const auto& b = target[s];
        if (d(a.i, a.j) <= d(b.i, b.j)) ++violated;
    }
    return static_cast<double>(violated) / static_cast<double>(sampled.num_constraints);
}

EmbeddingResult embed_nonmetric(const SpaceForm& form, const SortedIndexList& target, const EmbedOptions& opts,
                                std::uint64_t seed) {
    const Curvature curvature = form.curvature();
    const int d = opts.dim;
    const std::size_t n = target.num_points();
    if (d < 1) throw Error("embedding dimension must be >= 1");
    if (curvature != Curvature::euclidean && d < 2) {
        throw Error("hyperbolic and spherical embeddings need dimension >= 2");
    }
    if (static_cast<std::size_t>(d) + 1 > n) {
        throw Error("embedding dimension " + std::to_string(d) + " is too large for " + std::to_string(n) + " points");
    }
    if (opts.max_iterations == 0) throw Error("max_iterations must be >= 1");
    const SpaceForm out_form(curvature, d);

    EmbeddingResult result;
    result.form = out_form;

    std::vector<double> cond;
    if (opts.initial) {
        if (opts.initial->size() != n) throw Error("initial matrix size does not match the target list");
        cond = opts.initial->condensed();
        result.points.clear();
    } else {
        const DistributionSpec spec = opts.init_dist.value_or(DistributionSpec::default_for(out_form));
        result.points = sample_points(out_form, spec, n, seed);
        cond = DissimilarityMatrix::from_points(out_form, result.points).condensed();
    }
    if (std::all_of(cond.begin(), cond.end(), [&](double x) { return x == cond.front(); })) {
        throw Error("degenerate initialization: all initial dissimilarities are equal");
    }
    if (curvature == Curvature::euclidean) {
        for (double& x : cond) x *= x;
    }

    std::vector<double> scratch, v, buf;
    const std::int64_t total = choose2(static_cast<std::int64_t>(target.size()));
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    if (!result.points.empty()) best = count_violations(cond, target, v, buf);
    result.disagreements = best;

    std::unordered_set<std::uint64_t> seen;
    std::size_t since_improvement = 0;
    result.stop = StopReason::max_iterations;
    if (best == 0) {
        result.stop = StopReason::converged;
    } else {
        for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
            result.iterations = it;
            sort_condensed(cond, scratch, target);
            auto pts = project_step(curvature, d, n, cond);
            const std::int64_t count = count_violations(cond, target, v, buf);
            if (count < best) {
                best = count;
                result.points = std::move(pts);
                result.disagreements = count;
                since_improvement = 0;
            } else {
                ++since_improvement;
            }
            if (best == 0) {
                result.stop = StopReason::converged;
                break;
            }
            if (!seen.insert(hash_state(cond)).second) {
                result.stop = StopReason::cycle;
                break;
            }
            if (opts.stall_window > 0 && since_improvement >= opts.stall_window) {
                result.stop = StopReason::stalled;
                break;
            }
        }
    }
    result.converged = result.disagreements == 0;
    result.p_e = total > 0 ? static_cast<double>(result.disagreements) / static_cast<double>(total) : 0.0;
    return result;
}

} // namespace ordforms
