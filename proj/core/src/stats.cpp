#include "ordforms/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "ordforms/error.hpp"
#include "ordforms/rng.hpp"
#include "ordforms/synth.hpp"

namespace ordforms {

Pmf::Pmf(std::vector<std::int64_t> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
    if (support_.size() != probs_.size()) throw Error("pmf support and probabilities differ in length");
    if (support_.empty()) throw Error("pmf must have a nonempty support");
    double total = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (!(probs_[i] >= 0.0)) throw Error("pmf probabilities must be nonnegative");
        if (i > 0 && support_[i] <= support_[i - 1]) throw Error("pmf support must be strictly increasing");
        total += probs_[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error("pmf probabilities must sum to 1");
}

Pmf Pmf::from_counts(const std::map<std::int64_t, std::int64_t>& counts) {
    std::int64_t total = 0;
    for (const auto& [v, c] : counts) {
        if (c < 0) throw Error("negative histogram count");
        total += c;
    }
    if (total == 0) throw Error("empty histogram");
    std::vector<std::int64_t> support;
    std::vector<double> probs;
    for (const auto& [v, c] : counts) {
        if (c == 0) continue;
        support.push_back(v);
        probs.push_back(static_cast<double>(c) / static_cast<double>(total));
    }
    return Pmf(std::move(support), std::move(probs));
}

double Pmf::prob(std::int64_t value) const {
    const auto it = std::lower_bound(support_.begin(), support_.end(), value);
    if (it == support_.end() || *it != value) return 0.0;
    return probs_[static_cast<std::size_t>(it - support_.begin())];
}

void SamplingPlan::validate() const {
    if (clique_size < 4) throw Error("clique size must be >= 4");
    if (num_samples < 1) throw Error("number of samples must be >= 1");
    if (const auto* ms = std::get_if<MatrixSource>(&source)) {
        if (!ms->matrix) throw Error("sampling plan has no matrix");
        if (clique_size > ms->matrix->size()) {
            throw Error("clique size " + std::to_string(clique_size) + " exceeds the " +
                        std::to_string(ms->matrix->size()) + " available points");
        }
    } else {
        const auto& gen = std::get<GeneratorSource>(source);
        gen.dist.validate_for(gen.form);
    }
}

namespace {

/// Produces the condensed dissimilarities of sample m.
class SampleDrawer {
public:
    SampleDrawer(const SamplingPlan& plan, std::size_t n, Projection projection)
        : plan_(plan), n_(n), projection_(projection), condensed_(static_cast<std::size_t>(choose2(
                                                               static_cast<std::int64_t>(n)))) {
        if (const auto* ms = std::get_if<MatrixSource>(&plan.source)) {
            matrix_ = ms->matrix.get();
            marks_.assign(matrix_->size(), 0);
        } else {
            points_.resize(n);
        }
    }

    std::span<const double> draw(std::uint64_t m) {
        CounterRng rng(plan_.seed, m);
        if (matrix_ != nullptr) {
            choose_subset(rng);
            const auto& v = matrix_->values();
            std::size_t e = 0;
            for (std::size_t a = 0; a < n_; ++a) {
                for (std::size_t b = a + 1; b < n_; ++b) {
                    condensed_[e++] = v(static_cast<Eigen::Index>(subset_[a]), static_cast<Eigen::Index>(subset_[b]));
                }
            }
        } else {
            const auto& gen = std::get<GeneratorSource>(plan_.source);
            sample_points_into(gen.form, gen.dist, rng, points_);
            if (projection_ == Projection::circumscribed) points_ = circumscribe_project(points_, gen.form);
            const Curvature c = gen.form.curvature();
            std::size_t e = 0;
            for (std::size_t a = 0; a < n_; ++a) {
                for (std::size_t b = a + 1; b < n_; ++b) condensed_[e++] = distance_unchecked(c, points_[a], points_[b]);
            }
        }
        return condensed_;
    }

private:
    // Floyd's algorithm: n distinct indices in O(n) draws.
    void choose_subset(CounterRng& rng) {
        const std::size_t total = matrix_->size();
        subset_.clear();
        for (std::size_t j = total - n_; j < total; ++j) {
            const auto t = static_cast<std::size_t>(rng.below(j + 1));
            const std::size_t pick = marks_[t] ? j : t;
            marks_[pick] = 1;
            subset_.push_back(pick);
        }
        for (std::size_t idx : subset_) marks_[idx] = 0;
        std::sort(subset_.begin(), subset_.end());
    }

    const SamplingPlan& plan_;
    std::size_t n_;
    Projection projection_;
    const DissimilarityMatrix* matrix_ = nullptr;
    std::vector<char> marks_;
    std::vector<std::size_t> subset_;
    std::vector<Point> points_;
    std::vector<double> condensed_;
};

struct HistogramAcc {
    std::size_t n;
    std::vector<std::vector<std::int64_t>> counts;  // counts[k][alpha]

    explicit HistogramAcc(std::size_t n)
        : n(n), counts(n + 1, std::vector<std::int64_t>(static_cast<std::size_t>(choose2(
                                                             static_cast<std::int64_t>(n) - 1)) + 2, 0)) {}

    void add(const std::vector<std::int64_t>& alphas) {
        for (std::size_t k = 3; k <= n; ++k) ++counts[k][static_cast<std::size_t>(alphas[k - 1])];
    }
    void merge(const HistogramAcc& other) {
        for (std::size_t k = 0; k < counts.size(); ++k) {
            for (std::size_t a = 0; a < counts[k].size(); ++a) counts[k][a] += other.counts[k][a];
        }
    }
};

struct MaxAcc {
    std::int64_t best = 0;
    void add(const std::vector<std::int64_t>& alphas) { best = std::max(best, alphas.back()); }
    void merge(const MaxAcc& other) { best = std::max(best, other.best); }
};

/// Runs samples 0..M-1 in contiguous blocks, one accumulator per worker; the merge
/// is a sum/max, so the result does not depend on the worker count.
template <class Acc>
Acc run_samples(const SamplingPlan& plan, std::size_t n, Projection projection, const Acc& prototype) {
    const std::size_t m = plan.num_samples;
    const std::size_t workers = std::clamp<std::size_t>(plan.threads, 1, m);
    std::vector<Acc> accs(workers, prototype);
    const auto work = [&](std::size_t w) {
        SampleDrawer drawer(plan, n, projection);
        SpreadCalculator calc;
        const std::size_t begin = m * w / workers;
        const std::size_t end = m * (w + 1) / workers;
        for (std::size_t s = begin; s < end; ++s) accs[w].add(calc.compute(n, drawer.draw(s)));
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    Acc total = prototype;
    for (const auto& acc : accs) total.merge(acc);
    return total;
}

} // namespace

PmfFamily empirical_alpha_pmfs(const SamplingPlan& plan) {
    plan.validate();
    const std::size_t n = plan.clique_size;
    const HistogramAcc acc = run_samples(plan, n, Projection::none, HistogramAcc(n));
    PmfFamily out;
    const auto total = static_cast<double>(plan.num_samples);
    for (std::size_t k = 3; k <= n; ++k) {
        std::vector<std::int64_t> support;
        std::vector<double> probs;
        for (std::size_t a = 0; a < acc.counts[k].size(); ++a) {
            if (acc.counts[k][a] == 0) continue;
            support.push_back(static_cast<std::int64_t>(a));
            probs.push_back(static_cast<double>(acc.counts[k][a]) / total);
        }
        out.emplace(static_cast<int>(k), Pmf(std::move(support), std::move(probs)));
    }
    return out;
}

PmfFamily reference_pmf(const SpaceForm& form, const DistributionSpec& spec, std::size_t n, std::size_t m,
                        std::uint64_t seed, unsigned threads) {
    SamplingPlan plan{GeneratorSource{form, spec}, n, m, seed, threads};
    return empirical_alpha_pmfs(plan);
}

double tv_distance(const Pmf& p, const Pmf& q) {
    const auto& sp = p.support();
    const auto& sq = q.support();
    std::size_t i = 0, j = 0;
    double total = 0.0;
    while (i < sp.size() || j < sq.size()) {
        if (j == sq.size() || (i < sp.size() && sp[i] < sq[j])) {
            total += p.probs()[i++];
        } else if (i == sp.size() || sq[j] < sp[i]) {
            total += q.probs()[j++];
        } else {
            total += std::abs(p.probs()[i++] - q.probs()[j++]);
        }
    }
    return total;
}

std::optional<std::string> DetectionReport::winner() const {
    if (winners.size() != 1) return std::nullopt;
    return winners.front();
}

DetectionReport detect_space_form(const PmfFamily& target, const std::vector<Hypothesis>& hypotheses,
                                  const DetectMode& mode) {
    if (hypotheses.size() < 2) throw Error("detect_space_form needs at least two hypotheses");
    if (target.empty()) throw Error("detect_space_form: empty target");
    DetectionReport report;
    if (const auto* single = std::get_if<SingleMode>(&mode)) {
        report.mode = "single";
        report.k_min = report.k_max = single->k;
    } else {
        const auto& agg = std::get<AggregateMode>(mode);
        report.mode = "aggregate";
        report.k_min = agg.k_min.value_or(3);
        report.k_max = agg.k_max.value_or(target.rbegin()->first);
        if (report.k_min > report.k_max) throw Error("aggregate mode: empty k range");
    }
    const auto lookup = [](const PmfFamily& fam, int k, const std::string& who) -> const Pmf& {
        const auto it = fam.find(k);
        if (it == fam.end()) throw Error("alpha_" + std::to_string(k) + " PMF missing from " + who);
        return it->second;
    };
    for (const auto& h : hypotheses) {
        double delta = 0.0;
        for (int k = report.k_min; k <= report.k_max; ++k) {
            delta += tv_distance(lookup(target, k, "target"), lookup(h.pmfs, k, "hypothesis " + h.label));
        }
        report.distances.emplace_back(h.label, delta);
    }
    double best = report.distances.front().second;
    for (const auto& [label, d] : report.distances) best = std::min(best, d);
    const double slack = 1e-12 * std::max(1.0, best);
    double runner_up = std::numeric_limits<double>::infinity();
    for (const auto& [label, d] : report.distances) {
        if (d - best <= slack) {
            report.winners.push_back(label);
        } else {
            runner_up = std::min(runner_up, d);
        }
    }
    report.margin = report.tied() || !std::isfinite(runner_up) ? 0.0 : runner_up - best;
    return report;
}

std::map<std::size_t, std::int64_t> max_observed_spread(const SamplingPlan& plan,
                                                        std::span<const std::size_t> clique_sizes,
                                                        Projection projection) {
    if (projection == Projection::circumscribed) {
        const auto* gen = std::get_if<GeneratorSource>(&plan.source);
        if (gen == nullptr) throw Error("circumscribed projection needs a generator source");
        if (gen->form.curvature() == Curvature::spherical) {
            throw Error("circumscribed projection is defined for Euclidean and hyperbolic forms");
        }
    }
    std::vector<std::size_t> sizes(clique_sizes.begin(), clique_sizes.end());
    if (sizes.empty()) sizes.push_back(plan.clique_size);
    std::map<std::size_t, std::int64_t> out;
    for (std::size_t n : sizes) {
        SamplingPlan sized = plan;
        sized.clique_size = n;
        sized.validate();
        out[n] = run_samples(sized, n, projection, MaxAcc{}).best;
    }
    return out;
}

} // namespace ordforms
