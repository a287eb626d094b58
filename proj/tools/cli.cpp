#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ordforms/capacity.hpp"
#include "ordforms/embed.hpp"
#include "ordforms/error.hpp"
#include "ordforms/ingest.hpp"
#include "ordforms/io.hpp"
#include "ordforms/rng.hpp"
#include "ordforms/stats.hpp"
#include "ordforms/synth.hpp"

#ifndef ORDFORMS_VERSION
#define ORDFORMS_VERSION "0.0.0"
#endif

namespace ordforms::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string input;
    std::string kind = "dissimilarity";
    std::string metric = "l2";
    std::size_t clique = 20;
    std::size_t samples = 10000;
    std::optional<std::size_t> ref_samples;
    std::uint64_t seed = 0;
    std::string forms = "H2,E2,S2";
    std::string dims;
    std::string dist;
    std::string mode = "aggregate";
    std::optional<int> k;
    std::string out;
    std::string format = "json";
    unsigned threads = 1;
    bool no_timestamp = false;

    // ingest
    double radius = 1.0;
    std::optional<double> sigma;
    std::optional<std::size_t> knn;

    // capacity / lowerbound
    std::string n_range = "4..20";
    std::string cliques;
    std::optional<std::int64_t> tree_degree;

    // synth-tree
    std::size_t nodes = 1000;
    std::size_t max_degree = 3;
    std::optional<double> snr;
    std::optional<double> displacement;
    bool write_matrix = false;

    // embed
    std::size_t max_iterations = 300;
    std::size_t stall_window = 50;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::int64_t parse_int(const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("expected an integer, got '" + s + "'");
    return v;
}

/// "6..20,100" -> {6, ..., 20, 100}.
std::vector<std::int64_t> parse_ranges(const std::string& s) {
    std::vector<std::int64_t> out;
    for (const auto& part : split_list(s)) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(part));
            continue;
        }
        const auto lo = parse_int(part.substr(0, dots));
        const auto hi = parse_int(part.substr(dots + 2));
        if (lo > hi) throw UsageError("empty range '" + part + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty size list");
    return out;
}

std::vector<SpaceForm> parse_forms(const Options& o) {
    std::vector<SpaceForm> out;
    try {
        if (o.dims.empty()) {
            for (const auto& f : split_list(o.forms)) out.push_back(SpaceForm::parse(f));
        } else {
            const auto dims = parse_ranges(o.dims);
            for (const auto& f : split_list(o.forms)) {
                for (auto d : dims) out.push_back(SpaceForm::parse(f.substr(0, 1) + std::to_string(d)));
            }
        }
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (out.empty()) throw UsageError("no space forms given");
    return out;
}

/// The first --dist entry defined on `form`, else the form's default.
DistributionSpec dist_for(const Options& o, const SpaceForm& form) {
    for (const auto& d : split_list(o.dist)) {
        DistributionSpec spec;
        try {
            spec = DistributionSpec::parse(d);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        if (spec.compatible_with(form)) return spec;
    }
    return DistributionSpec::default_for(form);
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json base_report(const std::string& command, const Options& o, json config) {
    json r;
    r["tool"] = "ordinal-forms";
    r["version"] = ORDFORMS_VERSION;
    r["command"] = command;
    r["seed"] = o.seed;
    r["config"] = std::move(config);
    if (!o.no_timestamp) r["timestamp"] = timestamp();
    return r;
}

class Emitter {
public:
    Emitter(const Options& o, std::ostream& out) : o_(o), out_(out) {
        if (!o_.out.empty()) std::filesystem::create_directories(o_.out);
    }

    /// Writes to --out/<name> when set, else to stdout.
    void write(const std::string& name, const std::string& content) {
        if (o_.out.empty()) {
            out_ << content;
        } else {
            atomic_write(std::filesystem::path(o_.out) / name, content);
        }
    }
    /// Only written when --out is set.
    void side_file(const std::string& name, const std::string& content) {
        if (!o_.out.empty()) atomic_write(std::filesystem::path(o_.out) / name, content);
    }
    void report(const std::string& stem, const json& j, const std::optional<std::string>& csv = std::nullopt) {
        if (o_.format == "csv" && csv) {
            write(stem + ".csv", *csv);
        } else {
            write(stem + ".json", j.dump(2) + "\n");
        }
    }

private:
    const Options& o_;
    std::ostream& out_;
};

struct LoadedInput {
    std::shared_ptr<const DissimilarityMatrix> matrix;
    std::vector<std::string> labels;
    std::optional<SortedIndexList> index_list;
    std::string source;  ///< matrix | tree | index-list | latlong | features
};

std::string first_line(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    return line;
}

void require_input(const Options& o) {
    if (o.input.empty()) throw UsageError("--input is required");
}

LoadedInput load_input(const Options& o, std::ostream& err) {
    require_input(o);
    LoadedInput li;
    if (o.kind == "dissimilarity" || o.kind == "similarity") {
        const auto head = first_line(o.input);
        std::ifstream in(o.input);
        if (head.rfind("u,v,weight", 0) == 0) {
            li.source = "tree";
            li.matrix = std::make_shared<DissimilarityMatrix>(tree_distance_matrix(read_tree_csv(in)));
        } else if (head.rfind("rank,i,j", 0) == 0) {
            li.source = "index-list";
            li.index_list = read_index_list_csv(in);
            li.matrix = std::make_shared<DissimilarityMatrix>(rank_matrix(*li.index_list));
        } else {
            li.source = "matrix";
            auto csv = parse_dissimilarity_csv(
                in, o.kind == "similarity" ? SimilarityKind::similarity : SimilarityKind::dissimilarity);
            for (const auto& w : csv.warnings) err << "warning: " << w << "\n";
            li.labels = std::move(csv.labels);
            li.matrix = std::make_shared<DissimilarityMatrix>(std::move(csv.matrix));
        }
    } else if (o.kind == "latlong") {
        li.source = "latlong";
        const auto records = read_latlong_csv(o.input);
        for (const auto& r : records) li.labels.push_back(r.id);
        li.matrix = std::make_shared<DissimilarityMatrix>(haversine_matrix(records, o.radius));
    } else if (o.kind == "features") {
        li.source = "features";
        const auto table = read_features_csv(o.input);
        li.labels = table.ids;
        if (o.metric == "l2") {
            li.matrix = std::make_shared<DissimilarityMatrix>(l2_dissimilarity(table.values));
        } else if (o.metric == "angular") {
            li.matrix = std::make_shared<DissimilarityMatrix>(angular_dissimilarity(table.values));
        } else if (o.metric == "rfa") {
            const auto p = rfa_similarity(table.values, RfaConfig{o.sigma, o.knn});
            li.matrix = std::make_shared<DissimilarityMatrix>(similarity_to_dissimilarity(p));
        } else {
            throw UsageError("unknown --metric '" + o.metric + "'");
        }
    } else {
        throw UsageError("unknown --kind '" + o.kind + "'");
    }
    if (li.labels.empty()) {
        for (std::size_t i = 0; i < li.matrix->size(); ++i) li.labels.push_back(std::to_string(i + 1));
    }
    return li;
}

json input_config(const Options& o) {
    json c{{"input", o.input}, {"kind", o.kind}};
    if (o.kind == "features") c["metric"] = o.metric;
    if (o.kind == "latlong") c["radius"] = o.radius;
    if (o.kind == "features" && o.metric == "rfa") {
        c["sigma"] = o.sigma ? json(*o.sigma) : json("auto");
        c["knn"] = o.knn ? json(*o.knn) : json(nullptr);
    }
    return c;
}

unsigned thread_count(const Options& o) {
    if (o.threads > 0) return o.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string pmf_family_csv(const PmfFamily& fam) {
    std::ostringstream s;
    write_pmf_family_csv(s, fam);
    return s.str();
}

// -- subcommands --------------------------------------------------------------

int cmd_capacity(const Options& o, std::ostream& out) {
    const auto forms = parse_forms(o);
    const auto ns = parse_ranges(o.n_range);
    const auto table = CapPackingTable::from_environment();
    json config{{"forms", o.forms}, {"dims", o.dims}, {"n", o.n_range}};
    auto report = base_report("capacity", o, config);
    std::ostringstream csv;
    csv << "N";
    for (const auto& f : forms) csv << ',' << f.label();
    csv << "\nK";
    for (const auto& f : forms) {
        const auto k = ordinal_capacity(f, table);
        csv << ',' << k.to_string();
        report["capacity"][f.label()] = k.is_infinite() ? json("inf") : json(k.value());
    }
    csv << '\n';
    for (auto n : ns) {
        if (n < 2) throw UsageError("--n values must be >= 2");
        csv << n;
        for (const auto& f : forms) {
            const auto a = n_point_ordinal_spread(f, n, table);
            csv << ',' << a;
            report["spread"][f.label()][std::to_string(n)] = a;
        }
        csv << '\n';
    }
    Emitter(o, out).report("capacity", report, csv.str());
    return 0;
}

int cmd_pmf(const Options& o, std::ostream& out, std::ostream& err) {
    const auto li = load_input(o, err);
    SamplingPlan plan{MatrixSource{li.matrix}, o.clique, o.samples, o.seed, thread_count(o)};
    const auto pmfs = empirical_alpha_pmfs(plan);
    json config = input_config(o);
    config.update({{"clique", o.clique}, {"samples", o.samples}});
    auto report = base_report("pmf", o, config);
    report["source"] = li.source;
    report["n_points"] = li.matrix->size();
    report["pmfs"] = pmf_family_to_json(pmfs, o.samples, o.seed);
    Emitter(o, out).report("pmf", report, pmf_family_csv(pmfs));
    return 0;
}

std::uint64_t reference_seed(std::uint64_t seed, std::size_t index) {
    return hash_combine(seed, 0x7265660000000000ULL + index);
}

std::vector<Hypothesis> build_references(const Options& o, const std::vector<SpaceForm>& forms, json& meta) {
    std::vector<Hypothesis> hyps;
    const std::size_t m = o.ref_samples.value_or(o.samples);
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const auto spec = dist_for(o, forms[i]);
        const auto s = reference_seed(o.seed, i);
        hyps.push_back({forms[i].label(), reference_pmf(forms[i], spec, o.clique, m, s, thread_count(o))});
        meta.push_back({{"form", forms[i].label()}, {"dist", spec.label()}, {"samples", m}, {"seed", s}});
    }
    return hyps;
}

int cmd_reference(const Options& o, std::ostream& out) {
    const auto forms = parse_forms(o);
    json config{{"forms", o.forms}, {"dims", o.dims}, {"dist", o.dist}, {"clique", o.clique},
                {"samples", o.ref_samples.value_or(o.samples)}};
    auto report = base_report("reference", o, config);
    json meta = json::array();
    const auto hyps = build_references(o, forms, meta);
    std::ostringstream csv;
    csv << "form,k,value,prob\n";
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        meta[i]["pmfs"] = pmf_family_to_json(hyps[i].pmfs, meta[i]["samples"].get<std::size_t>(),
                                             meta[i]["seed"].get<std::uint64_t>());
        for (const auto& [k, pmf] : hyps[i].pmfs) {
            for (std::size_t t = 0; t < pmf.support().size(); ++t) {
                csv << hyps[i].label << ',' << k << ',' << pmf.support()[t] << ',' << std::setprecision(17)
                    << pmf.probs()[t] << '\n';
            }
        }
    }
    report["references"] = meta;
    Emitter(o, out).report("reference", report, csv.str());
    return 0;
}

int cmd_detect(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.mode != "single" && o.mode != "aggregate") throw UsageError("--mode must be single or aggregate");
    const auto forms = parse_forms(o);
    if (forms.size() < 2) throw UsageError("detect needs at least two --forms");
    const auto li = load_input(o, err);
    SamplingPlan plan{MatrixSource{li.matrix}, o.clique, o.samples, o.seed, thread_count(o)};
    const auto target = empirical_alpha_pmfs(plan);

    json config = input_config(o);
    config.update({{"clique", o.clique},
                   {"samples", o.samples},
                   {"ref_samples", o.ref_samples.value_or(o.samples)},
                   {"forms", o.forms},
                   {"dims", o.dims},
                   {"dist", o.dist},
                   {"mode", o.mode}});
    if (o.k) config["k"] = *o.k;
    auto report = base_report("detect", o, config);
    json meta = json::array();
    const auto hyps = build_references(o, forms, meta);
    DetectMode mode = AggregateMode{};
    if (o.mode == "single") mode = SingleMode{o.k.value_or(static_cast<int>(o.clique))};
    const auto det = detect_space_form(target, hyps, mode);

    report["source"] = li.source;
    report["n_points"] = li.matrix->size();
    report["references"] = meta;
    report["mode"] = det.mode;
    report["k_min"] = det.k_min;
    report["k_max"] = det.k_max;
    json dist = json::object();
    for (const auto& [label, d] : det.distances) dist[label] = d;
    report["distances"] = dist;
    report["winners"] = det.winners;
    report["winner"] = det.winner() ? json(*det.winner()) : json(nullptr);
    report["tied"] = det.tied();
    report["margin"] = det.margin;
    report["target_pmfs"] = pmf_family_to_json(target, o.samples, o.seed);

    std::ostringstream csv;
    csv << "form,tv\n";
    for (const auto& [label, d] : det.distances) csv << label << ',' << std::setprecision(17) << d << '\n';
    Emitter(o, out).report("detect", report, csv.str());
    return 0;
}

int cmd_lowerbound(const Options& o, std::ostream& out, std::ostream& err) {
    const auto table = CapPackingTable::from_environment();
    json config{{"input", o.input}, {"kind", o.kind}, {"cliques", o.cliques}, {"samples", o.samples}};
    if (o.tree_degree) config["tree_degree"] = *o.tree_degree;
    auto report = base_report("lowerbound", o, config);
    if (o.input.empty() && !o.tree_degree) throw UsageError("lowerbound needs --input or --tree-degree");

    if (!o.input.empty()) {
        std::map<std::int64_t, std::int64_t> observed;
        if (first_line(o.input).rfind("N,", 0) == 0) {
            std::ifstream in(o.input);
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line)) {
                const auto cells = split_list(line);
                if (cells.empty()) continue;
                if (cells.size() != 2) throw Error("spread table rows need N,A");
                observed[std::stoll(cells[0])] = std::stoll(cells[1]);
            }
            report["source"] = "spread-table";
        } else {
            if (o.cliques.empty()) throw UsageError("--cliques is required when --input holds data");
            const auto li = load_input(o, err);
            SamplingPlan plan{MatrixSource{li.matrix}, o.clique, o.samples, o.seed, thread_count(o)};
            std::vector<std::size_t> sizes;
            for (auto n : parse_ranges(o.cliques)) sizes.push_back(static_cast<std::size_t>(n));
            for (const auto& [n, a] : max_observed_spread(plan, sizes)) observed[static_cast<std::int64_t>(n)] = a;
            report["source"] = li.source;
        }
        json obs = json::object();
        for (const auto& [n, a] : observed) obs[std::to_string(n)] = a;
        report["observed"] = obs;
        report["dimension_lower_bound"] = dimension_lower_bound(observed, table);
    }
    if (o.tree_degree) report["tree_degree_lower_bound"] = tree_degree_lower_bound(*o.tree_degree, table);
    Emitter(o, out).report("lowerbound", report);
    return 0;
}

int cmd_synth_tree(const Options& o, std::ostream& out) {
    const auto tree = random_weighted_tree(o.nodes, o.max_degree, o.seed);
    json config{{"nodes", o.nodes}, {"max_degree", o.max_degree}};
    if (o.snr) config["snr_db"] = *o.snr;
    if (o.displacement) config["displacement"] = *o.displacement;
    auto report = base_report("synth-tree", o, config);
    report["observed_max_degree"] = tree.max_degree();
    Emitter em(o, out);
    std::ostringstream edges;
    write_tree_csv(edges, tree);
    if (o.out.empty()) {
        out << edges.str();
        return 0;
    }
    em.side_file("tree.csv", edges.str());
    if (o.write_matrix || o.snr || o.displacement) {
        DissimilarityMatrix d = tree_distance_matrix(tree);
        if (o.snr) d = add_noise_snr(d, *o.snr, hash_combine(o.seed, 1));
        std::ostringstream m;
        write_matrix_csv(m, d.values());
        em.side_file("distances.csv", m.str());
        if (o.displacement) {
            const auto list = permute_index_list(sorted_index_list(d), *o.displacement, hash_combine(o.seed, 2));
            std::ostringstream l;
            write_index_list_csv(l, list);
            em.side_file("index_list.csv", l.str());
        }
    }
    em.report("synth-tree", report);
    return 0;
}

int cmd_embed(const Options& o, std::ostream& out, std::ostream& err) {
    const auto forms = parse_forms(o);
    const auto li = load_input(o, err);
    const SortedIndexList target = li.index_list ? *li.index_list : sorted_index_list(*li.matrix);
    json config = input_config(o);
    config.update({{"forms", o.forms},
                   {"dims", o.dims},
                   {"dist", o.dist},
                   {"max_iterations", o.max_iterations},
                   {"stall_window", o.stall_window}});
    auto report = base_report("embed", o, config);
    Emitter em(o, out);
    json runs = json::array();
    for (const auto& f : forms) {
        EmbedOptions eo;
        eo.dim = f.dim();
        eo.max_iterations = o.max_iterations;
        eo.stall_window = o.stall_window;
        eo.init_dist = dist_for(o, f);
        const auto r = embed_nonmetric(f, target, eo, o.seed);
        json run{{"form", f.label()},
                 {"iterations", r.iterations},
                 {"converged", r.converged},
                 {"disagreements", r.disagreements},
                 {"p_e", r.p_e},
                 {"stop_reason", to_string(r.stop)}};
        std::ostringstream pts;
        write_points_csv(pts, li.labels, r.points);
        const std::string file = "embedding_" + f.label() + ".csv";
        if (o.out.empty()) {
            json coords = json::array();
            for (const auto& p : r.points) coords.push_back(std::vector<double>(p.data(), p.data() + p.size()));
            run["points"] = coords;
        } else {
            em.side_file(file, pts.str());
            run["points_file"] = file;
        }
        runs.push_back(run);
    }
    report["runs"] = runs;
    em.report("embed", report);
    return 0;
}

int cmd_convert(const Options& o, std::ostream& out, std::ostream& err) {
    const auto li = load_input(o, err);
    json config = input_config(o);
    auto report = base_report("convert", o, config);
    report["n_points"] = li.matrix->size();
    report["source"] = li.source;
    std::ostringstream m;
    write_matrix_csv(m, li.matrix->values(), li.labels);
    if (o.out.empty()) {
        out << m.str();
        return 0;
    }
    Emitter em(o, out);
    em.side_file("dissimilarity.csv", m.str());
    std::ostringstream l;
    write_index_list_csv(l, sorted_index_list(*li.matrix));
    em.side_file("index_list.csv", l.str());
    em.report("convert", report);
    return 0;
}

// -- option wiring ------------------------------------------------------------

void add_output(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "Output directory (stdout when omitted)");
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", o.seed, "Seed for all randomness");
    sub->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp from reports");
}

void add_input(CLI::App* sub, Options& o, bool required) {
    auto* in = sub->add_option("--input", o.input, "Input CSV");
    if (required) in->required();
    sub->add_option("--kind", o.kind, "Input kind")
        ->check(CLI::IsMember({"dissimilarity", "similarity", "latlong", "features"}));
    sub->add_option("--metric", o.metric, "Feature dissimilarity")->check(CLI::IsMember({"l2", "angular", "rfa"}));
    sub->add_option("--radius", o.radius, "Haversine radius");
    sub->add_option("--sigma", o.sigma, "RFA kernel width (automatic when omitted)");
    sub->add_option("--knn", o.knn, "RFA symmetric k-NN mask");
}

void add_sampling(CLI::App* sub, Options& o) {
    sub->add_option("--clique", o.clique, "Clique size N");
    sub->add_option("--samples", o.samples, "Number of sampled cliques M");
    sub->add_option("--threads", o.threads, "Sampling threads (0 = all cores)");
}

void add_forms(CLI::App* sub, Options& o) {
    sub->add_option("--forms", o.forms, "Comma-separated space forms, e.g. H2,E2,S2");
    sub->add_option("--dims", o.dims, "Dimensions applied to each form letter, e.g. 2..4");
    sub->add_option("--dist", o.dist, "Oracle distributions, e.g. projected-normal:100,normal:100,uniform");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Curvature and dimension inference from distance comparisons", "ordinal-forms"};
    app.set_version_flag("--version", ORDFORMS_VERSION);
    app.require_subcommand(1);

    auto* detect = app.add_subcommand("detect", "Minimum-TV space form test on sampled cliques");
    add_input(detect, o, true);
    add_sampling(detect, o);
    add_forms(detect, o);
    add_output(detect, o);
    detect->add_option("--mode", o.mode, "single or aggregate")->check(CLI::IsMember({"single", "aggregate"}));
    detect->add_option("--k", o.k, "alpha index for single mode (default N)");
    detect->add_option("--ref-samples", o.ref_samples, "Reference samples per form (default --samples)");

    auto* pmf = app.add_subcommand("pmf", "Empirical PMFs of alpha_k on sampled cliques");
    add_input(pmf, o, true);
    add_sampling(pmf, o);
    add_output(pmf, o);

    auto* reference = app.add_subcommand("reference", "Oracle PMFs for random points in space forms");
    add_sampling(reference, o);
    add_forms(reference, o);
    add_output(reference, o);
    reference->add_option("--ref-samples", o.ref_samples, "Alias of --samples");

    auto* capacity = app.add_subcommand("capacity", "Ordinal capacities and N-point spreads");
    add_forms(capacity, o);
    add_output(capacity, o);
    capacity->add_option("--n", o.n_range, "Point counts, e.g. 6..20,100");

    auto* lowerbound = app.add_subcommand("lowerbound", "Embedding dimension lower bounds");
    add_input(lowerbound, o, false);
    add_sampling(lowerbound, o);
    add_output(lowerbound, o);
    lowerbound->add_option("--cliques", o.cliques, "Clique sizes for the max spread, e.g. 6..20,100");
    lowerbound->add_option("--tree-degree", o.tree_degree, "Maximum degree of a metric tree");

    auto* synth = app.add_subcommand("synth-tree", "Random weighted tree with optional noise");
    add_output(synth, o);
    synth->add_option("--nodes", o.nodes, "Number of nodes");
    synth->add_option("--max-degree", o.max_degree, "Degree cap");
    synth->add_option("--snr", o.snr, "Additive Gaussian noise level in dB");
    synth->add_option("--displacement", o.displacement, "Mean rank displacement of the index list");
    synth->add_flag("--matrix", o.write_matrix, "Also write the distance matrix");

    auto* embed = app.add_subcommand("embed", "Non-metric embedding by alternating projections");
    add_input(embed, o, true);
    add_forms(embed, o);
    add_output(embed, o);
    embed->add_option("--max-iter", o.max_iterations, "Iteration cap");
    embed->add_option("--stall", o.stall_window, "Stop after this many iterations without improvement");
    embed->add_option("--threads", o.threads, "Accepted for interface symmetry; runs are single-threaded");

    auto* convert = app.add_subcommand("convert", "Ingest raw data into a dissimilarity matrix");
    add_input(convert, o, true);
    add_output(convert, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << ORDFORMS_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto selected = app.get_subcommands();
        err << (selected.empty() ? app.help() : selected.front()->help());
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "embed" && sub->get_option("--forms")->count() == 0) o.forms = "E";
    if (name == "embed" && o.dims.empty() && sub->get_option("--forms")->count() == 0) o.dims = "2";
    if (name == "capacity" && sub->get_option("--format")->count() == 0) o.format = "csv";
    try {
        if (name == "detect") return cmd_detect(o, out, err);
        if (name == "pmf") return cmd_pmf(o, out, err);
        if (name == "reference") return cmd_reference(o, out);
        if (name == "capacity") return cmd_capacity(o, out);
        if (name == "lowerbound") return cmd_lowerbound(o, out, err);
        if (name == "synth-tree") return cmd_synth_tree(o, out);
        if (name == "embed") return cmd_embed(o, out, err);
        if (name == "convert") return cmd_convert(o, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << sub->help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace ordforms::cli
