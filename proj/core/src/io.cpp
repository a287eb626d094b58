#include "ordforms/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ordforms/error.hpp"

namespace ordforms {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
}

std::uint64_t parse_uint(const std::string& s, const char* what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-') throw Error(std::string("bad ") + what + " '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw Error(std::string("bad ") + what + " '" + s + "'");
    return v;
}

void put(std::ostream& out, double x) { out << std::setprecision(17) << x; }

} // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_index_list_csv(std::ostream& out, const SortedIndexList& list) {
    out << "rank,i,j\n";
    for (std::size_t r = 0; r < list.size(); ++r) out << r + 1 << ',' << list[r].i + 1 << ',' << list[r].j + 1 << '\n';
}

SortedIndexList read_index_list_csv(std::istream& in) {
    std::string line;
    std::vector<std::pair<std::uint64_t, IndexPair>> rows;
    std::uint64_t max_index = 0;
    bool first = true;
    while (std::getline(in, line)) {
        const auto cells = split(line);
        if (cells.empty() || (cells.size() == 1 && cells[0].empty())) continue;
        if (first && cells[0] == "rank") {
            first = false;
            continue;
        }
        first = false;
        if (cells.size() != 3) throw Error("index list CSV rows need rank,i,j");
        const auto rank = parse_uint(cells[0], "rank");
        auto i = parse_uint(cells[1], "index");
        auto j = parse_uint(cells[2], "index");
        if (rank == 0 || i == 0 || j == 0) throw Error("index list CSV is 1-based");
        if (i > j) std::swap(i, j);
        max_index = std::max(max_index, j);
        rows.push_back({rank, IndexPair{static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1)}});
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<IndexPair> pairs;
    pairs.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].first != r + 1) throw Error("index list ranks must be 1..L without gaps");
        pairs.push_back(rows[r].second);
    }
    return SortedIndexList(static_cast<std::size_t>(max_index), std::move(pairs));
}

nlohmann::json pmf_family_to_json(const PmfFamily& family, std::size_t n_samples, std::uint64_t seed) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [k, pmf] : family) {
        arr.push_back({{"k", k},
                       {"support", pmf.support()},
                       {"probs", pmf.probs()},
                       {"n_samples", n_samples},
                       {"seed", seed}});
    }
    return arr;
}

PmfFamily pmf_family_from_json(const nlohmann::json& j) {
    const nlohmann::json& arr = j.is_object() && j.contains("pmfs") ? j.at("pmfs") : j;
    if (!arr.is_array()) throw Error("PMF JSON must be an array of {k, support, probs}");
    PmfFamily out;
    try {
        for (const auto& item : arr) {
            out.emplace(item.at("k").get<int>(),
                        Pmf(item.at("support").get<std::vector<std::int64_t>>(), item.at("probs").get<std::vector<double>>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed PMF JSON: ") + e.what());
    }
    return out;
}

void write_pmf_csv(std::ostream& out, const Pmf& pmf) {
    out << "value,prob\n";
    for (std::size_t i = 0; i < pmf.support().size(); ++i) {
        out << pmf.support()[i] << ',';
        put(out, pmf.probs()[i]);
        out << '\n';
    }
}

void write_pmf_family_csv(std::ostream& out, const PmfFamily& family) {
    out << "k,value,prob\n";
    for (const auto& [k, pmf] : family) {
        for (std::size_t i = 0; i < pmf.support().size(); ++i) {
            out << k << ',' << pmf.support()[i] << ',';
            put(out, pmf.probs()[i]);
            out << '\n';
        }
    }
}

void write_tree_csv(std::ostream& out, const WeightedTree& tree) {
    out << "u,v,weight\n";
    for (const auto& e : tree.edges()) {
        out << e.u + 1 << ',' << e.v + 1 << ',';
        put(out, e.weight);
        out << '\n';
    }
}

WeightedTree read_tree_csv(std::istream& in) {
    std::string line;
    std::vector<WeightedEdge> edges;
    std::uint64_t max_node = 0;
    bool first = true;
    while (std::getline(in, line)) {
        const auto cells = split(line);
        if (cells.empty() || (cells.size() == 1 && cells[0].empty())) continue;
        if (first && cells[0] == "u") {
            first = false;
            continue;
        }
        first = false;
        if (cells.size() != 3) throw Error("tree CSV rows need u,v,weight");
        const auto u = parse_uint(cells[0], "node id");
        const auto v = parse_uint(cells[1], "node id");
        if (u == 0 || v == 0) throw Error("tree CSV node ids are 1-based");
        max_node = std::max({max_node, u, v});
        edges.push_back({static_cast<std::uint32_t>(u - 1), static_cast<std::uint32_t>(v - 1),
                         parse_double(cells[2], "weight")});
    }
    return WeightedTree(static_cast<std::size_t>(max_node), std::move(edges));
}

bool looks_like_tree_csv(std::istream& in) {
    const auto pos = in.tellg();
    std::string line;
    std::getline(in, line);
    in.clear();
    in.seekg(pos);
    const auto cells = split(line);
    return cells.size() == 3 && cells[0] == "u" && cells[1] == "v" && cells[2] == "weight";
}

void write_points_csv(std::ostream& out, std::span<const std::string> ids, std::span<const Point> points) {
    if (!ids.empty() && ids.size() != points.size()) throw Error("point ids and points differ in count");
    const Eigen::Index dim = points.empty() ? 0 : points.front().size();
    out << "id";
    for (Eigen::Index c = 0; c < dim; ++c) out << ",c" << c;
    out << '\n';
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (ids.empty()) {
            out << p + 1;
        } else {
            out << ids[p];
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            out << ',';
            put(out, points[p][c]);
        }
        out << '\n';
    }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, std::span<const std::string> labels) {
    const bool labelled = !labels.empty();
    if (labelled && labels.size() != static_cast<std::size_t>(m.rows())) throw Error("label count mismatch");
    if (labelled) {
        out << "id";
        for (const auto& l : labels) out << ',' << l;
        out << '\n';
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (labelled) out << labels[static_cast<std::size_t>(i)] << ',';
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            put(out, m(i, j));
        }
        out << '\n';
    }
}

} // namespace ordforms
