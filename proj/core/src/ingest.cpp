#include "ordforms/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ordforms/error.hpp"

namespace ordforms {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream fields(line);
        while (std::getline(fields, cell, ',')) cells.push_back(trim(cell));
        if (line.back() == ',') cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

bool numeric(const std::string& s) { return parse_number(s).has_value(); }

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return in;
}

} // namespace

MatrixCsv read_dissimilarity_csv(const std::filesystem::path& path, SimilarityKind kind) {
    auto in = open_input(path);
    return parse_dissimilarity_csv(in, kind);
}

MatrixCsv parse_dissimilarity_csv(std::istream& in, SimilarityKind kind) {
    auto rows = read_rows(in);
    if (rows.empty()) throw Error("matrix CSV is empty");

    std::vector<std::string> header;
    const auto& first = rows.front();
    if (std::any_of(first.begin() + 1, first.end(), [](const std::string& c) { return !numeric(c); }) ||
        (first.size() == 1 && !numeric(first.front()))) {
        header = first;
        rows.erase(rows.begin());
    }
    if (rows.empty()) throw Error("matrix CSV has no data rows");
    const bool label_col =
        std::any_of(rows.begin(), rows.end(), [](const auto& r) { return !r.empty() && !numeric(r.front()); });

    const std::size_t n = rows.size();
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i];
        const std::size_t offset = label_col ? 1 : 0;
        if (r.size() != n + offset) {
            throw Error("matrix CSV is not square: row " + std::to_string(i + 1) + " has " +
                        std::to_string(r.size() - offset) + " values, expected " + std::to_string(n));
        }
        if (label_col) labels.push_back(r.front());
        for (std::size_t j = 0; j < n; ++j) {
            const auto v = parse_number(r[j + offset]);
            if (!v) throw Error("matrix CSV: non-numeric entry '" + r[j + offset] + "'");
            if (std::isnan(*v)) throw Error("matrix CSV: NaN entry at row " + std::to_string(i + 1));
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
        }
    }
    if (!label_col) {
        if (header.size() == n) {
            labels = header;
        } else if (header.size() == n + 1) {
            labels.assign(header.begin() + 1, header.end());
        } else {
            for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
        }
    }

    double asym = 0.0;
    double scale = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (i != j) scale = std::max(scale, std::abs(a(i, j)));
            if (j > i) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
        }
    }
    Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    sym.diagonal().setZero();

    std::vector<std::string> warnings;
    if (asym > 1e-6 * std::max(scale, std::numeric_limits<double>::min())) {
        std::ostringstream msg;
        msg << "input matrix is asymmetric (max |a_ij - a_ji| = " << asym << "); symmetrized by averaging";
        warnings.push_back(msg.str());
    }
    if (kind == SimilarityKind::similarity) {
        return {similarity_to_dissimilarity(sym), std::move(labels), asym, std::move(warnings)};
    }
    return {DissimilarityMatrix(std::move(sym)), std::move(labels), asym, std::move(warnings)};
}

DissimilarityMatrix similarity_to_dissimilarity(const Eigen::MatrixXd& similarity) {
    if (similarity.rows() != similarity.cols()) throw Error("similarity matrix must be square");
    const Eigen::Index n = similarity.rows();
    std::vector<double> distinct;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double s = similarity(i, j);
            if (std::isnan(s)) throw Error("similarity matrix has a NaN entry");
            if (s != similarity(j, i)) throw Error("similarity matrix is not symmetric");
            distinct.push_back(s);
        }
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto above = distinct.end() - std::upper_bound(distinct.begin(), distinct.end(), similarity(i, j));
            d(i, j) = d(j, i) = static_cast<double>(above);
        }
    }
    return DissimilarityMatrix(std::move(d));
}

std::vector<LatLongRecord> read_latlong_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_latlong_csv(in);
}

std::vector<LatLongRecord> parse_latlong_csv(std::istream& in) {
    auto rows = read_rows(in);
    std::vector<LatLongRecord> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3) throw Error("lat/long CSV: expected id,lat,lon on line " + std::to_string(r + 1));
        const auto lat = parse_number(row[1]);
        const auto lon = parse_number(row[2]);
        if (!lat || !lon) {
            if (r == 0) continue;  // header
            throw Error("lat/long CSV: non-numeric coordinate on line " + std::to_string(r + 1));
        }
        out.push_back({row[0], *lat, *lon});
    }
    return out;
}

DissimilarityMatrix haversine_matrix(std::span<const LatLongRecord> records, double radius) {
    if (records.size() < 2) throw Error("haversine_matrix needs at least 2 records");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("haversine radius must be positive");
    constexpr double deg = std::numbers::pi / 180.0;
    for (const auto& r : records) {
        if (!(r.latitude >= -90.0 && r.latitude <= 90.0)) throw Error("latitude out of range for '" + r.id + "'");
        if (!(r.longitude > -180.0 && r.longitude <= 180.0)) {
            throw Error("longitude out of range for '" + r.id + "'");
        }
    }
    const auto n = static_cast<Eigen::Index>(records.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double phi1 = records[i].latitude * deg, phi2 = records[j].latitude * deg;
            const double dphi = phi2 - phi1;
            const double dlambda = (records[j].longitude - records[i].longitude) * deg;
            const double s1 = std::sin(0.5 * dphi), s2 = std::sin(0.5 * dlambda);
            const double h = std::clamp(s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2, 0.0, 1.0);
            d(i, j) = d(j, i) = 2.0 * radius * std::asin(std::sqrt(h));
        }
    }
    return DissimilarityMatrix(std::move(d));
}

FeatureTable read_features_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_features_csv(in);
}

FeatureTable parse_features_csv(std::istream& in) {
    auto rows = read_rows(in);
    if (!rows.empty() && rows.front().size() > 1 &&
        std::any_of(rows.front().begin() + 1, rows.front().end(), [](const auto& c) { return !numeric(c); })) {
        rows.erase(rows.begin());
    }
    if (rows.empty()) throw Error("feature CSV has no data rows");
    const std::size_t p = rows.front().size() - 1;
    if (p == 0) throw Error("feature CSV needs at least one feature column");
    FeatureTable table;
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != p + 1) throw Error("feature CSV: ragged row " + std::to_string(r + 1));
        table.ids.push_back(rows[r].front());
        for (std::size_t c = 0; c < p; ++c) {
            const auto v = parse_number(rows[r][c + 1]);
            if (!v || std::isnan(*v)) throw Error("feature CSV: bad value '" + rows[r][c + 1] + "'");
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = *v;
        }
    }
    return table;
}

namespace {

void check_features(const Eigen::MatrixXd& x) {
    if (x.rows() < 2) throw Error("need at least 2 feature rows");
    if (x.hasNaN()) throw Error("features contain NaN");
    if (!x.allFinite()) throw Error("features contain infinite values");
}

} // namespace

DissimilarityMatrix l2_dissimilarity(const Eigen::MatrixXd& features) {
    check_features(features);
    const Eigen::Index n = features.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (features.row(i) - features.row(j)).norm();
    }
    return DissimilarityMatrix(std::move(d));
}

DissimilarityMatrix angular_dissimilarity(const Eigen::MatrixXd& features) {
    check_features(features);
    const Eigen::RowVectorXd mean = features.colwise().mean();
    Eigen::MatrixXd centred = features.rowwise() - mean;
    const Eigen::VectorXd norms = centred.rowwise().norm();
    const double scale = std::max(norms.maxCoeff(), std::numeric_limits<double>::min());
    for (Eigen::Index i = 0; i < norms.size(); ++i) {
        if (!(norms[i] > 1e-12 * scale)) {
            throw Error("angular dissimilarity: row " + std::to_string(i + 1) + " equals the mean");
        }
        centred.row(i) /= norms[i];
    }
    const Eigen::Index n = features.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto u = centred.row(i), v = centred.row(j);
            d(i, j) = d(j, i) = 2.0 * std::atan2((u - v).norm(), (u + v).norm());
        }
    }
    return DissimilarityMatrix(std::move(d));
}

double rfa_auto_sigma(const Eigen::MatrixXd& features) {
    check_features(features);
    const Eigen::Index n = features.rows();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) total += 2.0 * (features.row(i) - features.row(j)).norm();
    }
    const auto nn = static_cast<double>(n);
    return total / (std::sqrt(10.0) * nn * nn);
}

Eigen::MatrixXd rfa_similarity(const Eigen::MatrixXd& features, const RfaConfig& cfg) {
    check_features(features);
    const double sigma = cfg.sigma ? *cfg.sigma : rfa_auto_sigma(features);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("RFA kernel width must be positive");
    const Eigen::Index n = features.rows();

    Eigen::MatrixXd sq(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) sq(i, j) = (features.row(i) - features.row(j)).squaredNorm();
    }
    Eigen::MatrixXd adj = (-sq.array() / (2.0 * sigma * sigma)).exp().matrix();
    adj.diagonal().setZero();

    if (cfg.knn) {
        const auto k = static_cast<Eigen::Index>(*cfg.knn);
        if (k < 1 || k >= n) throw Error("RFA k-NN size must be in [1, n - 1]");
        Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(n, n);
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
            std::erase(order, i);
            std::partial_sort(order.begin(), order.begin() + k, order.end(),
                              [&](Eigen::Index a, Eigen::Index b) { return sq(i, a) < sq(i, b) || (sq(i, a) == sq(i, b) && a < b); });
            for (Eigen::Index t = 0; t < k; ++t) {
                const Eigen::Index j = order[static_cast<std::size_t>(t)];
                mask(i, j) = mask(j, i) = 1.0;
            }
            order.resize(static_cast<std::size_t>(n));
        }
        adj = adj.cwiseProduct(mask);
    }

    Eigen::MatrixXd system = -adj;
    system.diagonal() = adj.rowwise().sum().array() + 1.0;
    const Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success) throw Error("RFA: I + L is not positive definite");
    Eigen::MatrixXd p = llt.solve(Eigen::MatrixXd::Identity(n, n));
    return 0.5 * (p + p.transpose());
}

} // namespace ordforms
