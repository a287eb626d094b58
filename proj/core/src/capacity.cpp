#include "ordforms/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ordforms/ordinal.hpp"

namespace ordforms {

CapPackingTable::CapPackingTable(std::map<int, Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw Error("cap packing table is empty");
    std::int64_t prev = 0;
    int expected = entries_.begin()->first;
    for (const auto& [d, e] : entries_) {
        if (d < 1) throw Error("cap packing table dimensions must be >= 1");
        if (d != expected) throw Error("cap packing table dimensions must be contiguous");
        if (e.rho <= prev) throw Error("cap packing numbers must be strictly increasing in d");
        prev = e.rho;
        ++expected;
    }
}

const CapPackingTable& CapPackingTable::builtin() {
    static const CapPackingTable table({
        {1, {2, true}},
        {2, {6, true}},
        {3, {15, false}},
        {4, {31, false}},
        {5, {59, false}},
        {6, {106, false}},
    });
    return table;
}

CapPackingTable CapPackingTable::extended_from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open packing table '" + path.string() + "'");
    auto entries = builtin().entries();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::string first;
        fields >> first;
        if (first == "d") continue;  // header
        int d = 0;
        std::int64_t rho = 0;
        int exact = 0;
        try {
            d = std::stoi(first);
        } catch (const std::exception&) {
            throw Error("packing table line " + std::to_string(lineno) + ": bad dimension");
        }
        if (!(fields >> rho)) throw Error("packing table line " + std::to_string(lineno) + ": bad rho");
        if (!(fields >> exact)) exact = 0;
        entries[d] = {rho, exact != 0};
    }
    return CapPackingTable(std::move(entries));
}

CapPackingTable CapPackingTable::from_environment() {
    if (const char* path = std::getenv("ORDINAL_FORMS_TABLE"); path != nullptr && *path != '\0') {
        return extended_from_file(path);
    }
    return builtin();
}

std::optional<std::int64_t> CapPackingTable::rho(int d) const {
    const auto it = entries_.find(d);
    if (it == entries_.end()) return std::nullopt;
    return it->second.rho;
}

bool CapPackingTable::is_exact(int d) const {
    const auto it = entries_.find(d);
    return it != entries_.end() && it->second.exact;
}

std::vector<std::int64_t> TuranGraphSpec::part_sizes() const {
    if (n_vertices < 1 || n_parts < 1) throw Error("Turan graph needs N >= 1 and K >= 1");
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(n_parts), base_part_size());
    for (std::int64_t k = 0; k < n_large_parts(); ++k) ++sizes[static_cast<std::size_t>(k)];
    return sizes;
}

std::int64_t turan_edge_count(std::int64_t n, std::int64_t k) {
    if (n < 1 || k < 1) throw Error("turan_edge_count needs N >= 1 and K >= 1");
    if (k >= n) return choose2(n);
    const TuranGraphSpec spec{n, k};
    const std::int64_t n1 = spec.base_part_size();
    const std::int64_t k1 = spec.n_large_parts();
    return choose2(n) - k1 * choose2(n1 + 1) - (k - k1) * choose2(n1);
}

Capacity ordinal_capacity(const SpaceForm& form, const CapPackingTable& table) {
    if (form.curvature() == Curvature::hyperbolic) return Capacity::infinite();
    const auto rho = table.rho(form.dim());
    if (!rho) {
        throw Error("no cap packing number tabulated for d = " + std::to_string(form.dim()) +
                    " (extend the table via ORDINAL_FORMS_TABLE)");
    }
    return Capacity::finite(*rho + 1);
}

std::int64_t n_point_ordinal_spread(const SpaceForm& form, std::int64_t n, const CapPackingTable& table) {
    if (n < 2) throw Error("N-point ordinal spread needs N >= 2");
    const Capacity cap = ordinal_capacity(form, table);
    if (cap.is_infinite()) return choose2(n - 1) + 1;
    return turan_edge_count(n - 1, cap.value() - 1) + 1;
}

int dimension_lower_bound(const std::map<std::int64_t, std::int64_t>& observed, const CapPackingTable& table) {
    if (observed.empty()) throw Error("dimension_lower_bound needs at least one observation");
    for (const auto& [n, a] : observed) {
        if (n < 4) throw Error("dimension_lower_bound: clique sizes must be >= 4");
        const std::int64_t lo = (n + 1) / 2;
        const std::int64_t hi = choose2(n - 1) + 1;
        if (a < lo || a > hi) {
            throw Error("observed spread " + std::to_string(a) + " at N = " + std::to_string(n) +
                        " is outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    }
    std::int64_t violating = observed.begin()->first;
    for (const auto& [d, entry] : table.entries()) {
        const SpaceForm form = SpaceForm::euclidean(d);
        bool ok = true;
        for (const auto& [n, a] : observed) {
            if (a > n_point_ordinal_spread(form, n, table)) {
                ok = false;
                violating = n;
                break;
            }
        }
        if (ok) return d;
    }
    throw DimensionBoundError(violating, "no tabulated dimension accommodates the observed spread at N = " +
                                             std::to_string(violating));
}

int tree_degree_lower_bound(std::int64_t max_degree, const CapPackingTable& table) {
    if (max_degree < 1) throw Error("tree_degree_lower_bound needs max_degree >= 1");
    for (const auto& [d, entry] : table.entries()) {
        if (entry.rho + 1 >= max_degree + 1) return d;
    }
    throw Error("max degree " + std::to_string(max_degree) + " exceeds the tabulated capacities (largest " +
                std::to_string(table.entries().rbegin()->second.rho + 1) + ")");
}

double refined_cap_angle(double delta) {
    if (!(delta > 0.0) || !(delta < std::numbers::pi)) throw Error("refined_cap_angle needs delta in (0, pi)");
    const double c = std::cos(delta);
    if (1.0 + c <= 0.0) throw Error("refined_cap_angle: cos(delta) = -1");
    return 0.5 * std::acos(std::clamp(c / (1.0 + c), -1.0, 1.0));
}

} // namespace ordforms
