#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordforms/error.hpp"
#include "ordforms/geometry.hpp"

namespace ordforms {

/// pi/6 spherical cap packing numbers rho_d, keyed by ambient Euclidean dimension d.
///
/// The builtin table is {1: 2, 2: 6, 3: 15, 4: 31, 5: 59, 6: 106}; d = 1, 2 are exact,
/// d >= 3 are upper bounds. An upper bound can only enlarge the capacity and hence
/// A_N, so dimension lower bounds computed from it remain valid.
class CapPackingTable {
public:
    struct Entry {
        std::int64_t rho;
        bool exact;
    };

    static const CapPackingTable& builtin();

    /// Builtin entries overridden/extended by a CSV file of `d,rho[,exact]` rows.
    static CapPackingTable extended_from_file(const std::filesystem::path& path);

    /// Builtin table, extended by the file named in ORDINAL_FORMS_TABLE when set.
    static CapPackingTable from_environment();

    explicit CapPackingTable(std::map<int, Entry> entries);

    std::optional<std::int64_t> rho(int d) const;
    bool is_exact(int d) const;
    const std::map<int, Entry>& entries() const noexcept { return entries_; }

private:
    std::map<int, Entry> entries_;
};

/// Ordinal capacity: either a finite count or the hyperbolic infinity.
class Capacity {
public:
    static Capacity infinite() { return Capacity(); }
    static Capacity finite(std::int64_t k) { return Capacity(k); }

    bool is_infinite() const noexcept { return !value_.has_value(); }
    std::int64_t value() const {
        if (!value_) throw Error("capacity is infinite");
        return *value_;
    }
    std::string to_string() const { return value_ ? std::to_string(*value_) : std::string("inf"); }

    friend bool operator==(const Capacity&, const Capacity&) = default;

private:
    Capacity() = default;
    explicit Capacity(std::int64_t k) : value_(k) {}
    std::optional<std::int64_t> value_;
};

/// Turan graph T(N, K): complete K-partite graph with part sizes differing by at most 1.
struct TuranGraphSpec {
    std::int64_t n_vertices;
    std::int64_t n_parts;

    std::int64_t base_part_size() const noexcept { return n_vertices / n_parts; }    // N1
    std::int64_t n_large_parts() const noexcept { return n_vertices % n_parts; }      // K1
    std::vector<std::int64_t> part_sizes() const;
};

/// |E(T(N, K))| = C(N,2) - K1 C(N1+1,2) - (K-K1) C(N1,2); complete graph when K >= N.
std::int64_t turan_edge_count(std::int64_t n, std::int64_t k);

/// K(H^d) = inf, K(E^d) = K(S^d) = rho_d + 1.
Capacity ordinal_capacity(const SpaceForm& form, const CapPackingTable& table = CapPackingTable::builtin());

/// A_N(S) = |E(T(N-1, K(S)-1))| + 1, and C(N-1,2) + 1 for hyperbolic forms.
std::int64_t n_point_ordinal_spread(const SpaceForm& form, std::int64_t n,
                                    const CapPackingTable& table = CapPackingTable::builtin());

/// Thrown when no tabulated dimension accommodates the observed spreads.
class DimensionBoundError : public Error {
public:
    DimensionBoundError(std::int64_t violating_n, const std::string& message)
        : Error(message), violating_n_(violating_n) {}
    std::int64_t violating_n() const noexcept { return violating_n_; }

private:
    std::int64_t violating_n_;
};

/// Smallest tabulated d with observed[N] <= A_N(E^d) for every N.
int dimension_lower_bound(const std::map<std::int64_t, std::int64_t>& observed,
                          const CapPackingTable& table = CapPackingTable::builtin());

/// Smallest tabulated d with K(E^d) >= max_degree + 1 (star of a max-degree node).
int tree_degree_lower_bound(std::int64_t max_degree, const CapPackingTable& table = CapPackingTable::builtin());

/// Cap half-angle (1/2) acos(cos(delta) / (1 + cos(delta))) when all point pairs are
/// at least `delta` apart; the acos argument is clamped to [-1, 1].
double refined_cap_angle(double delta);

} // namespace ordforms
