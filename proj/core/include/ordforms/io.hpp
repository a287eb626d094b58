#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordforms/ordinal.hpp"
#include "ordforms/stats.hpp"
#include "ordforms/synth.hpp"

namespace ordforms {

/// Writes `content` to a temporary sibling and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

/// `rank,i,j` with 1-based ranks and indices.
void write_index_list_csv(std::ostream& out, const SortedIndexList& list);
SortedIndexList read_index_list_csv(std::istream& in);

/// One object per k: {"k", "support", "probs", "n_samples", "seed"}.
nlohmann::json pmf_family_to_json(const PmfFamily& family, std::size_t n_samples, std::uint64_t seed);
PmfFamily pmf_family_from_json(const nlohmann::json& j);

/// `value,prob`.
void write_pmf_csv(std::ostream& out, const Pmf& pmf);
/// `k,value,prob`.
void write_pmf_family_csv(std::ostream& out, const PmfFamily& family);

/// `u,v,weight` with 1-based node ids.
void write_tree_csv(std::ostream& out, const WeightedTree& tree);
WeightedTree read_tree_csv(std::istream& in);
/// True when the first line is a `u,v,weight` header.
bool looks_like_tree_csv(std::istream& in);

/// `id,c0..cd`.
void write_points_csv(std::ostream& out, std::span<const std::string> ids, std::span<const Point> points);

/// Square CSV with a header row and label column when `labels` is nonempty.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, std::span<const std::string> labels = {});

} // namespace ordforms
