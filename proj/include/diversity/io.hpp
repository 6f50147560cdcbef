#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "diversity/metric.hpp"
#include "diversity/symmetry.hpp"

namespace diversity {

struct ReadOptions {
    /// Accept decimal notation; such entries are flagged inexact.
    bool allow_float = false;
};

/// Distance CSV: first row holds the labels, row i then holds either the lower
/// triangle including the diagonal (i+1 entries) or the full row (n entries).
/// Blank lines and lines starting with '#' are skipped.
DistanceMatrix read_distance_csv(std::istream& in, const std::string& source = "<stream>",
                                 const ReadOptions& options = {});
DistanceMatrix load_distance_csv(const std::filesystem::path& path, const ReadOptions& options = {});
/// Writes the lower triangle including the diagonal.
void write_distance_csv(std::ostream& out, const DistanceMatrix& m);

/// Tree file: one "u v w" edge per line, whitespace separated; '#' starts a comment.
WeightedTree read_tree(std::istream& in, const std::string& source = "<stream>", const ReadOptions& options = {});
WeightedTree load_tree(const std::filesystem::path& path, const ReadOptions& options = {});
void write_tree(std::ostream& out, const WeightedTree& tree);

/// Point file: "metric,hamming" or "metric,euclidean" header, then "label,x1,x2,..." rows.
PointCloud read_points(std::istream& in, const std::string& source = "<stream>", const ReadOptions& options = {});
PointCloud load_points(const std::filesystem::path& path, const ReadOptions& options = {});
void write_points(std::ostream& out, const PointCloud& cloud);

/// JSON {"n": 4, "weighted": [[i, j, "p/q"], ...], "labeled": [[i, j, "e1"], ...]},
/// vertex indices 0-based. Weights may be integers or rational strings.
PartialGraph read_partial_graph(std::istream& in, const std::string& source = "<stream>");
PartialGraph load_partial_graph(const std::filesystem::path& path);
void write_partial_graph(std::ostream& out, const PartialGraph& g);

}  // namespace diversity
