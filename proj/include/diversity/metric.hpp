#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "diversity/scalar.hpp"

namespace diversity {

/// Labels "s1", "s2", ..., "sn".
std::vector<std::string> default_labels(std::size_t n);

/// Symmetric n x n grid of distances over labelled points.
///
/// Construction only checks structure (square, distinct labels). Whether the
/// entries form a pseudometric is the job of validate(). Zero distance between
/// distinct points is allowed.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    /// `entries` is row-major n x n.
    DistanceMatrix(std::vector<std::string> labels, std::vector<Scalar> entries);

    /// Builds a symmetric matrix from the strict upper triangle in row order
    /// (d01, d02, ..., d0n, d12, ...). Diagonal is zero.
    static DistanceMatrix from_upper_triangle(std::vector<std::string> labels,
                                              std::span<const Scalar> upper);
    static DistanceMatrix from_upper_triangle(std::vector<std::string> labels,
                                              std::initializer_list<Scalar> upper);
    static DistanceMatrix from_upper_triangle(std::initializer_list<Scalar> upper);

    std::size_t size() const noexcept { return labels_.size(); }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<Scalar>& entries() const noexcept { return entries_; }

    std::optional<std::size_t> index_of(std::string_view label) const;
    std::vector<std::size_t> indices_of(std::span<const std::string> labels) const;

    /// True when every entry is flagged exact.
    bool exact() const;

    /// Copy with d(i,j) = d(j,i) = value.
    DistanceMatrix with_distance(std::size_t i, std::size_t j, const Scalar& value) const;
    DistanceMatrix with_labels(std::vector<std::string> labels) const;

    friend bool operator==(const DistanceMatrix& a, const DistanceMatrix& b) {
        return a.labels_ == b.labels_ && a.entries_ == b.entries_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<Scalar> entries_;
};

enum class ViolationKind { asymmetry, negative, nonzero_diagonal, triangle };

const char* to_string(ViolationKind kind);

struct MetricViolation {
    ViolationKind kind;
    std::vector<std::size_t> witness;  // (i), (i,j) or (i,j,k) for d(i,k) > d(i,j) + d(j,k)
    Scalar slack;                      // amount by which the condition fails
};

struct ValidationResult {
    std::vector<MetricViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

/// Exhaustive pseudometric check: zero diagonal, symmetry, non-negativity and
/// every triangle. Exact comparisons.
ValidationResult validate(const DistanceMatrix& m);

/// Same conditions as validate(), stops at the first failure.
bool is_pseudometric(const DistanceMatrix& m);

enum class PointMetric { euclidean, hamming };

struct PointCloud {
    std::vector<std::string> labels;
    std::vector<std::vector<Scalar>> points;
    PointMetric metric = PointMetric::euclidean;
};

/// Hamming distances are exact integers. Euclidean distances are exact when
/// the squared distance is the square of a rational and otherwise the
/// nearest double, flagged inexact.
DistanceMatrix from_points(const PointCloud& cloud);

/// Every entry multiplied by c > 0.
DistanceMatrix scale(const DistanceMatrix& m, const Scalar& c);

/// Principal submatrix in the given order.
DistanceMatrix restrict(const DistanceMatrix& m, std::span<const std::size_t> subset);

struct Quotient {
    DistanceMatrix matrix;
    std::vector<std::size_t> mapping;  // old index -> new index
};

/// Collapses every zero-distance class onto its first member.
Quotient quotient_duplicates(const DistanceMatrix& m);

/// Replaces points k and l with one point at the average of their distances to
/// every other point. The merged point takes position min(k, l) and label "k+l".
DistanceMatrix merge_pair(const DistanceMatrix& m, std::size_t k, std::size_t l);

/// m with point `of` duplicated (distance 0 to it) and appended as `label`.
DistanceMatrix with_duplicate(const DistanceMatrix& m, std::size_t of, std::string label);

enum class MetricEnsemble {
    euclidean_sample,      // points uniform in the unit cube, R^3
    shortest_path_repair,  // random entries in {1/4, ..., 4} closed under shortest paths
};

const char* to_string(MetricEnsemble e);

DistanceMatrix random_metric(std::size_t n, MetricEnsemble ensemble, std::mt19937_64& rng);
DistanceMatrix random_metric(std::size_t n, MetricEnsemble ensemble, std::uint64_t seed);

/// Edge-weighted tree with non-negative weights.
class WeightedTree {
public:
    struct Edge {
        std::string u;
        std::string v;
        Scalar weight;
    };

    WeightedTree() = default;
    /// Throws InputError unless the edges form a connected acyclic graph with
    /// non-negative weights.
    explicit WeightedTree(std::vector<Edge> edges);

    const std::vector<std::string>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::optional<std::size_t> index_of(std::string_view vertex) const;

    struct Adjacent {
        std::size_t vertex;
        std::size_t edge;
    };
    const std::vector<Adjacent>& neighbours(std::size_t vertex) const { return adjacency_[vertex]; }

    friend bool operator==(const WeightedTree& a, const WeightedTree& b);

private:
    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Adjacent>> adjacency_;
};

/// Path-length metric over the given vertices (all vertices when empty).
DistanceMatrix tree_metric(const WeightedTree& tree, std::span<const std::string> vertices = {});

}  // namespace diversity
