#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "diversity/metric.hpp"
#include "diversity/scalar.hpp"

namespace diversity {

/// Complete graph on n unlabelled vertices where every vertex pair either
/// carries a weight or a distinct edge label.
class PartialGraph {
public:
    struct WeightedEdge {
        std::size_t u;
        std::size_t v;
        Scalar weight;
    };
    struct LabeledEdge {
        std::size_t u;
        std::size_t v;
        std::string label;
    };

    PartialGraph() = default;
    /// Throws std::invalid_argument unless the two edge lists cover every pair
    /// exactly once and the labels are distinct.
    PartialGraph(std::size_t n, std::vector<WeightedEdge> weighted, std::vector<LabeledEdge> labeled);

    /// The partial graph formed from the complete graph of `source` by deleting
    /// the weights of `labeled` and labelling those edges instead.
    static PartialGraph from_matrix(const DistanceMatrix& source, std::vector<LabeledEdge> labeled);

    std::size_t size() const noexcept { return n_; }
    const std::vector<WeightedEdge>& weighted_edges() const noexcept { return weighted_; }
    const std::vector<LabeledEdge>& labeled_edges() const noexcept { return labeled_; }

    /// Index into labeled_edges() for pair (u,v), or npos when the pair is weighted.
    std::size_t labeled_index(std::size_t u, std::size_t v) const { return slot_[u * n_ + v].labeled; }
    /// Weight of pair (u,v); nullptr when the pair is labelled.
    const Scalar* weight(std::size_t u, std::size_t v) const;
    std::size_t find_label(const std::string& label) const;

    bool exact() const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const PartialGraph& a, const PartialGraph& b);

private:
    struct Slot {
        std::size_t weighted = npos;
        std::size_t labeled = npos;
    };

    std::size_t n_ = 0;
    std::vector<WeightedEdge> weighted_;
    std::vector<LabeledEdge> labeled_;
    std::vector<Slot> slot_;
};

using Permutation = std::vector<std::size_t>;

struct SymmetryOptions {
    std::size_t max_n = 9;
    /// Relative tolerance used only when a weight is flagged inexact.
    double tolerance = 1e-9;
};

/// Every vertex permutation sending weighted edges to weighted edges of equal
/// weight and labelled edges to labelled edges. Sorted lexicographically; the
/// identity is first.
std::vector<Permutation> automorphisms(const PartialGraph& g, const SymmetryOptions& options = {});

struct EdgeOrbitPartition {
    std::vector<std::vector<std::size_t>> orbits;  // indices into labeled_edges(), each sorted, by first member
    std::size_t group_size = 0;

    std::size_t orbit_of(std::size_t labeled_edge) const;
};

EdgeOrbitPartition edge_orbits(const PartialGraph& g, const SymmetryOptions& options = {});

/// True when some automorphism maps the endpoints of edge e1 onto those of e2.
bool symmetric(const PartialGraph& g, std::size_t e1, std::size_t e2, const SymmetryOptions& options = {});

/// Raised when a transformed matrix fails validation. Carries both matrices as evidence.
class TransformViolation : public std::runtime_error {
public:
    TransformViolation(const std::string& what, DistanceMatrix before, DistanceMatrix after, ValidationResult result)
        : std::runtime_error(what), before_(std::move(before)), after_(std::move(after)), result_(std::move(result)) {}

    const DistanceMatrix& before() const noexcept { return before_; }
    const DistanceMatrix& after() const noexcept { return after_; }
    const ValidationResult& result() const noexcept { return result_; }

private:
    DistanceMatrix before_;
    DistanceMatrix after_;
    ValidationResult result_;
};

/// Replaces each labelled edge's weight by the mean source weight over its
/// orbit. Weighted edges of g must agree with source.
DistanceMatrix average_orbits(const DistanceMatrix& source, const PartialGraph& g,
                              const SymmetryOptions& options = {});

struct PairMove {
    std::string e1;
    std::string e2;
    Scalar lambda;  // source weight of e1 plus that of e2
    Scalar new_w1;  // e2 receives lambda - new_w1

    /// Move for g's two labelled edges (first is e1) with lambda taken from source.
    static PairMove toward_mean(const DistanceMatrix& source, const PartialGraph& g, Scalar new_w1);
};

/// Moves the weights of two symmetric labelled edges strictly toward their mean,
/// keeping their sum. g must have exactly those two labelled edges.
DistanceMatrix apply_pair_move(const DistanceMatrix& source, const PairMove& move, const PartialGraph& g,
                               const SymmetryOptions& options = {});

}  // namespace diversity
