#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diversity/metric.hpp"
#include "diversity/scalar.hpp"

namespace diversity {

/// Set functions over the pairwise distances that are continuous, vanish when
/// any distance is zero, are strictly positive and increasing otherwise, and
/// scale linearly with the distances.
class SuitableFunction {
public:
    enum class Kind { geometric_mean, harmonic_eq2, linear_combination };

    /// (prod d_ij)^(1 / C(n,2)); evaluated in floating point.
    static SuitableFunction geometric_mean();
    /// C(n,2) / sum(1 / d_ij); exact. Equals 1 when every distance is 1.
    static SuitableFunction harmonic();
    /// a * geometric_mean + b * harmonic with a, b >= 0 and a + b > 0.
    static SuitableFunction linear_combination(Scalar geometric_weight, Scalar harmonic_weight);

    Kind kind() const noexcept { return kind_; }
    const Scalar& geometric_weight() const noexcept { return geometric_weight_; }
    const Scalar& harmonic_weight() const noexcept { return harmonic_weight_; }

    /// True when values come out of floating-point evaluation.
    bool floating() const { return !geometric_weight_.is_zero(); }

    std::string name() const;

    friend bool operator==(const SuitableFunction&, const SuitableFunction&) = default;

private:
    SuitableFunction(Kind kind, Scalar geo, Scalar harm)
        : kind_(kind), geometric_weight_(std::move(geo)), harmonic_weight_(std::move(harm)) {}

    Kind kind_ = Kind::harmonic_eq2;
    Scalar geometric_weight_{0};
    Scalar harmonic_weight_{1};
};

struct MeasureKind {
    enum class Id { min_dist, max_dist, avg_dist, total_dist, phylo, d_f, d_three, d_f_hybrid, d_merging };

    Id id = Id::d_merging;
    SuitableFunction f = SuitableFunction::harmonic();

    static MeasureKind min_dist() { return {Id::min_dist}; }
    static MeasureKind max_dist() { return {Id::max_dist}; }
    static MeasureKind avg_dist() { return {Id::avg_dist}; }
    static MeasureKind total_dist() { return {Id::total_dist}; }
    static MeasureKind phylo() { return {Id::phylo}; }
    static MeasureKind d_f(SuitableFunction f = SuitableFunction::harmonic()) { return {Id::d_f, std::move(f)}; }
    static MeasureKind d_three() { return {Id::d_three}; }
    static MeasureKind d_f_hybrid(SuitableFunction f = SuitableFunction::harmonic()) {
        return {Id::d_f_hybrid, std::move(f)};
    }
    static MeasureKind d_merging() { return {Id::d_merging}; }

    /// Command-line names: min-dist, max-dist, avg-dist, total-dist, phylo,
    /// d-f-eq2, d-f-geo, d-f-lin:<a>,<b>, d-three, d-f-hybrid, d-f-hybrid-geo,
    /// d-f-hybrid-lin:<a>,<b>, d-merging.
    static MeasureKind parse(std::string_view name);
    std::string name() const;

    bool needs_tree() const noexcept { return id == Id::phylo; }
    /// Scores come from floating-point evaluation (comparisons need a tolerance).
    bool floating() const { return (id == Id::d_f || id == Id::d_f_hybrid) && f.floating(); }

    friend bool operator==(const MeasureKind&, const MeasureKind&) = default;
};

struct DiversityScore {
    Scalar value;
    MeasureKind measure;
    std::vector<std::string> subset;
    bool exact = true;
    std::vector<std::string> notes;
};

/// Size bounds for the recursive measures.
struct MeasureLimits {
    std::size_t max_subset_recursion = 16;  // d_f, d_f_hybrid: 2^n memo table
    std::size_t max_merging = 8;            // d_merging
};

enum class Baseline { min, max, avg, total };

/// Min/max/mean/sum over the C(n,2) distances; 0 for a single point.
DiversityScore baseline(const DistanceMatrix& m, Baseline kind);

/// Total weight of the smallest subtree of `tree` connecting `subset`.
DiversityScore phylo_diversity(const WeightedTree& tree, std::span<const std::string> subset);

/// f over all pairwise distances of m (n >= 2). Exactly 0 when any distance is 0.
Scalar suitable_f(const DistanceMatrix& m, const SuitableFunction& f);

/// D_f(S) = f(S) + max over (|S|-1)-subsets T of D_f(T), with D_f of a pair
/// being its distance and of a point 0. Memoized over index subsets.
DiversityScore d_f(const DistanceMatrix& m, const SuitableFunction& f, const MeasureLimits& limits = {});

/// (3/2) (sum 1/d_ij)^-1 + (1/2) sum d_ij for three points at positive distances.
DiversityScore d_three(const DistanceMatrix& m);

/// As d_f, but every three-point subset is scored by d_three. Duplicates are
/// quotiented out first.
DiversityScore d_f_hybrid(const DistanceMatrix& m, const SuitableFunction& f = SuitableFunction::harmonic(),
                          const MeasureLimits& limits = {});

struct MergingStats {
    std::size_t nodes = 0;               // recursion nodes evaluated (memo misses)
    std::size_t memo_hits = 0;
    std::size_t weight_sum_failures = 0;  // nodes where the p_kl did not sum to exactly 1
};

/// Merging measure: D(S) = sum_{k<l} p_kl (d_kl + D(S_kl)) with p_kl proportional
/// to 1/d_kl and S_kl the set with k and l merged into their midpoint.
///
/// Duplicates are quotiented out first (noted on the score). Sub-results are
/// memoized by merge state: each merged point is a dyadic average of original
/// points, and disjoint merges commute, so distinct branches often reach the
/// same state.
DiversityScore d_merging(const DistanceMatrix& m, const MeasureLimits& limits = {}, MergingStats* stats = nullptr);

struct MergeWeight {
    std::size_t k;
    std::size_t l;
    Scalar p;
};

/// Top-level p_kl for a matrix with positive off-diagonal entries.
std::vector<MergeWeight> merging_weights(const DistanceMatrix& m);

/// Any matrix measure on the whole of m. Throws for phylo.
DiversityScore evaluate(const DistanceMatrix& m, const MeasureKind& kind, const MeasureLimits& limits = {});

/// Measure of the labelled subset (all points when empty).
DiversityScore score(const DistanceMatrix& m, std::span<const std::string> subset, const MeasureKind& kind,
                     const MeasureLimits& limits = {});
/// phylo directly on the tree; other measures on the tree's path metric.
DiversityScore score(const WeightedTree& tree, std::span<const std::string> subset, const MeasureKind& kind,
                     const MeasureLimits& limits = {});

struct RankEntry {
    std::size_t input_index;
    std::size_t rank;  // 1-based; tied entries share a rank
    bool tied;
    DiversityScore score;
};

/// Descending by score, ties kept in input order and flagged.
std::vector<RankEntry> rank_scores(std::vector<DiversityScore> scores);
std::vector<RankEntry> rank(const DistanceMatrix& m, std::span<const std::vector<std::string>> subsets,
                            const MeasureKind& kind, const MeasureLimits& limits = {});
std::vector<RankEntry> rank(const WeightedTree& tree, std::span<const std::vector<std::string>> subsets,
                            const MeasureKind& kind, const MeasureLimits& limits = {});

}  // namespace diversity
