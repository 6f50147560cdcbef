#include "diversity/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "diversity/errors.hpp"

namespace diversity {

// ---------------------------------------------------------------------------
// Kinds

SuitableFunction SuitableFunction::geometric_mean() { return {Kind::geometric_mean, Scalar(1), Scalar(0)}; }

SuitableFunction SuitableFunction::harmonic() { return {Kind::harmonic_eq2, Scalar(0), Scalar(1)}; }

SuitableFunction SuitableFunction::linear_combination(Scalar geometric_weight, Scalar harmonic_weight) {
    if (geometric_weight.sign() < 0 || harmonic_weight.sign() < 0) {
        throw std::invalid_argument("linear combination coefficients must be non-negative");
    }
    if ((geometric_weight + harmonic_weight).sign() <= 0) {
        throw std::invalid_argument("linear combination coefficients must not all be zero");
    }
    return {Kind::linear_combination, std::move(geometric_weight), std::move(harmonic_weight)};
}

std::string SuitableFunction::name() const {
    switch (kind_) {
        case Kind::geometric_mean: return "geo";
        case Kind::harmonic_eq2: return "eq2";
        case Kind::linear_combination:
            return "lin:" + geometric_weight_.str() + "," + harmonic_weight_.str();
    }
    return "?";
}

namespace {

SuitableFunction parse_suitable(std::string_view spec) {
    if (spec == "eq2") return SuitableFunction::harmonic();
    if (spec == "geo") return SuitableFunction::geometric_mean();
    if (spec.starts_with("lin:")) {
        spec.remove_prefix(4);
        const auto comma = spec.find(',');
        if (comma == std::string_view::npos) throw InputError("lin: needs two coefficients, e.g. lin:1,1");
        try {
            return SuitableFunction::linear_combination(Scalar::parse(spec.substr(0, comma)),
                                                        Scalar::parse(spec.substr(comma + 1)));
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("bad linear combination: ") + e.what());
        }
    }
    throw InputError("unknown suitable function '" + std::string(spec) + "'");
}

}  // namespace

MeasureKind MeasureKind::parse(std::string_view name) {
    if (name == "min-dist" || name == "min") return min_dist();
    if (name == "max-dist" || name == "max") return max_dist();
    if (name == "avg-dist" || name == "avg") return avg_dist();
    if (name == "total-dist" || name == "total") return total_dist();
    if (name == "phylo") return phylo();
    if (name == "d-three") return d_three();
    if (name == "d-merging") return d_merging();
    if (name == "d-f-hybrid") return d_f_hybrid();
    if (name.starts_with("d-f-hybrid-")) return d_f_hybrid(parse_suitable(name.substr(11)));
    if (name.starts_with("d-f-")) return d_f(parse_suitable(name.substr(4)));
    throw InputError("unknown measure '" + std::string(name) + "'");
}

std::string MeasureKind::name() const {
    switch (id) {
        case Id::min_dist: return "min-dist";
        case Id::max_dist: return "max-dist";
        case Id::avg_dist: return "avg-dist";
        case Id::total_dist: return "total-dist";
        case Id::phylo: return "phylo";
        case Id::d_f: return "d-f-" + f.name();
        case Id::d_three: return "d-three";
        case Id::d_f_hybrid:
            return f.kind() == SuitableFunction::Kind::harmonic_eq2 ? "d-f-hybrid" : "d-f-hybrid-" + f.name();
        case Id::d_merging: return "d-merging";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Baselines and phylogenetic diversity

namespace {

DiversityScore make_score(Scalar value, MeasureKind kind, const DistanceMatrix& m) {
    DiversityScore s;
    s.exact = value.exact();
    s.value = std::move(value);
    s.measure = std::move(kind);
    s.subset = m.labels();
    return s;
}

MeasureKind baseline_kind(Baseline kind) {
    switch (kind) {
        case Baseline::min: return MeasureKind::min_dist();
        case Baseline::max: return MeasureKind::max_dist();
        case Baseline::avg: return MeasureKind::avg_dist();
        case Baseline::total: return MeasureKind::total_dist();
    }
    return MeasureKind::total_dist();
}

}  // namespace

DiversityScore baseline(const DistanceMatrix& m, Baseline kind) {
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("baseline of an empty set");
    if (n == 1) return make_score(Scalar(0), baseline_kind(kind), m);

    Scalar lo = m(0, 1);
    Scalar hi = m(0, 1);
    Scalar total(0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            lo = min(lo, m(i, j));
            hi = max(hi, m(i, j));
            total += m(i, j);
        }
    }
    Scalar value;
    switch (kind) {
        case Baseline::min: value = lo; break;
        case Baseline::max: value = hi; break;
        case Baseline::total: value = total; break;
        case Baseline::avg: value = total / Scalar(static_cast<long>(n * (n - 1) / 2)); break;
    }
    return make_score(std::move(value), baseline_kind(kind), m);
}

DiversityScore phylo_diversity(const WeightedTree& tree, std::span<const std::string> subset) {
    if (subset.empty()) throw std::invalid_argument("phylogenetic diversity of an empty set");
    const std::size_t nv = tree.vertices().size();
    std::vector<std::size_t> marked(nv, 0);
    for (const auto& label : subset) {
        const auto idx = tree.index_of(label);
        if (!idx) throw InputError("unknown tree vertex '" + label + "'");
        marked[*idx] = 1;
    }
    const std::size_t root = *tree.index_of(subset.front());

    // Iterative DFS; an edge belongs to the spanning subtree iff the side away
    // from the root contains a marked vertex (the root itself is marked).
    std::vector<std::size_t> parent_edge(nv, SIZE_MAX);
    std::vector<std::size_t> order;
    std::vector<bool> seen(nv, false);
    std::vector<std::size_t> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (const auto& adj : tree.neighbours(v)) {
            if (!seen[adj.vertex]) {
                seen[adj.vertex] = true;
                parent_edge[adj.vertex] = adj.edge;
                stack.push_back(adj.vertex);
            }
        }
    }
    std::vector<std::size_t> below(marked);
    Scalar total(0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t v = *it;
        if (v == root) continue;
        const auto& edge = tree.edges()[parent_edge[v]];
        const std::size_t parent = *tree.index_of(edge.u == tree.vertices()[v] ? edge.v : edge.u);
        if (below[v] > 0) total += edge.weight;
        below[parent] += below[v];
    }

    DiversityScore s;
    s.exact = total.exact();
    s.value = std::move(total);
    s.measure = MeasureKind::phylo();
    s.subset.assign(subset.begin(), subset.end());
    return s;
}

// ---------------------------------------------------------------------------
// Suitable functions and the subset recursion

namespace {

using Mask = std::uint32_t;

std::string describe_subset(const DistanceMatrix& m, Mask mask) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (mask & (Mask{1} << i)) {
            if (!first) out += ",";
            out += m.labels()[i];
            first = false;
        }
    }
    return out + "}";
}

Scalar three_point_formula(const Scalar& a, const Scalar& b, const Scalar& c) {
    const Scalar harmonic_part = Scalar(3, 2) / (a.reciprocal() + b.reciprocal() + c.reciprocal());
    return harmonic_part + Scalar(1, 2) * (a + b + c);
}

/// Evaluates f on index subsets of one matrix, sharing per-pair precomputation.
class SubsetFunction {
public:
    SubsetFunction(const DistanceMatrix& m, const SuitableFunction& f) : f_(f), n_(m.size()) {
        zero_neighbours_.assign(n_, 0);
        recip_.resize(n_ * n_);
        log_.assign(n_ * n_, 0.0L);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (i == j) continue;
                if (m(i, j).is_zero()) {
                    zero_neighbours_[i] |= Mask{1} << j;
                } else {
                    recip_[i * n_ + j] = m(i, j).reciprocal();
                    log_[i * n_ + j] = std::log(static_cast<long double>(m(i, j).to_double()));
                }
            }
        }
    }

    Scalar operator()(Mask mask) const {
        for (std::size_t i = 0; i < n_; ++i) {
            if ((mask & (Mask{1} << i)) && (zero_neighbours_[i] & mask)) return Scalar(0);
        }
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n_; ++i) {
            if (mask & (Mask{1} << i)) members.push_back(i);
        }
        const long pairs = static_cast<long>(members.size() * (members.size() - 1) / 2);

        Scalar value(0);
        if (!f_.harmonic_weight().is_zero()) {
            Scalar sum(0);
            for (std::size_t a = 0; a < members.size(); ++a) {
                for (std::size_t b = a + 1; b < members.size(); ++b) sum += recip_[members[a] * n_ + members[b]];
            }
            value += f_.harmonic_weight() * Scalar(pairs) / sum;
        }
        if (!f_.geometric_weight().is_zero()) {
            long double log_sum = 0.0L;
            for (std::size_t a = 0; a < members.size(); ++a) {
                for (std::size_t b = a + 1; b < members.size(); ++b) log_sum += log_[members[a] * n_ + members[b]];
            }
            const long double geo = std::exp(log_sum / static_cast<long double>(pairs));
            value += f_.geometric_weight() * Scalar::from_double(static_cast<double>(geo));
        }
        return value;
    }

private:
    const SuitableFunction& f_;
    std::size_t n_;
    std::vector<Mask> zero_neighbours_;
    std::vector<Scalar> recip_;
    std::vector<long double> log_;
};

struct RecursionResult {
    Scalar value;
    Mask argmax = 0;  // best (n-1)-subset of the full set, when n >= 3
};

/// D(S) = f(S) + max_T D(T) over all subsets, bottom-up. `three` overrides size-3 scores.
template <class ThreeScorer>
RecursionResult subset_recursion(const DistanceMatrix& m, const SubsetFunction& f, ThreeScorer three,
                                 const MeasureLimits& limits, const char* what) {
    const std::size_t n = m.size();
    if (n > limits.max_subset_recursion || n > 30) {
        throw DepthLimitExceeded(what, n, std::min<std::size_t>(limits.max_subset_recursion, 30));
    }
    if (n == 0) throw std::invalid_argument(std::string(what) + " of an empty set");
    if (n == 1) return {Scalar(0), 0};
    if (n == 2) return {m(0, 1), 0};

    const Mask full = (Mask{1} << n) - 1;
    std::vector<Scalar> table(std::size_t{1} << n);
    for (Mask mask = 1; mask <= full; ++mask) {
        const int size = std::popcount(mask);
        if (size == 1) {
            table[mask] = Scalar(0);
        } else if (size == 2) {
            const auto i = static_cast<std::size_t>(std::countr_zero(mask));
            const auto j = static_cast<std::size_t>(std::countr_zero(mask & (mask - 1)));
            table[mask] = m(i, j);
        } else if (size == 3 && three) {
            table[mask] = three(mask);
        } else {
            Scalar best;
            bool have = false;
            for (Mask rest = mask; rest; rest &= rest - 1) {
                const Mask child = mask & ~(rest & (~rest + 1));
                if (!have || table[child] > best) {
                    best = table[child];
                    have = true;
                }
            }
            table[mask] = f(mask) + best;
        }
        if (mask == full) break;
    }

    // Explanation only: lexicographically smallest index list among maximisers.
    // Removing a larger index gives a lexicographically smaller list.
    Mask argmax = 0;
    for (std::size_t i = n; i-- > 0;) {
        const Mask child = full & ~(Mask{1} << i);
        if (argmax == 0 || table[child] > table[argmax]) argmax = child;
    }
    return {table[full], argmax};
}

}  // namespace

Scalar suitable_f(const DistanceMatrix& m, const SuitableFunction& f) {
    if (m.size() < 2) throw std::invalid_argument("suitable function needs at least two points");
    if (m.size() > 30) throw DepthLimitExceeded("suitable_f", m.size(), 30);
    SubsetFunction fn(m, f);
    return fn((Mask{1} << m.size()) - 1);
}

DiversityScore d_f(const DistanceMatrix& m, const SuitableFunction& f, const MeasureLimits& limits) {
    SubsetFunction fn(m, f);
    const auto result = subset_recursion(m, fn, std::function<Scalar(Mask)>{}, limits, "d_f");
    DiversityScore s = make_score(result.value, MeasureKind::d_f(f), m);
    if (result.argmax != 0) s.notes.push_back("max attained by " + describe_subset(m, result.argmax));
    return s;
}

DiversityScore d_three(const DistanceMatrix& m) {
    if (m.size() != 3) throw std::invalid_argument("d_three needs exactly three points");
    if (m(0, 1).sign() <= 0 || m(0, 2).sign() <= 0 || m(1, 2).sign() <= 0) {
        throw std::domain_error("d_three needs positive distances (quotient duplicates first)");
    }
    return make_score(three_point_formula(m(0, 1), m(0, 2), m(1, 2)), MeasureKind::d_three(), m);
}

DiversityScore d_f_hybrid(const DistanceMatrix& input, const SuitableFunction& f, const MeasureLimits& limits) {
    const Quotient q = quotient_duplicates(input);
    const DistanceMatrix& m = q.matrix;
    SubsetFunction fn(m, f);
    std::function<Scalar(Mask)> three = [&m](Mask mask) {
        std::size_t idx[3];
        std::size_t k = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (mask & (Mask{1} << i)) idx[k++] = i;
        }
        return three_point_formula(m(idx[0], idx[1]), m(idx[0], idx[2]), m(idx[1], idx[2]));
    };
    const auto result = subset_recursion(m, fn, three, limits, "d_f_hybrid");
    DiversityScore s = make_score(result.value, MeasureKind::d_f_hybrid(f), input);
    if (m.size() < input.size()) {
        s.notes.push_back("duplicates quotiented: " + std::to_string(input.size()) + " -> " +
                          std::to_string(m.size()) + " points");
    }
    if (result.argmax != 0) s.notes.push_back("max attained by " + describe_subset(m, result.argmax));
    return s;
}

// ---------------------------------------------------------------------------
// Merging measure

namespace {

class MergingEvaluator {
public:
    explicit MergingEvaluator(MergingStats& stats) : stats_(stats) {}

    // composites[i][o] = 0 if original point o is not in composite i, else 1 + depth
    // (weight 2^-depth). Distances are for the composites in this order.
    mpq_class eval(const std::vector<std::string>& composites, const std::vector<mpq_class>& dist) {
        const std::size_t k = composites.size();
        if (k == 1) return 0;
        if (k == 2) return dist[1];

        std::vector<std::string> sorted = composites;
        std::sort(sorted.begin(), sorted.end());
        std::string key;
        for (const auto& c : sorted) key += c;
        if (auto it = memo_.find(key); it != memo_.end()) {
            ++stats_.memo_hits;
            return it->second;
        }
        ++stats_.nodes;

        mpq_class total = 0;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) total += 1 / dist[a * k + b];
        }

        mpq_class value = 0;
        mpq_class weight_sum = 0;
        std::vector<std::string> child(k - 1);
        std::vector<mpq_class> child_dist((k - 1) * (k - 1));
        std::vector<std::size_t> keep;
        keep.reserve(k);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                const mpq_class p = (1 / dist[a * k + b]) / total;
                weight_sum += p;

                keep.clear();
                for (std::size_t i = 0; i < k; ++i) {
                    if (i != a && i != b) keep.push_back(i);
                }
                const std::size_t r = keep.size();  // merged point goes last, index r
                for (std::size_t x = 0; x < r; ++x) {
                    child[x] = composites[keep[x]];
                    for (std::size_t y = 0; y < r; ++y) child_dist[x * (r + 1) + y] = dist[keep[x] * k + keep[y]];
                    mpq_class merged = (dist[keep[x] * k + a] + dist[keep[x] * k + b]) / 2;
                    child_dist[x * (r + 1) + r] = merged;
                    child_dist[r * (r + 1) + x] = std::move(merged);
                }
                child_dist[r * (r + 1) + r] = 0;
                std::string joined(composites[a].size(), '\0');
                for (std::size_t o = 0; o < joined.size(); ++o) {
                    const char depth = composites[a][o] ? composites[a][o] : composites[b][o];
                    joined[o] = depth ? static_cast<char>(depth + 1) : '\0';
                }
                child[r] = std::move(joined);

                value += p * (dist[a * k + b] + eval(child, child_dist));
            }
        }
        if (weight_sum != 1) ++stats_.weight_sum_failures;
        memo_.emplace(std::move(key), value);
        return value;
    }

private:
    MergingStats& stats_;
    std::unordered_map<std::string, mpq_class> memo_;
};

}  // namespace

DiversityScore d_merging(const DistanceMatrix& input, const MeasureLimits& limits, MergingStats* stats) {
    if (input.size() == 0) throw std::invalid_argument("d_merging of an empty set");
    const Quotient q = quotient_duplicates(input);
    const DistanceMatrix& m = q.matrix;
    const std::size_t n = m.size();
    if (n > limits.max_merging) throw DepthLimitExceeded("d_merging", n, limits.max_merging);

    std::vector<std::string> composites(n, std::string(n, '\0'));
    std::vector<mpq_class> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        composites[i][i] = 1;
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = m(i, j).rational();
    }
    MergingStats local;
    MergingEvaluator evaluator(stats ? *stats : local);
    Scalar value(evaluator.eval(composites, dist), m.exact());

    DiversityScore s = make_score(std::move(value), MeasureKind::d_merging(), input);
    if (n < input.size()) {
        s.notes.push_back("duplicates quotiented: " + std::to_string(input.size()) + " -> " + std::to_string(n) +
                          " points");
    }
    return s;
}

std::vector<MergeWeight> merging_weights(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    Scalar total(0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m(i, j).sign() <= 0) throw std::domain_error("merging weights need positive distances");
            total += m(i, j).reciprocal();
        }
    }
    std::vector<MergeWeight> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) out.push_back({i, j, m(i, j).reciprocal() / total});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dispatch and ranking

DiversityScore evaluate(const DistanceMatrix& m, const MeasureKind& kind, const MeasureLimits& limits) {
    switch (kind.id) {
        case MeasureKind::Id::min_dist: return baseline(m, Baseline::min);
        case MeasureKind::Id::max_dist: return baseline(m, Baseline::max);
        case MeasureKind::Id::avg_dist: return baseline(m, Baseline::avg);
        case MeasureKind::Id::total_dist: return baseline(m, Baseline::total);
        case MeasureKind::Id::phylo: throw InputError("phylo needs a tree, not a distance matrix");
        case MeasureKind::Id::d_f: return d_f(m, kind.f, limits);
        case MeasureKind::Id::d_three: return d_three(m);
        case MeasureKind::Id::d_f_hybrid: return d_f_hybrid(m, kind.f, limits);
        case MeasureKind::Id::d_merging: return d_merging(m, limits);
    }
    throw std::logic_error("unhandled measure");
}

DiversityScore score(const DistanceMatrix& m, std::span<const std::string> subset, const MeasureKind& kind,
                     const MeasureLimits& limits) {
    if (kind.needs_tree()) throw InputError("phylo needs a tree, not a distance matrix");
    if (subset.empty()) return evaluate(m, kind, limits);
    const auto idx = m.indices_of(subset);
    std::vector<bool> used(m.size(), false);
    for (std::size_t i : idx) {
        if (used[i]) throw InputError("subset repeats label '" + m.labels()[i] + "'");
        used[i] = true;
    }
    return evaluate(restrict(m, idx), kind, limits);
}

DiversityScore score(const WeightedTree& tree, std::span<const std::string> subset, const MeasureKind& kind,
                     const MeasureLimits& limits) {
    if (kind.needs_tree()) {
        if (subset.empty()) return phylo_diversity(tree, tree.vertices());
        return phylo_diversity(tree, subset);
    }
    return evaluate(tree_metric(tree, subset), kind, limits);
}

std::vector<RankEntry> rank_scores(std::vector<DiversityScore> scores) {
    std::vector<RankEntry> entries;
    for (std::size_t i = 0; i < scores.size(); ++i) entries.push_back({i, 0, false, std::move(scores[i])});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.score.value > b.score.value; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const bool same_as_prev = i > 0 && entries[i].score.value == entries[i - 1].score.value;
        entries[i].rank = same_as_prev ? entries[i - 1].rank : i + 1;
        if (same_as_prev) {
            entries[i].tied = true;
            entries[i - 1].tied = true;
        }
    }
    return entries;
}

std::vector<RankEntry> rank(const DistanceMatrix& m, std::span<const std::vector<std::string>> subsets,
                            const MeasureKind& kind, const MeasureLimits& limits) {
    std::vector<DiversityScore> scores;
    for (const auto& subset : subsets) scores.push_back(score(m, subset, kind, limits));
    return rank_scores(std::move(scores));
}

std::vector<RankEntry> rank(const WeightedTree& tree, std::span<const std::vector<std::string>> subsets,
                            const MeasureKind& kind, const MeasureLimits& limits) {
    std::vector<DiversityScore> scores;
    for (const auto& subset : subsets) scores.push_back(score(tree, subset, kind, limits));
    return rank_scores(std::move(scores));
}

}  // namespace diversity
