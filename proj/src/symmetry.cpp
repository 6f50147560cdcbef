#include "diversity/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "diversity/errors.hpp"

namespace diversity {

PartialGraph::PartialGraph(std::size_t n, std::vector<WeightedEdge> weighted, std::vector<LabeledEdge> labeled)
    : n_(n), weighted_(std::move(weighted)), labeled_(std::move(labeled)), slot_(n * n) {
    auto claim = [this](std::size_t u, std::size_t v) -> Slot& {
        if (u >= n_ || v >= n_) throw std::invalid_argument("partial graph edge index out of range");
        if (u == v) throw std::invalid_argument("partial graph edge is a loop");
        Slot& s = slot_[u * n_ + v];
        if (s.weighted != npos || s.labeled != npos) {
            throw std::invalid_argument("pair (" + std::to_string(u) + "," + std::to_string(v) +
                                        ") appears more than once");
        }
        return s;
    };
    for (std::size_t e = 0; e < weighted_.size(); ++e) {
        const auto& edge = weighted_[e];
        if (edge.weight.sign() < 0) throw std::invalid_argument("negative partial graph weight");
        claim(edge.u, edge.v).weighted = e;
        slot_[edge.v * n_ + edge.u].weighted = e;
    }
    std::set<std::string> labels;
    for (std::size_t e = 0; e < labeled_.size(); ++e) {
        const auto& edge = labeled_[e];
        if (edge.label.empty()) throw std::invalid_argument("empty edge label");
        if (!labels.insert(edge.label).second) throw std::invalid_argument("edge label '" + edge.label + "' repeated");
        claim(edge.u, edge.v).labeled = e;
        slot_[edge.v * n_ + edge.u].labeled = e;
    }
    if (weighted_.size() + labeled_.size() != n * (n - (n > 0 ? 1 : 0)) / 2) {
        throw std::invalid_argument("partial graph must cover all n(n-1)/2 vertex pairs");
    }
}

PartialGraph PartialGraph::from_matrix(const DistanceMatrix& source, std::vector<LabeledEdge> labeled) {
    const std::size_t n = source.size();
    std::vector<bool> is_labeled(n * n, false);
    for (const auto& e : labeled) {
        if (e.u >= n || e.v >= n) throw std::invalid_argument("labelled edge index out of range");
        is_labeled[e.u * n + e.v] = is_labeled[e.v * n + e.u] = true;
    }
    std::vector<WeightedEdge> weighted;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!is_labeled[i * n + j]) weighted.push_back({i, j, source(i, j)});
        }
    }
    return PartialGraph(n, std::move(weighted), std::move(labeled));
}

const Scalar* PartialGraph::weight(std::size_t u, std::size_t v) const {
    const std::size_t w = slot_[u * n_ + v].weighted;
    return w == npos ? nullptr : &weighted_[w].weight;
}

std::size_t PartialGraph::find_label(const std::string& label) const {
    for (std::size_t e = 0; e < labeled_.size(); ++e) {
        if (labeled_[e].label == label) return e;
    }
    return npos;
}

bool PartialGraph::exact() const {
    return std::all_of(weighted_.begin(), weighted_.end(), [](const WeightedEdge& e) { return e.weight.exact(); });
}

bool operator==(const PartialGraph& a, const PartialGraph& b) {
    if (a.n_ != b.n_ || a.weighted_.size() != b.weighted_.size() || a.labeled_.size() != b.labeled_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.weighted_.size(); ++i) {
        const auto& x = a.weighted_[i];
        const auto& y = b.weighted_[i];
        if (x.u != y.u || x.v != y.v || x.weight != y.weight) return false;
    }
    for (std::size_t i = 0; i < a.labeled_.size(); ++i) {
        const auto& x = a.labeled_[i];
        const auto& y = b.labeled_[i];
        if (x.u != y.u || x.v != y.v || x.label != y.label) return false;
    }
    return true;
}

std::size_t EdgeOrbitPartition::orbit_of(std::size_t labeled_edge) const {
    for (std::size_t o = 0; o < orbits.size(); ++o) {
        if (std::find(orbits[o].begin(), orbits[o].end(), labeled_edge) != orbits[o].end()) return o;
    }
    return PartialGraph::npos;
}

namespace {

class AutomorphismSearch {
public:
    AutomorphismSearch(const PartialGraph& g, const SymmetryOptions& options)
        : g_(g), n_(g.size()), tolerance_(g.exact() ? 0.0 : options.tolerance) {
        // Vertex invariant: labelled degree plus, for exact graphs, the sorted
        // incident weights. Only vertices with equal invariants can be swapped.
        signature_.resize(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            std::vector<Scalar> weights;
            std::size_t labeled = 0;
            for (std::size_t u = 0; u < n_; ++u) {
                if (u == v) continue;
                if (const Scalar* w = g.weight(u, v)) {
                    weights.push_back(*w);
                } else {
                    ++labeled;
                }
            }
            std::sort(weights.begin(), weights.end());
            signature_[v].labeled = labeled;
            if (tolerance_ == 0.0) signature_[v].weights = std::move(weights);
        }
    }

    std::vector<Permutation> run() {
        image_.assign(n_, PartialGraph::npos);
        used_.assign(n_, false);
        extend(0);
        return std::move(found_);
    }

private:
    struct Signature {
        std::size_t labeled = 0;
        std::vector<Scalar> weights;
        bool operator==(const Signature&) const = default;
    };

    bool same_edge(std::size_t u, std::size_t v, std::size_t pu, std::size_t pv) const {
        const Scalar* a = g_.weight(u, v);
        const Scalar* b = g_.weight(pu, pv);
        if (!a || !b) return !a && !b;
        return approx_equal(*a, *b, tolerance_);
    }

    void extend(std::size_t v) {
        if (v == n_) {
            found_.push_back(image_);
            return;
        }
        for (std::size_t candidate = 0; candidate < n_; ++candidate) {
            if (used_[candidate] || !(signature_[v] == signature_[candidate])) continue;
            bool ok = true;
            for (std::size_t u = 0; u < v && ok; ++u) ok = same_edge(u, v, image_[u], candidate);
            if (!ok) continue;
            image_[v] = candidate;
            used_[candidate] = true;
            extend(v + 1);
            used_[candidate] = false;
        }
        image_[v] = PartialGraph::npos;
    }

    const PartialGraph& g_;
    std::size_t n_;
    double tolerance_;
    std::vector<Signature> signature_;
    Permutation image_;
    std::vector<bool> used_;
    std::vector<Permutation> found_;
};

}  // namespace

std::vector<Permutation> automorphisms(const PartialGraph& g, const SymmetryOptions& options) {
    if (g.size() > options.max_n) throw DepthLimitExceeded("automorphism search", g.size(), options.max_n);
    return AutomorphismSearch(g, options).run();
}

EdgeOrbitPartition edge_orbits(const PartialGraph& g, const SymmetryOptions& options) {
    const auto group = automorphisms(g, options);
    const auto& edges = g.labeled_edges();

    std::vector<std::size_t> parent(edges.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& perm : group) {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const std::size_t image = g.labeled_index(perm[edges[e].u], perm[edges[e].v]);
            const std::size_t a = find(e);
            const std::size_t b = find(image);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }

    EdgeOrbitPartition partition;
    partition.group_size = group.size();
    std::vector<std::size_t> orbit_index(edges.size(), PartialGraph::npos);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::size_t root = find(e);
        if (orbit_index[root] == PartialGraph::npos) {
            orbit_index[root] = partition.orbits.size();
            partition.orbits.emplace_back();
        }
        partition.orbits[orbit_index[root]].push_back(e);
    }
    return partition;
}

bool symmetric(const PartialGraph& g, std::size_t e1, std::size_t e2, const SymmetryOptions& options) {
    const auto& edges = g.labeled_edges();
    if (e1 >= edges.size() || e2 >= edges.size()) throw std::out_of_range("labelled edge index out of range");
    for (const auto& perm : automorphisms(g, options)) {
        if (g.labeled_index(perm[edges[e1].u], perm[edges[e1].v]) == e2) return true;
    }
    return false;
}

namespace {

void check_agreement(const DistanceMatrix& source, const PartialGraph& g, double tolerance) {
    if (source.size() != g.size()) throw InputError("partial graph and source matrix differ in size");
    for (const auto& e : g.weighted_edges()) {
        if (!approx_equal(source(e.u, e.v), e.weight, source.exact() && g.exact() ? 0.0 : tolerance)) {
            throw InputError("partial graph weight on (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") is " + e.weight.str() + " but the source has " + source(e.u, e.v).str());
        }
    }
}

}  // namespace

DistanceMatrix average_orbits(const DistanceMatrix& source, const PartialGraph& g, const SymmetryOptions& options) {
    check_agreement(source, g, options.tolerance);
    const auto partition = edge_orbits(g, options);
    const auto& edges = g.labeled_edges();

    DistanceMatrix result = source;
    for (const auto& orbit : partition.orbits) {
        Scalar total(0);
        for (std::size_t e : orbit) total += source(edges[e].u, edges[e].v);
        const Scalar mean = total / Scalar(static_cast<long>(orbit.size()));
        for (std::size_t e : orbit) result = result.with_distance(edges[e].u, edges[e].v, mean);
    }
    if (auto check = validate(result); !check.ok()) {
        throw TransformViolation("orbit averaging produced a triangle violation", source, result, std::move(check));
    }
    return result;
}

PairMove PairMove::toward_mean(const DistanceMatrix& source, const PartialGraph& g, Scalar new_w1) {
    const auto& edges = g.labeled_edges();
    if (edges.size() != 2) throw std::invalid_argument("pair move needs exactly two labelled edges");
    const Scalar lambda = source(edges[0].u, edges[0].v) + source(edges[1].u, edges[1].v);
    return {edges[0].label, edges[1].label, lambda, std::move(new_w1)};
}

DistanceMatrix apply_pair_move(const DistanceMatrix& source, const PairMove& move, const PartialGraph& g,
                               const SymmetryOptions& options) {
    check_agreement(source, g, options.tolerance);
    if (g.labeled_edges().size() != 2) throw std::invalid_argument("pair move needs exactly two labelled edges");
    const std::size_t i1 = g.find_label(move.e1);
    const std::size_t i2 = g.find_label(move.e2);
    if (i1 == PartialGraph::npos || i2 == PartialGraph::npos || i1 == i2) {
        throw std::invalid_argument("pair move labels do not name the graph's two labelled edges");
    }
    const auto& e1 = g.labeled_edges()[i1];
    const auto& e2 = g.labeled_edges()[i2];
    const Scalar& w1 = source(e1.u, e1.v);
    const Scalar& w2 = source(e2.u, e2.v);
    if (w1 + w2 != move.lambda) throw std::invalid_argument("lambda differs from the source weight sum");

    const Scalar half = move.lambda / Scalar(2);
    if (!((move.new_w1 - half).abs() < (w1 - half).abs())) {
        throw std::invalid_argument("pair move must bring the weights strictly closer to lambda/2");
    }
    if (!symmetric(g, i1, i2, options)) {
        throw std::invalid_argument("edges " + move.e1 + " and " + move.e2 + " are not symmetric");
    }
    DistanceMatrix result =
        source.with_distance(e1.u, e1.v, move.new_w1).with_distance(e2.u, e2.v, move.lambda - move.new_w1);
    if (auto check = validate(result); !check.ok()) {
        throw TransformViolation("pair move produced a triangle violation", source, result, std::move(check));
    }
    return result;
}

}  // namespace diversity
