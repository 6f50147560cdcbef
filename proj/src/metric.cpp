#include "diversity/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "diversity/errors.hpp"

namespace diversity {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i + 1));
    return labels;
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, std::vector<Scalar> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
    if (entries_.size() != labels_.size() * labels_.size()) {
        throw std::invalid_argument("distance matrix needs n*n entries for n labels");
    }
    std::unordered_set<std::string> seen;
    for (const auto& label : labels_) {
        if (label.empty()) throw std::invalid_argument("empty point label");
        if (!seen.insert(label).second) throw std::invalid_argument("duplicate point label '" + label + "'");
    }
}

DistanceMatrix DistanceMatrix::from_upper_triangle(std::vector<std::string> labels,
                                                   std::span<const Scalar> upper) {
    const std::size_t n = labels.size();
    if (upper.size() != n * (n - (n > 0 ? 1 : 0)) / 2) {
        throw std::invalid_argument("upper triangle needs n(n-1)/2 entries");
    }
    std::vector<Scalar> entries(n * n, Scalar(0));
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            entries[i * n + j] = upper[next];
            entries[j * n + i] = upper[next];
            ++next;
        }
    }
    return DistanceMatrix(std::move(labels), std::move(entries));
}

DistanceMatrix DistanceMatrix::from_upper_triangle(std::vector<std::string> labels,
                                                   std::initializer_list<Scalar> upper) {
    return from_upper_triangle(std::move(labels), std::span<const Scalar>(upper.begin(), upper.size()));
}

DistanceMatrix DistanceMatrix::from_upper_triangle(std::initializer_list<Scalar> upper) {
    // n(n-1)/2 = k
    const auto k = upper.size();
    std::size_t n = 1;
    while (n * (n - 1) / 2 < k) ++n;
    if (n * (n - 1) / 2 != k) throw std::invalid_argument("entry count is not a triangular number");
    return from_upper_triangle(default_labels(n), upper);
}

std::optional<std::size_t> DistanceMatrix::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) return i;
    }
    return std::nullopt;
}

std::vector<std::size_t> DistanceMatrix::indices_of(std::span<const std::string> labels) const {
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (const auto& label : labels) {
        const auto idx = index_of(label);
        if (!idx) throw InputError("unknown point label '" + label + "'");
        out.push_back(*idx);
    }
    return out;
}

bool DistanceMatrix::exact() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return s.exact(); });
}

DistanceMatrix DistanceMatrix::with_distance(std::size_t i, std::size_t j, const Scalar& value) const {
    if (i >= size() || j >= size() || i == j) throw std::out_of_range("bad index pair");
    DistanceMatrix copy = *this;
    copy.entries_[i * size() + j] = value;
    copy.entries_[j * size() + i] = value;
    return copy;
}

DistanceMatrix DistanceMatrix::with_labels(std::vector<std::string> labels) const {
    return DistanceMatrix(std::move(labels), entries_);
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::asymmetry: return "asymmetry";
        case ViolationKind::negative: return "negative";
        case ViolationKind::nonzero_diagonal: return "nonzero-diagonal";
        case ViolationKind::triangle: return "triangle";
    }
    return "?";
}

ValidationResult validate(const DistanceMatrix& m) {
    ValidationResult result;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!m(i, i).is_zero()) {
            result.violations.push_back({ViolationKind::nonzero_diagonal, {i}, m(i, i).abs()});
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m(i, j) != m(j, i)) {
                result.violations.push_back({ViolationKind::asymmetry, {i, j}, (m(i, j) - m(j, i)).abs()});
            }
            if (m(i, j).sign() < 0 || m(j, i).sign() < 0) {
                result.violations.push_back({ViolationKind::negative, {i, j}, -min(m(i, j), m(j, i))});
            }
        }
    }
    // d(i,k) <= d(i,j) + d(j,k); each unordered pair {i,k} against every other j.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                const Scalar slack = m(i, k) - m(i, j) - m(j, k);
                if (slack.sign() > 0) result.violations.push_back({ViolationKind::triangle, {i, j, k}, slack});
            }
        }
    }
    return result;
}

bool is_pseudometric(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!m(i, i).is_zero()) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m(i, j) != m(j, i) || m(i, j).sign() < 0) return false;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                if (m(i, k) > m(i, j) + m(j, k)) return false;
            }
        }
    }
    return true;
}

namespace {

// sqrt of a non-negative rational when it is itself rational.
std::optional<mpq_class> exact_sqrt(const mpq_class& q) {
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return mpq_class(rn, rd);
}

}  // namespace

DistanceMatrix from_points(const PointCloud& cloud) {
    const std::size_t n = cloud.points.size();
    if (n == 0) throw InputError("empty point cloud");
    if (cloud.labels.size() != n) throw InputError("point cloud needs one label per point");
    const std::size_t dim = cloud.points.front().size();
    for (const auto& p : cloud.points) {
        if (p.size() != dim) throw InputError("point cloud dimension mismatch");
    }
    std::vector<Scalar> entries(n * n, Scalar(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Scalar d;
            if (cloud.metric == PointMetric::hamming) {
                long count = 0;
                for (std::size_t c = 0; c < dim; ++c) count += cloud.points[i][c] != cloud.points[j][c];
                d = Scalar(count);
            } else {
                Scalar squared(0);
                bool exact = true;
                for (std::size_t c = 0; c < dim; ++c) {
                    const Scalar diff = cloud.points[i][c] - cloud.points[j][c];
                    squared += diff * diff;
                    exact = exact && diff.exact();
                }
                if (auto root = exact_sqrt(squared.rational())) {
                    d = Scalar(*root, exact);
                } else {
                    d = Scalar::from_double(std::sqrt(squared.to_double()));
                }
            }
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    return DistanceMatrix(cloud.labels, std::move(entries));
}

DistanceMatrix scale(const DistanceMatrix& m, const Scalar& c) {
    if (c.sign() <= 0) throw std::invalid_argument("scale factor must be positive");
    std::vector<Scalar> entries = m.entries();
    for (auto& e : entries) e *= c;
    return DistanceMatrix(m.labels(), std::move(entries));
}

DistanceMatrix restrict(const DistanceMatrix& m, std::span<const std::size_t> subset) {
    const std::size_t k = subset.size();
    std::vector<bool> used(m.size(), false);
    std::vector<std::string> labels;
    labels.reserve(k);
    for (std::size_t idx : subset) {
        if (idx >= m.size()) throw std::out_of_range("subset index " + std::to_string(idx) + " out of range");
        if (used[idx]) throw std::invalid_argument("duplicate subset index " + std::to_string(idx));
        used[idx] = true;
        labels.push_back(m.labels()[idx]);
    }
    std::vector<Scalar> entries;
    entries.reserve(k * k);
    for (std::size_t a : subset) {
        for (std::size_t b : subset) entries.push_back(m(a, b));
    }
    return DistanceMatrix(std::move(labels), std::move(entries));
}

Quotient quotient_duplicates(const DistanceMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::size_t> representative(n);
    std::iota(representative.begin(), representative.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (representative[i] != i) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (representative[j] == j && m(i, j).is_zero()) representative[j] = i;
        }
    }
    Quotient q;
    q.mapping.assign(n, 0);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        if (representative[i] == i) {
            q.mapping[i] = kept.size();
            kept.push_back(i);
        }
    }
    for (std::size_t i = 0; i < n; ++i) q.mapping[i] = q.mapping[representative[i]];
    q.matrix = restrict(m, kept);
    return q;
}

DistanceMatrix merge_pair(const DistanceMatrix& m, std::size_t k, std::size_t l) {
    const std::size_t n = m.size();
    if (k >= n || l >= n) throw std::out_of_range("merge index out of range");
    if (k == l) throw std::invalid_argument("cannot merge a point with itself");
    if (k > l) std::swap(k, l);

    std::vector<std::size_t> others;  // surviving original indices, merged point at k's slot
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == l) continue;
        others.push_back(i);
        labels.push_back(i == k ? m.labels()[k] + "+" + m.labels()[l] : m.labels()[i]);
    }
    const std::size_t r = others.size();
    const Scalar half(1, 2);
    std::vector<Scalar> entries(r * r, Scalar(0));
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a + 1; b < r; ++b) {
            const std::size_t i = others[a];
            const std::size_t j = others[b];
            Scalar d;
            if (i == k) {
                d = (m(k, j) + m(l, j)) * half;
            } else if (j == k) {
                d = (m(k, i) + m(l, i)) * half;
            } else {
                d = m(i, j);
            }
            entries[a * r + b] = d;
            entries[b * r + a] = d;
        }
    }
    DistanceMatrix merged(std::move(labels), std::move(entries));
    if (is_pseudometric(m) && !is_pseudometric(merged)) {
        throw std::logic_error("merge_pair produced a triangle violation from a valid input");
    }
    return merged;
}

DistanceMatrix with_duplicate(const DistanceMatrix& m, std::size_t of, std::string label) {
    const std::size_t n = m.size();
    if (of >= n) throw std::out_of_range("duplicate source out of range");
    std::vector<std::string> labels = m.labels();
    labels.push_back(std::move(label));
    std::vector<Scalar> entries((n + 1) * (n + 1), Scalar(0));
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            const std::size_t a = i == n ? of : i;
            const std::size_t b = j == n ? of : j;
            entries[i * (n + 1) + j] = (i == j) ? Scalar(0) : m(a, b);
        }
    }
    return DistanceMatrix(std::move(labels), std::move(entries));
}

const char* to_string(MetricEnsemble e) {
    switch (e) {
        case MetricEnsemble::euclidean_sample: return "euclidean-sample";
        case MetricEnsemble::shortest_path_repair: return "shortest-path-repair";
    }
    return "?";
}

DistanceMatrix random_metric(std::size_t n, MetricEnsemble ensemble, std::mt19937_64& rng) {
    if (n == 0) throw std::invalid_argument("random_metric needs n >= 1");
    if (ensemble == MetricEnsemble::shortest_path_repair) {
        std::uniform_int_distribution<long> quarter(1, 16);
        std::vector<Scalar> entries(n * n, Scalar(0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const Scalar d(quarter(rng), 4);
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        // Floyd-Warshall closure
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const Scalar via = entries[i * n + k] + entries[k * n + j];
                    if (via < entries[i * n + j]) entries[i * n + j] = via;
                }
            }
        }
        return DistanceMatrix(default_labels(n), std::move(entries));
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        std::vector<std::array<double, 3>> points(n);
        for (auto& p : points) {
            for (auto& c : p) c = unit(rng);
        }
        std::vector<Scalar> entries(n * n, Scalar(0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double sq = 0.0;
                for (std::size_t c = 0; c < 3; ++c) sq += (points[i][c] - points[j][c]) * (points[i][c] - points[j][c]);
                const Scalar d = Scalar::from_double(std::sqrt(sq));
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        DistanceMatrix m(default_labels(n), std::move(entries));
        // Rounding can break a nearly tight triangle; draw again.
        if (is_pseudometric(m)) return m;
    }
}

DistanceMatrix random_metric(std::size_t n, MetricEnsemble ensemble, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_metric(n, ensemble, rng);
}

WeightedTree::WeightedTree(std::vector<Edge> edges) : edges_(std::move(edges)) {
    auto intern = [this](const std::string& name) {
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (vertices_[i] == name) return i;
        }
        vertices_.push_back(name);
        adjacency_.emplace_back();
        return vertices_.size() - 1;
    };
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& edge = edges_[e];
        if (edge.u == edge.v) throw InputError("tree edge is a loop at '" + edge.u + "'");
        if (edge.weight.sign() < 0) throw InputError("negative tree edge weight on " + edge.u + "-" + edge.v);
        const std::size_t u = intern(edge.u);
        const std::size_t v = intern(edge.v);
        adjacency_[u].push_back({v, e});
        adjacency_[v].push_back({u, e});
    }
    if (vertices_.empty()) throw InputError("tree has no edges");
    if (edges_.size() + 1 != vertices_.size()) throw InputError("edges do not form a tree (cycle or forest)");

    std::vector<bool> seen(vertices_.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (const auto& adj : adjacency_[v]) {
            if (!seen[adj.vertex]) {
                seen[adj.vertex] = true;
                ++reached;
                stack.push_back(adj.vertex);
            }
        }
    }
    if (reached != vertices_.size()) throw InputError("tree is not connected");
}

std::optional<std::size_t> WeightedTree::index_of(std::string_view vertex) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i] == vertex) return i;
    }
    return std::nullopt;
}

bool operator==(const WeightedTree& a, const WeightedTree& b) {
    if (a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
        const auto& x = a.edges_[i];
        const auto& y = b.edges_[i];
        if (x.u != y.u || x.v != y.v || x.weight != y.weight) return false;
    }
    return true;
}

DistanceMatrix tree_metric(const WeightedTree& tree, std::span<const std::string> vertices) {
    std::vector<std::string> labels(vertices.begin(), vertices.end());
    if (labels.empty()) labels = tree.vertices();
    std::vector<std::size_t> ids;
    for (const auto& label : labels) {
        const auto idx = tree.index_of(label);
        if (!idx) throw InputError("unknown tree vertex '" + label + "'");
        ids.push_back(*idx);
    }
    const std::size_t n = labels.size();
    std::vector<Scalar> entries(n * n, Scalar(0));
    for (std::size_t a = 0; a < n; ++a) {
        // single-source distances by DFS
        std::vector<std::optional<Scalar>> dist(tree.vertices().size());
        dist[ids[a]] = Scalar(0);
        std::vector<std::size_t> stack{ids[a]};
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (const auto& adj : tree.neighbours(v)) {
                if (!dist[adj.vertex]) {
                    dist[adj.vertex] = *dist[v] + tree.edges()[adj.edge].weight;
                    stack.push_back(adj.vertex);
                }
            }
        }
        for (std::size_t b = 0; b < n; ++b) entries[a * n + b] = *dist[ids[b]];
    }
    return DistanceMatrix(std::move(labels), std::move(entries));
}

}  // namespace diversity
