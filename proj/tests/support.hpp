#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "diversity/metric.hpp"

namespace testing_support {

using diversity::DistanceMatrix;
using diversity::Scalar;

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(DIVERSITY_FIXTURE_DIR) / name;
}

inline DistanceMatrix exact(const DistanceMatrix& m) {
    std::vector<Scalar> entries;
    for (const auto& e : m.entries()) entries.emplace_back(e.rational());
    return DistanceMatrix(m.labels(), std::move(entries));
}

// Alternates the two ensembles; Euclidean draws taken at their exact binary value.
inline DistanceMatrix random_exact_metric(std::size_t n, std::mt19937_64& rng, std::size_t i) {
    const auto ensemble = i % 2 == 0 ? diversity::MetricEnsemble::shortest_path_repair
                                     : diversity::MetricEnsemble::euclidean_sample;
    return exact(diversity::random_metric(n, ensemble, rng));
}

inline Scalar random_ratio(std::mt19937_64& rng, long lo, long hi, long max_den) {
    std::uniform_int_distribution<long> den(1, max_den);
    const long q = den(rng);
    std::uniform_int_distribution<long> num(lo * q, hi * q);
    return Scalar(num(rng), q);
}

// Positive sides with arbitrary small denominators, triangle inequality enforced.
inline DistanceMatrix random_rational_triangle(std::mt19937_64& rng) {
    for (;;) {
        Scalar a = random_ratio(rng, 0, 6, 12);
        Scalar b = random_ratio(rng, 0, 6, 12);
        Scalar c = random_ratio(rng, 0, 12, 12);
        if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
        if (c > a + b || a > b + c || b > a + c) continue;
        return DistanceMatrix::from_upper_triangle({"s1", "s2", "s3"}, {a, b, c});
    }
}

inline std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

// Point i of the result is point p[i] of m; labels follow their points.
inline DistanceMatrix permute(const DistanceMatrix& m, const std::vector<std::size_t>& p) {
    const std::size_t n = m.size();
    std::vector<std::string> labels(n);
    std::vector<Scalar> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = m.labels()[p[i]];
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = m(p[i], p[j]);
    }
    return DistanceMatrix(std::move(labels), std::move(entries));
}

}  // namespace testing_support
