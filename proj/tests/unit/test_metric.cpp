#include <random>
#include <stdexcept>

#include "doctest.h"

#include "diversity/errors.hpp"
#include "diversity/io.hpp"
#include "diversity/metric.hpp"
#include "support.hpp"

using namespace diversity;
using testing_support::fixture;

namespace {

DistanceMatrix grid(std::vector<Scalar> entries) {
    const std::size_t n = entries.size() == 9 ? 3 : 4;
    return DistanceMatrix(default_labels(n), std::move(entries));
}

bool has_kind(const ValidationResult& r, ViolationKind kind) {
    for (const auto& v : r.violations)
        if (v.kind == kind) return true;
    return false;
}

}  // namespace

TEST_SUITE("metric") {

TEST_CASE("validate accepts pseudometrics, including zero distances") {
    CHECK(validate(load_distance_csv(fixture("fig2_S.csv"))).ok());
    CHECK(validate(load_distance_csv(fixture("fig4_S.csv"))).ok());
    CHECK(validate(DistanceMatrix::from_upper_triangle({0, 0, 0})).ok());
}

TEST_CASE("validate reports each failure kind with witnesses") {
    const auto tri = validate(DistanceMatrix::from_upper_triangle({1, 3, 1}));
    REQUIRE_FALSE(tri.ok());
    CHECK(has_kind(tri, ViolationKind::triangle));
    CHECK(tri.violations.front().witness.size() == 3);
    CHECK(tri.violations.front().slack == Scalar(1));

    CHECK(has_kind(validate(grid({0, 1, 1, 2, 0, 1, 1, 1, 0})), ViolationKind::asymmetry));
    CHECK(has_kind(validate(grid({0, -1, 1, -1, 0, 1, 1, 1, 0})), ViolationKind::negative));
    CHECK(has_kind(validate(grid({1, 1, 1, 1, 0, 1, 1, 1, 0})), ViolationKind::nonzero_diagonal));
    CHECK_FALSE(is_pseudometric(DistanceMatrix::from_upper_triangle({1, 3, 1})));
}

TEST_CASE("validate agrees with a literal triple loop") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> entry(0, 6);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Scalar> upper;
        for (int k = 0; k < 6; ++k) upper.emplace_back(entry(rng), 2);
        const auto m = DistanceMatrix::from_upper_triangle(default_labels(4), upper);
        bool ok = true;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t k = 0; k < 4; ++k) ok = ok && !(m(i, k) > m(i, j) + m(j, k));
        CHECK(validate(m).ok() == ok);
        CHECK(is_pseudometric(m) == ok);
    }
}

TEST_CASE("structural errors at construction") {
    CHECK_THROWS_AS(DistanceMatrix({"a", "b"}, {0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(DistanceMatrix({"a", "a"}, {0, 1, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(DistanceMatrix::from_upper_triangle({1, 2}), std::invalid_argument);
}

TEST_CASE("scale round trip and restrict commutation") {
    std::mt19937_64 rng(11);
    for (std::size_t i = 0; i < 300; ++i) {
        const auto m = testing_support::random_exact_metric(3 + i % 4, rng, i);
        const Scalar c = testing_support::random_ratio(rng, 1, 9, 7) + Scalar(1, 5);
        CHECK(scale(scale(m, c), c.reciprocal()) == m);
        const std::vector<std::size_t> idx{2, 0};
        CHECK(restrict(scale(m, c), idx) == scale(restrict(m, idx), c));
    }
    CHECK_THROWS(scale(DistanceMatrix::from_upper_triangle({1}), Scalar(0)));
}

TEST_CASE("quotient collapses zero classes and is idempotent") {
    const auto m = load_distance_csv(fixture("fig4_S.csv"));
    const auto q = quotient_duplicates(m);
    CHECK(q.matrix.size() == 3);
    CHECK(q.mapping == std::vector<std::size_t>{0, 0, 1, 2});
    CHECK(quotient_duplicates(q.matrix).matrix == q.matrix);

    std::mt19937_64 rng(3);
    for (std::size_t i = 0; i < 300; ++i) {
        auto base = testing_support::random_exact_metric(3, rng, i);
        base = with_duplicate(base, i % 3, "dup");
        base = with_duplicate(base, 0, "dup0");
        const auto once = quotient_duplicates(base).matrix;
        CHECK(once.size() == 3);
        CHECK(quotient_duplicates(once).matrix == once);
        for (std::size_t a = 0; a < once.size(); ++a)
            for (std::size_t b = 0; b < once.size(); ++b)
                if (a != b) CHECK_FALSE(once(a, b).is_zero());
    }
}

TEST_CASE("merge_pair on the (4,2,3) triangle") {
    const auto m = load_distance_csv(fixture("fig9.csv"));
    CHECK(merge_pair(m, 0, 1)(0, 1) == Scalar(5, 2));
    CHECK(merge_pair(m, 0, 2)(0, 1) == Scalar(7, 2));
    CHECK(merge_pair(m, 1, 2)(0, 1) == Scalar(3));
    CHECK(merge_pair(m, 1, 2).size() == 2);
    CHECK_THROWS(merge_pair(m, 1, 1));
    CHECK_THROWS(merge_pair(m, 0, 3));
}

TEST_CASE("merge_pair output always validates") {
    std::mt19937_64 rng(2024);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < 10000; ++i) {
        const std::size_t n = 3 + i % 4;
        const auto m = testing_support::random_exact_metric(n, rng, i);
        const std::size_t k = rng() % n;
        std::size_t l = rng() % (n - 1);
        if (l >= k) ++l;
        if (!validate(merge_pair(m, k, l)).ok()) FAIL("merge_pair broke validity at instance " << i);
        ++checked;
    }
    CHECK(checked == 10000);
}

TEST_CASE("point clouds") {
    const auto hamming = from_points(load_points(fixture("table1.points")));
    CHECK(hamming(0, 1) == Scalar(2));
    CHECK(hamming(0, 4) == Scalar(2));
    CHECK(hamming(3, 4) == Scalar(4));
    CHECK(hamming.exact());

    PointCloud e{{"a", "b", "c"}, {{0, 0}, {3, 4}, {1, 1}}, PointMetric::euclidean};
    const auto em = from_points(e);
    CHECK(em(0, 1) == Scalar(5));
    CHECK(em(0, 1).exact());
    CHECK_FALSE(em(0, 2).exact());
    CHECK_THROWS_AS(from_points(PointCloud{{"a"}, {{0}, {1}}, PointMetric::hamming}), InputError);
}

TEST_CASE("tree metric and tree validation") {
    const auto tree = load_tree(fixture("fig1.tree"));
    const std::vector<std::string> leaves{"u", "w", "y"};
    const auto m = tree_metric(tree, leaves);
    CHECK(m(0, 1) == Scalar(11));
    CHECK(m(1, 2) == Scalar(8));
    CHECK(validate(tree_metric(tree)).ok());

    using E = WeightedTree::Edge;
    CHECK_THROWS_AS(WeightedTree({E{"a", "b", 1}, E{"b", "c", 1}, E{"c", "a", 1}}), InputError);
    CHECK_THROWS_AS(WeightedTree({E{"a", "b", 1}, E{"c", "d", 1}}), InputError);
    CHECK_THROWS_AS(WeightedTree({E{"a", "b", -1}}), InputError);
}

TEST_CASE("random metrics are valid and reproducible") {
    for (auto ens : {MetricEnsemble::shortest_path_repair, MetricEnsemble::euclidean_sample}) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto a = random_metric(5, ens, seed);
            CHECK(a == random_metric(5, ens, seed));
            if (ens == MetricEnsemble::shortest_path_repair) CHECK(validate(a).ok());
        }
    }
}

}
