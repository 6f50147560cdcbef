#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "diversity/errors.hpp"
#include "diversity/io.hpp"
#include "diversity/measures.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace diversity;
using testing_support::fixture;

namespace {

DistanceMatrix ones(std::size_t n) {
    std::vector<Scalar> upper(n * (n - 1) / 2, Scalar(1));
    return DistanceMatrix::from_upper_triangle(default_labels(n), upper);
}

const std::vector<MeasureKind>& matrix_measures() {
    static const std::vector<MeasureKind> all{
        MeasureKind::min_dist(),   MeasureKind::max_dist(), MeasureKind::avg_dist(),
        MeasureKind::total_dist(), MeasureKind::d_f(),      MeasureKind::d_f_hybrid(),
        MeasureKind::d_merging(),
    };
    return all;
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("measure names parse back") {
    for (const char* name : {"min-dist", "max-dist", "avg-dist", "total-dist", "phylo", "d-f-eq2", "d-f-geo",
                             "d-three", "d-f-hybrid", "d-f-hybrid-geo", "d-merging"}) {
        CHECK(MeasureKind::parse(name).name() == name);
    }
    const auto lin = MeasureKind::parse("d-f-lin:1,2");
    CHECK(lin.f.geometric_weight() == Scalar(1));
    CHECK(lin.f.harmonic_weight() == Scalar(2));
    CHECK(MeasureKind::parse(lin.name()) == lin);
    CHECK_THROWS_AS(MeasureKind::parse("d-f-lin:-1,0"), InputError);
    CHECK_THROWS_AS(MeasureKind::parse("nope"), InputError);
}

TEST_CASE("baselines") {
    const auto m = load_distance_csv(fixture("fig9.csv"));
    CHECK(baseline(m, Baseline::min).value == Scalar(2));
    CHECK(baseline(m, Baseline::max).value == Scalar(4));
    CHECK(baseline(m, Baseline::avg).value == Scalar(3));
    CHECK(baseline(m, Baseline::total).value == Scalar(9));
}

TEST_CASE("phylogenetic diversity on the five-leaf tree") {
    const auto tree = load_tree(fixture("fig1.tree"));
    auto pd = [&](std::vector<std::string> s) { return phylo_diversity(tree, s).value; };
    CHECK(pd({"u", "v", "w"}) == Scalar(14));
    CHECK(pd({"u", "v", "x"}) == Scalar(22));
    CHECK(pd({"u", "x", "y"}) == Scalar(20));
    CHECK(pd({"u", "w", "y"}) == Scalar(19));
    CHECK(pd({"u", "y"}) == Scalar(19));
    CHECK(pd({"u"}) == Scalar(0));
    CHECK_THROWS_AS(pd({"u", "nope"}), InputError);
}

TEST_CASE("phylogenetic diversity matches the path-union oracle on every subset") {
    const auto tree = load_tree(fixture("fig1.tree"));
    std::vector<oracle::TreeEdge> edges;
    for (const auto& e : tree.edges()) edges.push_back({e.u, e.v, e.weight.rational()});
    const auto& vs = tree.vertices();
    for (std::size_t mask = 1; mask < (std::size_t{1} << vs.size()); ++mask) {
        std::vector<std::string> subset;
        for (std::size_t i = 0; i < vs.size(); ++i)
            if (mask >> i & 1) subset.push_back(vs[i]);
        CHECK(phylo_diversity(tree, subset).value.rational() == oracle::phylo(edges, subset));
    }
}

TEST_CASE("d_f base cases and the all-ones family") {
    for (std::size_t n = 2; n <= 8; ++n) CHECK(d_f(ones(n), SuitableFunction::harmonic()).value == Scalar(n - 1));
    CHECK(d_f(ones(1), SuitableFunction::harmonic()).value == Scalar(0));
    const auto pair = DistanceMatrix::from_upper_triangle({Scalar(7, 3)});
    for (const auto& kind : matrix_measures()) CHECK(evaluate(pair, kind).value == Scalar(7, 3));
    for (const auto& kind : matrix_measures()) CHECK(evaluate(ones(1), kind).value == Scalar(0));
}

TEST_CASE("d_f harmonic on the three-vertex counterexample") {
    const auto t = DistanceMatrix::from_upper_triangle({Scalar(1, 2), Scalar(3, 2), 1});
    CHECK(d_f(t, SuitableFunction::harmonic()).value == Scalar(51, 22));
    CHECK(d_f(ones(3), SuitableFunction::harmonic()).value == Scalar(2));
    CHECK(Scalar(51, 22) > Scalar(2));
}

TEST_CASE("d_f harmonic matches the brute-force oracle") {
    std::mt19937_64 rng(5);
    for (std::size_t i = 0; i < 300; ++i) {
        const auto m = testing_support::random_exact_metric(2 + i % 5, rng, i);
        CHECK(d_f(m, SuitableFunction::harmonic()).value.rational() == oracle::d_f_harmonic(oracle::to_q(m)));
    }
}

TEST_CASE("geometric mean is flagged inexact and close to the closed form") {
    const auto t = DistanceMatrix::from_upper_triangle({4, 6, 9});
    const auto s = d_f(t, SuitableFunction::geometric_mean());
    CHECK_FALSE(s.exact);
    CHECK_FALSE(s.value.exact());
    // geometric mean 6, best pair 9
    CHECK(std::abs(s.value.to_double() - 15.0) < 1e-12);
    const auto lin = d_f(t, SuitableFunction::linear_combination(1, 1));
    CHECK(std::abs(lin.value.to_double() - (6.0 + 108.0 / 19.0 + 9.0)) < 1e-12);
}

TEST_CASE("suitable functions vanish on zero distances") {
    const auto m = load_distance_csv(fixture("fig4_S.csv"));
    CHECK(suitable_f(m, SuitableFunction::harmonic()).is_zero());
    CHECK(suitable_f(m, SuitableFunction::geometric_mean()).is_zero());
}

TEST_CASE("d_three") {
    CHECK(d_three(ones(3)).value == Scalar(2));
    const auto t = DistanceMatrix::from_upper_triangle({Scalar(1, 2), Scalar(3, 2), 1});
    CHECK(d_three(t).value == Scalar(21, 11));
    CHECK(d_three(t).value < Scalar(2));
    CHECK_THROWS(d_three(ones(4)));
    CHECK_THROWS(d_three(DistanceMatrix::from_upper_triangle({0, 1, 1})));
}

TEST_CASE("hybrid on the four-point example") {
    const auto s = load_distance_csv(fixture("fig2_S.csv"));
    const auto sp = load_distance_csv(fixture("fig2_S_prime.csv"));
    CHECK(d_f_hybrid(s).value == Scalar(97, 30));
    CHECK(d_f_hybrid(sp).value == Scalar(3));
    const auto ranked = rank_scores({d_f_hybrid(sp), d_f_hybrid(s)});
    CHECK(ranked[0].input_index == 1);
    CHECK(ranked[0].rank == 1);
    CHECK_FALSE(ranked[0].tied);
}

TEST_CASE("merging on the (4,2,3) triangle") {
    const auto m = load_distance_csv(fixture("fig9.csv"));
    const auto w = merging_weights(m);
    REQUIRE(w.size() == 3);
    CHECK(w[0].p == Scalar(3, 13));  // d = 4
    CHECK(w[1].p == Scalar(6, 13));  // d = 2
    CHECK(w[2].p == Scalar(4, 13));  // d = 3
    CHECK(d_merging(m).value == Scalar(153, 26));
}

TEST_CASE("merging on the four-point example") {
    const auto s = load_distance_csv(fixture("fig2_S.csv"));
    const auto sp = load_distance_csv(fixture("fig2_S_prime.csv"));
    MergingStats stats;
    const auto ds = d_merging(s, {}, &stats);
    CHECK(ds.value == Scalar(2990633, 1053740));
    CHECK(std::abs(ds.value.to_double() - 2.838) < 5e-4);
    CHECK(std::abs(ds.value.to_double() - oracle::merging_double(oracle::to_d(s))) < 1e-9);
    CHECK(stats.weight_sum_failures == 0);
    CHECK(d_merging(sp).value == Scalar(3));
    CHECK(d_merging(sp).value > ds.value);
}

TEST_CASE("memoized merging equals the plain recursion") {
    std::mt19937_64 rng(99);
    for (std::size_t i = 0; i < 200; ++i) {
        const auto m = testing_support::random_exact_metric(2 + i % 4, rng, i);
        MergingStats stats;
        const auto got = d_merging(m, {}, &stats);
        CHECK(got.value.rational() == oracle::merging_exact(oracle::to_q(m)));
        CHECK(stats.weight_sum_failures == 0);
    }
}

TEST_CASE("merging equals d_three on random rational triangles") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const auto t = testing_support::random_rational_triangle(rng);
        const Scalar merging = d_merging(t).value;
        CHECK(merging == d_three(t).value);
        CHECK(merging.rational() == oracle::d_three(t(0, 1).rational(), t(0, 2).rational(), t(1, 2).rational()));
    }
}

TEST_CASE("every measure is invariant under relabelling") {
    std::mt19937_64 rng(8);
    for (std::size_t i = 0; i < 200; ++i) {
        const auto m = testing_support::random_exact_metric(3 + i % 3, rng, i);
        const auto p = testing_support::random_permutation(m.size(), rng);
        const auto pm = testing_support::permute(m, p);
        for (const auto& kind : matrix_measures()) CHECK(evaluate(pm, kind).value == evaluate(m, kind).value);
        if (m.size() == 3) CHECK(d_three(pm).value == d_three(m).value);
    }
}

TEST_CASE("scaling equivariance") {
    std::mt19937_64 rng(12);
    for (std::size_t i = 0; i < 200; ++i) {
        const auto m = testing_support::random_exact_metric(3 + i % 3, rng, i);
        const Scalar c = testing_support::random_ratio(rng, 1, 5, 9) + Scalar(1, 3);
        const auto cm = scale(m, c);
        CHECK(d_f(cm, SuitableFunction::harmonic()).value == c * d_f(m, SuitableFunction::harmonic()).value);
        CHECK(d_f_hybrid(cm).value == c * d_f_hybrid(m).value);
        CHECK(d_merging(cm).value == c * d_merging(m).value);
        if (m.size() == 3) CHECK(d_three(cm).value == c * d_three(m).value);
    }
}

TEST_CASE("adding a duplicate point changes nothing") {
    std::mt19937_64 rng(21);
    for (std::size_t i = 0; i < 1000; ++i) {
        const auto m = testing_support::random_exact_metric(2 + i % 3, rng, i);
        const auto dup = with_duplicate(m, rng() % m.size(), "copy");
        CHECK(d_merging(dup).value == d_merging(m).value);
        CHECK(d_f(dup, SuitableFunction::harmonic()).value == d_f(m, SuitableFunction::harmonic()).value);
    }
}

TEST_CASE("d_f does not decrease when one distance grows") {
    std::mt19937_64 rng(34);
    std::size_t strict_checked = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
        const auto m = testing_support::random_exact_metric(3 + i % 3, rng, i);
        const std::size_t a = rng() % m.size();
        std::size_t b = rng() % (m.size() - 1);
        if (b >= a) ++b;
        const auto grown = m.with_distance(a, b, m(a, b) + testing_support::random_ratio(rng, 0, 1, 16));
        if (!validate(grown).ok() || grown == m) continue;
        const auto before = d_f(m, SuitableFunction::harmonic()).value;
        const auto after = d_f(grown, SuitableFunction::harmonic()).value;
        CHECK(after > before);
        ++strict_checked;
    }
    CHECK(strict_checked > 100);
}

TEST_CASE("size bounds") {
    CHECK_THROWS_AS(d_merging(ones(9)), DepthLimitExceeded);
    MeasureLimits tight;
    tight.max_subset_recursion = 4;
    CHECK_THROWS_AS(d_f(ones(5), SuitableFunction::harmonic(), tight), DepthLimitExceeded);
    CHECK(d_merging(ones(8)).value > Scalar(0));
}

TEST_CASE("score and rank by label") {
    const auto tree = load_tree(fixture("fig1.tree"));
    const std::vector<std::vector<std::string>> subsets{{"u", "w", "y"}, {"u", "x", "y"}, {"u", "w", "y"}};
    const auto r = rank(tree, subsets, MeasureKind::phylo());
    CHECK(r[0].score.value == Scalar(20));
    CHECK(r[0].rank == 1);
    CHECK(r[1].rank == 2);
    CHECK(r[1].tied);
    CHECK(r[2].rank == 2);
    CHECK(r[2].tied);

    const auto m = load_distance_csv(fixture("fig9.csv"));
    const std::vector<std::string> one{"s1"};
    CHECK(score(m, one, MeasureKind::d_merging()).value == Scalar(0));
    const std::vector<std::string> repeated{"s1", "s1"};
    CHECK_THROWS_AS(score(m, repeated, MeasureKind::d_merging()), InputError);
    CHECK_THROWS_AS(evaluate(m, MeasureKind::phylo()), InputError);
}

}
