#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "diversity/audit.hpp"
#include "diversity/errors.hpp"
#include "diversity/serialize.hpp"
#include "support.hpp"

using namespace diversity;

namespace {

AuditConfig small_config(std::size_t instances = 40) {
    AuditConfig cfg;
    cfg.instances = instances;
    return cfg;
}

const WorkedExample* find_case(const std::vector<WorkedExample>& cases, const std::string& id) {
    for (const auto& c : cases)
        if (c.id == id) return &c;
    return nullptr;
}

}  // namespace

TEST_SUITE("audit") {

TEST_CASE("axiom ids") {
    CHECK(parse_axioms("all").size() == 6);
    const auto some = parse_axioms("1,5a,4");
    REQUIRE(some.size() == 3);
    CHECK(some[1] == Axiom::symmetric_a);
    CHECK(to_string(Axiom::symmetric_b) == "5b");
    CHECK_THROWS_AS(parse_axioms("3"), InputError);
    CHECK(parse_ensemble("shortest-path") == EnsembleChoice::shortest_path);
    CHECK_THROWS(parse_ensemble("gaussian"));
}

TEST_CASE("d_f records the three-vertex counterexample") {
    const auto s = audit_equidistance3(MeasureKind::d_f(), small_config());
    CHECK(s.expectation == Expectation::must_violate);
    REQUIRE(s.violations > 0);
    CHECK(s.satisfied());
    const auto& fixed = s.examples.front();
    CHECK(fixed.score_before == Scalar(51, 22));
    CHECK(fixed.score_after == Scalar(2));
}

TEST_CASE("d_three passes the same comparison") {
    const auto s = audit_equidistance3(MeasureKind::d_three(), small_config(200));
    CHECK(s.violations == 0);
}

TEST_CASE("hybrid records the averaging violation") {
    const auto s = audit_symmetric_a(MeasureKind::d_f_hybrid(), small_config());
    CHECK(s.expectation == Expectation::must_violate);
    CHECK(s.violations > 0);
    CHECK(s.satisfied());
    bool found = false;
    for (const auto& v : s.examples) found = found || (v.score_before == Scalar(97, 30) && v.score_after == Scalar(3));
    CHECK(found);
}

TEST_CASE("d_f passes axioms 1, 2, 4") {
    for (const auto& f : {SuitableFunction::harmonic(), SuitableFunction::geometric_mean()}) {
        for (auto axiom : {Axiom::adding, Axiom::increasing, Axiom::scaling}) {
            const auto s = audit_axiom(MeasureKind::d_f(f), axiom, small_config(300));
            CAPTURE(s.axiom);
            CHECK(s.expectation == Expectation::must_pass);
            CHECK(s.violations == 0);
            CHECK(s.checked > 0);
        }
    }
}

TEST_CASE("merging passes every axiom on a small run") {
    for (auto axiom : all_axioms()) {
        const auto s = audit_axiom(MeasureKind::d_merging(), axiom, small_config(60));
        CAPTURE(s.axiom);
        CHECK(s.violations == 0);
        CHECK(s.satisfied());
    }
}

TEST_CASE("a weak baseline fails axiom 2 and that is only informational") {
    const auto s = audit_axiom2(MeasureKind::min_dist(), small_config(100));
    CHECK(s.expectation == Expectation::informational);
    CHECK(s.satisfied());
}

TEST_CASE("identical configs give identical reports") {
    AuditRequest req{MeasureKind::d_merging()};
    req.fixture_dir = DIVERSITY_FIXTURE_DIR;
    const auto a = to_json(run_audit(req, small_config(30))).dump(2);
    const auto b = to_json(run_audit(req, small_config(30))).dump(2);
    CHECK(a == b);
    auto other = small_config(30);
    other.seed = 2;
    CHECK(to_json(run_audit(req, other)).dump() != a);
}

TEST_CASE("run_audit rejects bad configs") {
    AuditRequest req{MeasureKind::phylo()};
    CHECK_THROWS(run_audit(req, small_config()));
    AuditRequest ok{MeasureKind::d_merging()};
    CHECK_THROWS(run_audit(ok, small_config(0)));
    auto cfg = small_config();
    cfg.n_values = {1};
    CHECK_THROWS(run_audit(ok, cfg));
}

TEST_CASE("continuity probe shrinks and the family tends to 2") {
    const auto m = testing_support::exact(random_metric(4, MetricEnsemble::shortest_path_repair, 5));
    const auto c = probe_continuity(MeasureKind::d_merging(), m, small_config());
    CHECK(c.rows.size() == 4);
    CHECK(c.non_increasing);
    REQUIRE(c.family.size() == 50);
    CHECK(c.family_limit == Scalar(2));
    const Scalar first = (c.family.front().value - Scalar(2)).abs();
    const Scalar last = (c.family.back().value - Scalar(2)).abs();
    CHECK(last < first);
}

TEST_CASE("strong equidistance demo under merging") {
    const auto demo = equidistance_demo(MeasureKind::d_merging());
    CHECK(demo.d_s == Scalar(13, 5));
    CHECK(demo.d_u0 == Scalar(13, 4));
    REQUIRE(demo.minimal_k.has_value());
    CHECK(*demo.minimal_k == 2);
    CHECK(demo.d_uk == Scalar(73, 30));
    CHECK(demo.d_s > demo.d_uk);
    CHECK(demo.padding_preserves);
    CHECK(demo.premises_hold);
    CHECK(demo.contradiction());
    CHECK_FALSE(demo.ledger.empty());
}

TEST_CASE("padding preserves merging scores") {
    for (std::size_t k = 0; k < 5; ++k) {
        const auto u = family_u(k);
        CHECK(d_merging(pad_with_copies(u, 0, 3)).value == d_merging(u).value);
    }
}

TEST_CASE("worked examples all match and do not depend on the seed") {
    const auto cases = reproduce_worked_examples(DIVERSITY_FIXTURE_DIR);
    CHECK(cases.size() > 30);
    for (const auto& c : cases) {
        CAPTURE(c.id);
        CHECK(c.match);
    }
    CHECK(to_json(reproduce_worked_examples(DIVERSITY_FIXTURE_DIR)).dump() == to_json(cases).dump());
}

TEST_CASE("corrupting a fixture turns the cases that use it red") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "diversity-corrupt-fixtures";
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const auto& e : fs::directory_iterator(DIVERSITY_FIXTURE_DIR)) fs::copy(e.path(), dir / e.path().filename());
    {
        std::ofstream out(dir / "fig9.csv");
        out << "s1,s2,s3\n0\n4,0\n2,5/2,0\n";
    }
    fs::remove(dir / "fig5_G2.json");

    const auto cases = reproduce_worked_examples(dir);
    const auto* triangle = find_case(cases, "merging.triangle");
    REQUIRE(triangle != nullptr);
    CHECK_FALSE(triangle->match);
    const auto* g2 = find_case(cases, "symmetry.G2");
    REQUIRE(g2 != nullptr);
    CHECK_FALSE(g2->match);
    const auto* pd = find_case(cases, "hybrid.S");
    REQUIRE(pd != nullptr);
    CHECK(pd->match);
    fs::remove_all(dir);
}

}
