#include "doctest.h"

#include "diversity/io.hpp"
#include "diversity/serialize.hpp"
#include "support.hpp"

using namespace diversity;

TEST_SUITE("serialize") {

TEST_CASE("decimal strings round half away from zero") {
    CHECK(decimal_string(Scalar(1, 3), 4) == "0.3333");
    CHECK(decimal_string(Scalar(2, 3), 4) == "0.6667");
    CHECK(decimal_string(Scalar(-2, 3), 4) == "-0.6667");
    CHECK(decimal_string(Scalar(1, 8), 2) == "0.13");
    CHECK(decimal_string(Scalar(-1, 8), 2) == "-0.13");
    CHECK(decimal_string(Scalar(7), 0) == "7");
    CHECK(decimal_string(Scalar(-1, 1000), 2) == "0.00");
    CHECK(decimal_string(Scalar(2990633, 1053740), 3) == "2.838");
}

TEST_CASE("scalars keep exact strings") {
    const auto j = to_json(Scalar(153, 26), true);
    CHECK(j["num"] == "153");
    CHECK(j["den"] == "26");
    CHECK(j["decimal"] == "5.8846153846");
    CHECK_FALSE(to_json(Scalar(3)).contains("decimal"));
}

TEST_CASE("scores and ranks") {
    const auto m = load_distance_csv(testing_support::fixture("fig9.csv"));
    const auto s = d_merging(m);
    const auto j = to_json(s);
    CHECK(j["measure"] == "d-merging");
    CHECK(j["value"]["num"] == "153");
    CHECK(j["exact"] == true);
    CHECK(to_text(s) == "d-merging {s1,s2,s3} = 153/26\n");
    CHECK(to_text(s, true) == "d-merging {s1,s2,s3} = 153/26 (5.8846153846)\n");
}

TEST_CASE("audit report schema") {
    AuditConfig cfg;
    cfg.instances = 5;
    AuditRequest req{MeasureKind::d_merging(), {Axiom::adding}, false, std::nullopt};
    const auto j = to_json(run_audit(req, cfg));
    CHECK(j["schema"] == report_schema);
    CHECK(j["ok"] == true);
    CHECK(j["continuity"].is_null());
    CHECK(j["sections"].size() == 1);
    CHECK(j["sections"][0]["axiom"] == "1");
}

}
