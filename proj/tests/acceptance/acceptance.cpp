// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diversity/audit.hpp"
#include "diversity/io.hpp"
#include "diversity/measures.hpp"
#include "diversity/serialize.hpp"
#include "diversity/symmetry.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace diversity;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

fs::path fixtures;

DistanceMatrix csv(const std::string& name) { return load_distance_csv(fixtures / name); }

Outcome ac1() {
    Outcome o;
    const auto tree = load_tree(fixtures / "fig1.tree");
    const std::vector<std::pair<std::vector<std::string>, long>> cases{
        {{"u", "v", "w"}, 14}, {{"u", "v", "x"}, 22}, {{"u", "x", "y"}, 20}, {{"u", "w", "y"}, 19}, {{"u", "y"}, 19}};
    double worst_ms = 0;
    for (const auto& [subset, expected] : cases) {
        const auto t0 = Clock::now();
        const auto s = phylo_diversity(tree, subset);
        const double ms = seconds_since(t0) * 1e3;
        worst_ms = std::max(worst_ms, ms);
        o.require(s.value == Scalar(expected), "PD of " + std::to_string(subset.size()) + "-set gave " + s.value.str());
        o.require(ms < 1.0, "PD took " + std::to_string(ms) + " ms");
    }
    o.detail = "14,22,20,19,19 exact; slowest " + std::to_string(worst_ms) + " ms";
    return o;
}

Outcome ac2() {
    Outcome o;
    const auto unit = DistanceMatrix::from_upper_triangle({1, 1, 1});
    o.require(d_three(unit).value == Scalar(2), "d_three(unit) != 2");
    const auto t = DistanceMatrix::from_upper_triangle({Scalar(1, 2), Scalar(3, 2), 1});
    const Scalar v = d_f(t, SuitableFunction::harmonic()).value;
    o.require(v == Scalar(51, 22), "d_f(1,1/2,3/2) = " + v.str());
    o.require(v > Scalar(2), "51/22 > 2 failed");

    AuditConfig cfg;
    const auto s = audit_equidistance3(MeasureKind::d_f(), cfg);
    bool found = false;
    for (const auto& e : s.examples) found = found || (e.score_before == Scalar(51, 22) && e.score_after == Scalar(2));
    o.require(found, "audit_equidistance3 did not record 51/22 -> 2");
    o.require(s.satisfied(), "equidistance section for d_f not satisfied");
    o.detail = "unit triangle 2, d_f 51/22 > 2, audit recorded " + std::to_string(s.violations) + " violations";
    return o;
}

Outcome ac3() {
    Outcome o;
    for (std::size_t n = 2; n <= 8; ++n) {
        const std::vector<Scalar> upper(n * (n - 1) / 2, Scalar(1));
        const auto m = DistanceMatrix::from_upper_triangle(default_labels(n), upper);
        const Scalar v = d_f(m, SuitableFunction::harmonic()).value;
        o.require(v == Scalar(n - 1), "n=" + std::to_string(n) + " gave " + v.str());
    }
    o.detail = "all-ones n=2..8 gives n-1";
    return o;
}

Outcome ac4() {
    Outcome o;
    const auto s = d_f_hybrid(csv("fig2_S.csv"));
    const auto sp = d_f_hybrid(csv("fig2_S_prime.csv"));
    o.require(s.value == Scalar(97, 30), "hybrid(S) = " + s.value.str());
    o.require(sp.value == Scalar(3), "hybrid(S') = " + sp.value.str());
    const auto ranked = rank_scores({sp, s});
    o.require(ranked.front().input_index == 1 && !ranked.front().tied, "S not ranked strictly above S'");
    o.detail = "S 97/30 ranked above S' 3";
    return o;
}

Outcome ac5() {
    Outcome o;
    const auto tri = csv("fig9.csv");
    const auto w = merging_weights(tri);
    o.require(w.size() == 3 && w[0].p == Scalar(3, 13) && w[1].p == Scalar(6, 13) && w[2].p == Scalar(4, 13),
              "weights are not (3/13, 6/13, 4/13)");
    o.require(d_merging(tri).value == Scalar(153, 26), "triangle value != 153/26");
    o.require(merge_pair(tri, 0, 1)(0, 1) == Scalar(5, 2), "merge s1,s2 -> 5/2");
    o.require(merge_pair(tri, 0, 2)(0, 1) == Scalar(7, 2), "merge s1,s3 -> 7/2");
    o.require(merge_pair(tri, 1, 2)(0, 1) == Scalar(3), "merge s2,s3 -> 3");

    const auto s = csv("fig2_S.csv");
    const auto sp = csv("fig2_S_prime.csv");
    const Scalar ds = d_merging(s).value;
    const double oracle_value = oracle::merging_double(oracle::to_d(s));
    o.require(std::abs(ds.to_double() - 2.838) < 5e-4, "|D(S) - 2.838| too large");
    o.require(std::abs(ds.to_double() - oracle_value) < 1e-9, "floating oracle disagrees");
    const Scalar dsp = d_merging(sp).value;
    o.require(dsp == Scalar(3), "D(S') = " + dsp.str());
    o.require(dsp > ds, "D(S') <= D(S)");
    std::ostringstream os;
    os.precision(12);
    os << "153/26; D(S) = " << ds.str() << " = " << decimal_string(ds, 10) << ", oracle " << oracle_value
       << "; D(S') = 3";
    o.detail = os.str();
    return o;
}

Outcome ac6() {
    Outcome o;
    std::mt19937_64 rng(2718);
    const auto t0 = Clock::now();
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto t = testing_support::random_rational_triangle(rng);
        if (!(d_merging(t).value == d_three(t).value)) ++mismatches;
    }
    const double secs = seconds_since(t0);
    o.require(mismatches == 0, std::to_string(mismatches) + " triangles disagree");
    o.require(secs < 5.0, "took " + std::to_string(secs) + " s");
    o.detail = "1000 triangles equal in " + std::to_string(secs) + " s";
    return o;
}

Outcome ac7() {
    Outcome o;
    const auto g2 = load_partial_graph(fixtures / "fig5_G2.json");
    const auto p2 = edge_orbits(g2);
    o.require(p2.group_size == 24, "G2 automorphisms: " + std::to_string(p2.group_size));
    o.require(p2.orbits.size() == 1, "G2 orbits: " + std::to_string(p2.orbits.size()));
    const auto g1 = load_partial_graph(fixtures / "fig5_G1.json");
    const auto p1 = edge_orbits(g1);
    o.require(p1.orbit_of(g1.find_label("e1")) != p1.orbit_of(g1.find_label("e2")), "G1 e1, e2 share an orbit");
    const auto g8 = load_partial_graph(fixtures / "fig8_Gp.json");
    const auto avg = average_orbits(csv("fig8_GS.csv"), g8);
    for (const auto& e : g8.labeled_edges()) o.require(avg(e.u, e.v) == Scalar(4, 3), e.label + " is not 4/3");
    o.detail = "G2 24/1, G1 split, averaging 4/3";
    return o;
}

Outcome ac8() {
    Outcome o;
    const auto t0 = Clock::now();
    std::ostringstream detail;
    for (const auto& f : {SuitableFunction::harmonic(), SuitableFunction::geometric_mean()}) {
        AuditConfig cfg;
        cfg.instances = 10000;
        cfg.n_values = {3, 4, 5, 6};
        AuditRequest req{MeasureKind::d_f(f), {Axiom::adding, Axiom::increasing, Axiom::scaling}, false, std::nullopt};
        const auto report = run_audit(req, cfg);
        std::size_t violations = 0;
        for (const auto& s : report.sections) {
            violations += s.violations;
            o.require(s.violations == 0, req.measure.name() + " axiom " + s.axiom + ": " +
                                             std::to_string(s.violations) + " violations");
            o.require(s.checked > 0, req.measure.name() + " axiom " + s.axiom + " checked nothing");
        }
        detail << req.measure.name() << ' ' << violations << " violations over " << cfg.instances << " instances; ";
    }
    AuditConfig cfg;
    cfg.instances = 1000;
    cfg.n_values = {3, 4, 5};
    AuditRequest req{MeasureKind::d_merging(), all_axioms(), false, std::nullopt};
    const auto report = run_audit(req, cfg);
    std::size_t checked = 0;
    for (const auto& s : report.sections) {
        checked += s.checked;
        if (s.violations > 0) {
            // Publishable: the merging measure was only conjectured to satisfy these.
            o.require(false, "COUNTEREXAMPLE for d-merging axiom " + s.axiom + " (" + std::to_string(s.violations) +
                                 " violations); rerun `diversity audit --measure d-merging --evidence-dir DIR`");
        }
    }
    const double total = seconds_since(t0);
    o.require(total < 120.0, "audit took " + std::to_string(total) + " s");
    detail << "d-merging all axioms over " << checked << " checks; " << total << " s total";
    o.detail = detail.str();
    return o;
}

Outcome ac9() {
    Outcome o;
    const auto demo = equidistance_demo(MeasureKind::d_merging());
    o.require(demo.minimal_k.has_value(), "no minimal k found");
    o.require(demo.padding_preserves, "padding changed a score");
    o.require(demo.premises_hold, "premises do not hold");
    o.require(demo.contradiction(), "no contradiction recorded");
    o.require(demo.minimal_k && demo.d_s > demo.d_uk, "D(S) <= D(U_k)");
    for (const auto& line : demo.ledger) std::cout << "    " << line << '\n';
    o.detail = demo.minimal_k ? "minimal k = " + std::to_string(*demo.minimal_k) : "no k";
    return o;
}

std::string full_report() {
    AuditConfig cfg;
    cfg.instances = 200;
    AuditRequest req{MeasureKind::d_merging()};
    req.fixture_dir = fixtures;
    return to_json(run_audit(req, cfg)).dump(2);
}

Outcome ac10() {
    Outcome o;
    const std::string a = full_report();
    const std::string b = full_report();
    o.require(a == b, "two runs differ");
    o.require(a.find("\"ok\": true") != std::string::npos, "report not ok");
    o.detail = std::to_string(a.size()) + " identical bytes";
    return o;
}

// The harness must notice a broken fixture.
Outcome self_test() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "diversity-acceptance-selftest";
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const auto& e : fs::directory_iterator(fixtures)) fs::copy(e.path(), dir / e.path().filename());
    {
        std::ofstream out(dir / "fig2_S.csv");
        out << "s1,s2,s3,s4\n0\n1,0\n1,1,0\n4/3,4/3,1/2,0\n";
    }
    const auto cases = reproduce_worked_examples(dir);
    bool hybrid_red = false;
    for (const auto& c : cases) hybrid_red = hybrid_red || (c.id == "hybrid.S" && !c.match);
    o.require(hybrid_red, "corrupted fixture went unnoticed");
    fs::remove_all(dir);
    o.detail = "corrupted S turns hybrid.S red";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    fixtures = argc > 1 ? fs::path(argv[1]) : fs::path(DIVERSITY_FIXTURE_DIR);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1", ac1},  {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
        {"AC5", ac5},  {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
        {"AC9", ac9},  {"AC10", ac10}, {"self-test", self_test},
    };
    int failed = 0;
    for (const auto& [id, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << ": " << o.detail << '\n';
        for (const auto& f : o.failures) std::cout << "    " << f << '\n';
        std::cout.flush();
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << '\n';
    return failed;
}
