#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "diversity/measures.hpp"
#include "diversity/metric.hpp"
#include "diversity/symmetry.hpp"

namespace diversity {

enum class Axiom { adding, increasing, scaling, equidistance3, symmetric_a, symmetric_b };

/// "1", "2", "4", "5", "5a", "5b".
std::string to_string(Axiom axiom);
/// Comma-separated ids or "all". Throws InputError on unknown ids.
std::vector<Axiom> parse_axioms(std::string_view spec);
const std::vector<Axiom>& all_axioms();

enum class EnsembleChoice { euclidean, shortest_path, mixed };

const char* to_string(EnsembleChoice e);
EnsembleChoice parse_ensemble(std::string_view name);

struct AuditConfig {
    std::uint64_t seed = 1;
    std::size_t instances = 200;
    std::vector<std::size_t> n_values{3, 4, 5};
    EnsembleChoice ensemble = EnsembleChoice::mixed;
    /// Relative tolerance, used only for measures evaluated in floating point.
    double epsilon = 1e-9;
    std::vector<Scalar> delta_probe{Scalar(1, 10), Scalar(1, 20), Scalar(1, 40), Scalar(1, 80)};
    std::size_t max_retries = 50;
    std::size_t max_stored_violations = 10;
    MeasureLimits limits;
    SymmetryOptions symmetry;
    /// When set, every violation's matrices are written here as CSV.
    std::optional<std::filesystem::path> evidence_dir;
};

struct Violation {
    std::string axiom;
    std::size_t instance;
    std::string description;
    DistanceMatrix before;
    DistanceMatrix after;
    Scalar score_before;
    Scalar score_after;
    Scalar margin;  // score_after - score_before
};

enum class Expectation { must_pass, must_violate, informational };

const char* to_string(Expectation e);

struct AxiomSection {
    std::string axiom;
    std::string measure;
    Expectation expectation = Expectation::informational;
    std::size_t checked = 0;
    std::size_t passed = 0;
    std::size_t violations = 0;
    std::size_t skipped = 0;
    std::vector<Violation> examples;  // at most max_stored_violations, fixed witnesses first
    std::vector<std::string> notes;

    /// must_pass: no violations; must_violate: at least one; informational: always.
    bool satisfied() const;
};

/// What the measure is expected to do on each axiom at the shipped config.
Expectation expectation_for(const MeasureKind& measure, Axiom axiom);

AxiomSection audit_axiom1(const MeasureKind& measure, const AuditConfig& cfg);
AxiomSection audit_axiom2(const MeasureKind& measure, const AuditConfig& cfg);
AxiomSection audit_axiom4(const MeasureKind& measure, const AuditConfig& cfg);
AxiomSection audit_equidistance3(const MeasureKind& measure, const AuditConfig& cfg);
AxiomSection audit_symmetric_a(const MeasureKind& measure, const AuditConfig& cfg);
AxiomSection audit_symmetric_b(const MeasureKind& measure, const AuditConfig& cfg);
AxiomSection audit_axiom(const MeasureKind& measure, Axiom axiom, const AuditConfig& cfg);

struct ContinuityRow {
    Scalar delta;
    Scalar max_change;
    std::size_t samples = 0;
};

struct FamilyPoint {
    std::size_t k;
    Scalar value;
};

/// Empirical modulus: evidence only, never pass/fail.
struct ContinuityReport {
    std::string measure;
    DistanceMatrix base;
    Scalar base_score;
    std::vector<ContinuityRow> rows;
    bool non_increasing = true;      // max_change never grew as delta shrank
    std::vector<FamilyPoint> family;  // D(U_k), k = 1..50; tends to D(unit triangle) = 2
    Scalar family_limit;
};

ContinuityReport probe_continuity(const MeasureKind& measure, const DistanceMatrix& m, const AuditConfig& cfg);

/// Sides (1, (k+2)/(k+1), (k+2)/(k+1)) with the unit side between u1 and u2.
DistanceMatrix family_u(std::size_t k);
/// Sides s1s2 = 1, s2s3 = 1, s1s3 = 2.
DistanceMatrix family_s();
/// m with `copies` extra copies of point `of` appended.
DistanceMatrix pad_with_copies(const DistanceMatrix& m, std::size_t of, std::size_t copies);

struct EquidistanceDemo {
    std::string measure;
    Scalar d_s;
    Scalar d_u0;  // k = 0: sides (1, 2, 2)
    std::optional<std::size_t> minimal_k;
    Scalar d_uk;
    std::vector<FamilyPoint> scanned;
    bool padding_preserves = false;
    bool premises_hold = false;  // strong equidistance applies to the padded pair
    std::vector<std::string> ledger;

    /// A minimal k exists, padding preserved both scores and the premises held.
    bool contradiction() const { return minimal_k && padding_preserves && premises_hold; }
};

EquidistanceDemo equidistance_demo(const MeasureKind& measure, std::size_t max_k = 200, const MeasureLimits& limits = {});

struct WorkedExample {
    std::string id;
    std::string description;
    std::string expected;
    std::string computed;
    bool match = false;
};

/// Every quoted constant, recomputed from the fixture files in `fixture_dir`.
/// A missing or unreadable fixture turns the cases that need it red.
std::vector<WorkedExample> reproduce_worked_examples(const std::filesystem::path& fixture_dir);

struct AuditReport {
    AuditConfig config;
    std::string measure;
    std::vector<AxiomSection> sections;
    std::optional<ContinuityReport> continuity;
    std::vector<WorkedExample> cases;

    /// Every section satisfied and every worked example matched.
    bool ok() const;
};

struct AuditRequest {
    MeasureKind measure;
    std::vector<Axiom> axioms = all_axioms();
    bool continuity = true;
    std::optional<std::filesystem::path> fixture_dir;  // include worked examples when set
};

AuditReport run_audit(const AuditRequest& request, const AuditConfig& cfg);

}  // namespace diversity
