#include "diversity/serialize.hpp"

#include <sstream>

namespace diversity {

std::string decimal_string(const Scalar& value, int digits) {
    // Round half away from zero on the exact value.
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const mpq_class& q = value.rational();
    mpz_class num = abs(q.get_num()) * scale * 2 + q.get_den();
    mpz_class den = q.get_den() * 2;
    mpz_class scaled;
    mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());

    std::string digits_str = scaled.get_str();
    if (digits_str.size() <= static_cast<std::size_t>(digits)) {
        digits_str.insert(0, static_cast<std::size_t>(digits) + 1 - digits_str.size(), '0');
    }
    std::string out = (q < 0 && scaled != 0) ? "-" : "";
    out += digits_str.substr(0, digits_str.size() - static_cast<std::size_t>(digits));
    if (digits > 0) out += "." + digits_str.substr(digits_str.size() - static_cast<std::size_t>(digits));
    return out;
}

Json to_json(const Scalar& value, bool with_decimal) {
    Json j;
    j["num"] = value.numerator_str();
    j["den"] = value.denominator_str();
    if (with_decimal) j["decimal"] = decimal_string(value);
    return j;
}

Json to_json(const DistanceMatrix& m) {
    Json j;
    j["labels"] = m.labels();
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m(i, k).str());
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

Json to_json(const DiversityScore& score, bool with_decimal) {
    Json j;
    j["measure"] = score.measure.name();
    j["subset"] = score.subset;
    j["value"] = to_json(score.value, with_decimal);
    j["exact"] = score.exact;
    j["notes"] = score.notes;
    return j;
}

Json to_json(const std::vector<RankEntry>& ranking, bool with_decimal) {
    Json out = Json::array();
    for (const auto& e : ranking) {
        Json j;
        j["rank"] = e.rank;
        j["tied"] = e.tied;
        j["input_index"] = e.input_index;
        j["score"] = to_json(e.score, with_decimal);
        out.push_back(std::move(j));
    }
    return out;
}

namespace {

Json instance_json(std::size_t instance) {
    return instance == static_cast<std::size_t>(-1) ? Json(nullptr) : Json(instance);
}

Json section_json(const AxiomSection& s) {
    Json j;
    j["axiom"] = s.axiom;
    j["measure"] = s.measure;
    j["expectation"] = to_string(s.expectation);
    j["checked"] = s.checked;
    j["passed"] = s.passed;
    j["violations"] = s.violations;
    j["skipped"] = s.skipped;
    j["satisfied"] = s.satisfied();
    j["notes"] = s.notes;
    Json examples = Json::array();
    for (const auto& v : s.examples) {
        Json e;
        e["instance"] = instance_json(v.instance);
        e["description"] = v.description;
        e["before"] = to_json(v.before);
        e["after"] = to_json(v.after);
        e["score_before"] = to_json(v.score_before, true);
        e["score_after"] = to_json(v.score_after, true);
        e["margin"] = to_json(v.margin, true);
        examples.push_back(std::move(e));
    }
    j["examples"] = std::move(examples);
    return j;
}

Json continuity_json(const ContinuityReport& c) {
    Json j;
    j["measure"] = c.measure;
    j["base"] = to_json(c.base);
    j["base_score"] = to_json(c.base_score, true);
    Json rows = Json::array();
    for (const auto& r : c.rows) {
        Json row;
        row["delta"] = r.delta.str();
        row["max_change"] = to_json(r.max_change, true);
        row["samples"] = r.samples;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["non_increasing"] = c.non_increasing;
    Json family = Json::array();
    for (const auto& p : c.family) family.push_back({{"k", p.k}, {"value", to_json(p.value, true)}});
    j["family"] = std::move(family);
    j["family_limit"] = to_json(c.family_limit, true);
    return j;
}

}  // namespace

Json to_json(const std::vector<WorkedExample>& cases) {
    Json out = Json::array();
    for (const auto& c : cases) {
        Json j;
        j["id"] = c.id;
        j["description"] = c.description;
        j["expected"] = c.expected;
        j["computed"] = c.computed;
        j["match"] = c.match;
        out.push_back(std::move(j));
    }
    return out;
}

Json to_json(const AuditReport& report) {
    Json j;
    j["schema"] = report_schema;
    j["measure"] = report.measure;
    Json cfg;
    cfg["seed"] = report.config.seed;
    cfg["instances"] = report.config.instances;
    cfg["n_values"] = report.config.n_values;
    cfg["ensemble"] = to_string(report.config.ensemble);
    cfg["epsilon"] = report.config.epsilon;
    Json deltas = Json::array();
    for (const auto& d : report.config.delta_probe) deltas.push_back(d.str());
    cfg["delta_probe"] = std::move(deltas);
    cfg["max_retries"] = report.config.max_retries;
    cfg["max_subset_recursion"] = report.config.limits.max_subset_recursion;
    cfg["max_merging"] = report.config.limits.max_merging;
    j["config"] = std::move(cfg);
    j["ok"] = report.ok();
    Json sections = Json::array();
    for (const auto& s : report.sections) sections.push_back(section_json(s));
    j["sections"] = std::move(sections);
    j["continuity"] = report.continuity ? continuity_json(*report.continuity) : Json(nullptr);
    j["worked_examples"] = to_json(report.cases);
    return j;
}

Json to_json(const EquidistanceDemo& demo) {
    Json j;
    j["measure"] = demo.measure;
    j["d_s"] = to_json(demo.d_s, true);
    j["d_u0"] = to_json(demo.d_u0, true);
    j["minimal_k"] = demo.minimal_k ? Json(*demo.minimal_k) : Json(nullptr);
    j["d_uk"] = demo.minimal_k ? to_json(demo.d_uk, true) : Json(nullptr);
    Json scanned = Json::array();
    for (const auto& p : demo.scanned) scanned.push_back({{"k", p.k}, {"value", to_json(p.value, true)}});
    j["scanned"] = std::move(scanned);
    j["padding_preserves"] = demo.padding_preserves;
    j["premises_hold"] = demo.premises_hold;
    j["contradiction"] = demo.contradiction();
    j["ledger"] = demo.ledger;
    return j;
}

Json to_json(const SymmetrySummary& summary) {
    const PartialGraph& g = *summary.graph;
    Json j;
    j["n"] = g.size();
    j["group_size"] = summary.orbits.group_size;
    Json orbits = Json::array();
    for (const auto& orbit : summary.orbits.orbits) {
        Json o = Json::array();
        for (std::size_t e : orbit) o.push_back(g.labeled_edges()[e].label);
        orbits.push_back(std::move(o));
    }
    j["orbits"] = std::move(orbits);
    j["automorphisms"] = summary.automorphisms;
    return j;
}

// ---------------------------------------------------------------------------

namespace {

std::string subset_text(const std::vector<std::string>& subset) {
    std::string out = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) out += (i ? "," : "") + subset[i];
    return out + "}";
}

std::string value_text(const Scalar& v, bool with_decimal) {
    std::string out = v.str();
    if (with_decimal) out += " (" + decimal_string(v) + ")";
    if (!v.exact()) out += " [inexact]";
    return out;
}

}  // namespace

std::string to_text(const DiversityScore& score, bool with_decimal) {
    std::ostringstream os;
    os << score.measure.name() << ' ' << subset_text(score.subset) << " = " << value_text(score.value, with_decimal)
       << '\n';
    for (const auto& n : score.notes) os << "  note: " << n << '\n';
    return os.str();
}

std::string to_text(const std::vector<RankEntry>& ranking, bool with_decimal) {
    std::ostringstream os;
    for (const auto& e : ranking) {
        os << e.rank << (e.tied ? "=" : " ") << ' ' << subset_text(e.score.subset) << ' '
           << value_text(e.score.value, with_decimal) << '\n';
    }
    return os.str();
}

std::string to_text(const DistanceMatrix& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.size(); ++i) {
        os << m.labels()[i];
        for (std::size_t j = 0; j < m.size(); ++j) os << ' ' << m(i, j).str();
        os << '\n';
    }
    return os.str();
}

std::string to_text(const AuditReport& report) {
    std::ostringstream os;
    os << "audit of " << report.measure << " (seed " << report.config.seed << ", " << report.config.instances
       << " instances, ensemble " << to_string(report.config.ensemble) << ")\n";
    for (const auto& s : report.sections) {
        os << "  axiom " << s.axiom << " [" << to_string(s.expectation) << "]: " << s.checked << " checked, "
           << s.violations << " violations, " << s.skipped << " skipped -> " << (s.satisfied() ? "ok" : "FAILED");
        if (s.expectation == Expectation::must_pass && s.violations > 0) {
            os << "  ** counterexample found; evidence stored in the report **";
        }
        os << '\n';
        for (const auto& n : s.notes) os << "    note: " << n << '\n';
        for (const auto& v : s.examples) {
            os << "    violation: " << v.description << ", score " << decimal_string(v.score_before, 6) << " -> "
               << decimal_string(v.score_after, 6) << '\n';
        }
    }
    if (report.continuity) {
        const auto& c = *report.continuity;
        os << "  continuity (evidence only):\n";
        for (const auto& r : c.rows) {
            os << "    delta " << r.delta.str() << ": max |dD| = " << decimal_string(r.max_change, 8) << " over "
               << r.samples << " samples\n";
        }
        os << "    max change " << (c.non_increasing ? "shrinks" : "does NOT shrink") << " with delta\n";
        if (!c.family.empty()) {
            os << "    D(U_k): k=1 " << decimal_string(c.family.front().value, 6) << ", k=" << c.family.back().k << ' '
               << decimal_string(c.family.back().value, 6) << ", limit " << c.family_limit.str() << '\n';
        }
    }
    if (!report.cases.empty()) {
        std::size_t matched = 0;
        for (const auto& c : report.cases) matched += c.match ? 1 : 0;
        os << "  worked examples: " << matched << '/' << report.cases.size() << " match\n";
        for (const auto& c : report.cases) {
            if (!c.match) os << "    MISMATCH " << c.id << ": expected " << c.expected << ", got " << c.computed << '\n';
        }
    }
    os << (report.ok() ? "result: ok\n" : "result: FAILED\n");
    return os.str();
}

std::string to_text(const EquidistanceDemo& demo) {
    std::ostringstream os;
    os << "strong equidistance demo under " << demo.measure << '\n';
    for (const auto& line : demo.ledger) os << "  " << line << '\n';
    return os.str();
}

std::string to_text(const SymmetrySummary& summary) {
    const PartialGraph& g = *summary.graph;
    std::ostringstream os;
    os << summary.orbits.group_size << " automorphisms, " << summary.orbits.orbits.size() << " edge orbits\n";
    for (const auto& orbit : summary.orbits.orbits) {
        os << "  {";
        for (std::size_t i = 0; i < orbit.size(); ++i) os << (i ? "," : "") << g.labeled_edges()[orbit[i]].label;
        os << "}\n";
    }
    return os.str();
}

}  // namespace diversity
