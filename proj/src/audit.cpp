#include "diversity/audit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "diversity/errors.hpp"
#include "diversity/io.hpp"

namespace diversity {

std::string to_string(Axiom axiom) {
    switch (axiom) {
        case Axiom::adding: return "1";
        case Axiom::increasing: return "2";
        case Axiom::scaling: return "4";
        case Axiom::equidistance3: return "5";
        case Axiom::symmetric_a: return "5a";
        case Axiom::symmetric_b: return "5b";
    }
    return "?";
}

const std::vector<Axiom>& all_axioms() {
    static const std::vector<Axiom> axioms{Axiom::adding,        Axiom::increasing,  Axiom::scaling,
                                           Axiom::equidistance3, Axiom::symmetric_a, Axiom::symmetric_b};
    return axioms;
}

std::vector<Axiom> parse_axioms(std::string_view spec) {
    if (spec == "all") return all_axioms();
    std::vector<Axiom> out;
    std::string item;
    std::stringstream ss{std::string(spec)};
    while (std::getline(ss, item, ',')) {
        auto it = std::find_if(all_axioms().begin(), all_axioms().end(),
                               [&](Axiom a) { return to_string(a) == item; });
        if (it == all_axioms().end()) throw InputError("unknown axiom '" + item + "' (use 1,2,4,5,5a,5b or all)");
        if (std::find(out.begin(), out.end(), *it) == out.end()) out.push_back(*it);
    }
    if (out.empty()) throw InputError("no axioms selected");
    return out;
}

const char* to_string(EnsembleChoice e) {
    switch (e) {
        case EnsembleChoice::euclidean: return "euclidean";
        case EnsembleChoice::shortest_path: return "shortest-path";
        case EnsembleChoice::mixed: return "mixed";
    }
    return "?";
}

EnsembleChoice parse_ensemble(std::string_view name) {
    if (name == "euclidean") return EnsembleChoice::euclidean;
    if (name == "shortest-path") return EnsembleChoice::shortest_path;
    if (name == "mixed") return EnsembleChoice::mixed;
    throw InputError("unknown ensemble '" + std::string(name) + "'");
}

const char* to_string(Expectation e) {
    switch (e) {
        case Expectation::must_pass: return "must-pass";
        case Expectation::must_violate: return "must-violate";
        case Expectation::informational: return "informational";
    }
    return "?";
}

bool AxiomSection::satisfied() const {
    switch (expectation) {
        case Expectation::must_pass: return violations == 0;
        case Expectation::must_violate: return violations > 0;
        case Expectation::informational: return true;
    }
    return false;
}

Expectation expectation_for(const MeasureKind& measure, Axiom axiom) {
    using Id = MeasureKind::Id;
    switch (measure.id) {
        case Id::d_f:
            if (axiom == Axiom::adding || axiom == Axiom::increasing || axiom == Axiom::scaling) {
                return Expectation::must_pass;
            }
            if (axiom == Axiom::equidistance3 && measure.f.kind() == SuitableFunction::Kind::harmonic_eq2) {
                return Expectation::must_violate;
            }
            return Expectation::informational;
        case Id::d_f_hybrid:
            return axiom == Axiom::symmetric_a ? Expectation::must_violate : Expectation::informational;
        case Id::d_merging: return Expectation::must_pass;
        default: return Expectation::informational;
    }
}

namespace {

using Rng = std::mt19937_64;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng section_rng(std::uint64_t seed, const std::string& stream) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : stream) h = (h ^ c) * 1099511628211ULL;
    return Rng(splitmix(seed ^ splitmix(h)));
}

long uniform(Rng& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Scalar ratio(Rng& rng, long lo, long hi, long den) { return Scalar(uniform(rng, lo, hi), den); }

DistanceMatrix exact_copy(const DistanceMatrix& m) {
    std::vector<Scalar> entries;
    entries.reserve(m.entries().size());
    for (const auto& e : m.entries()) entries.emplace_back(e.rational());
    return DistanceMatrix(m.labels(), std::move(entries));
}

DistanceMatrix sample(const AuditConfig& cfg, Rng& rng, std::size_t n, std::size_t instance) {
    MetricEnsemble ensemble = MetricEnsemble::shortest_path_repair;
    if (cfg.ensemble == EnsembleChoice::euclidean ||
        (cfg.ensemble == EnsembleChoice::mixed && instance % 2 == 1)) {
        ensemble = MetricEnsemble::euclidean_sample;
    }
    // Rounded Euclidean distances are taken at their exact binary value.
    return exact_copy(random_metric(n, ensemble, rng));
}

std::size_t pick_n(const AuditConfig& cfg, std::size_t instance) {
    return cfg.n_values[instance % cfg.n_values.size()];
}

/// Comparisons honouring the measure's exactness.
struct Compare {
    double tolerance = 0.0;

    bool eq(const Scalar& a, const Scalar& b) const { return approx_equal(a, b, tolerance); }
    bool gt(const Scalar& a, const Scalar& b) const {
        if (tolerance <= 0.0) return a > b;
        return a > b && !approx_equal(a, b, tolerance);
    }
};

Compare comparator(const MeasureKind& measure, const AuditConfig& cfg) {
    return {measure.floating() ? cfg.epsilon : 0.0};
}

/// Measure value, or nullopt when the measure is undefined on m (e.g. d_three off n=3).
std::optional<Scalar> measure_value(const DistanceMatrix& m, const MeasureKind& measure, const AuditConfig& cfg) {
    try {
        return evaluate(m, measure, cfg.limits).value;
    } catch (const DepthLimitExceeded&) {
        throw;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

class SectionBuilder {
public:
    SectionBuilder(const MeasureKind& measure, Axiom axiom, const AuditConfig& cfg) : cfg_(cfg) {
        section_.axiom = to_string(axiom);
        section_.measure = measure.name();
        section_.expectation = expectation_for(measure, axiom);
    }

    void pass() {
        ++section_.checked;
        ++section_.passed;
    }
    void skip() { ++section_.skipped; }
    void note(std::string text) { section_.notes.push_back(std::move(text)); }

    void fail(std::size_t instance, std::string description, DistanceMatrix before, DistanceMatrix after,
              Scalar score_before, Scalar score_after) {
        ++section_.checked;
        ++section_.violations;
        Scalar margin = score_after - score_before;
        if (cfg_.evidence_dir) persist(instance, before, after);
        if (section_.examples.size() < cfg_.max_stored_violations) {
            section_.examples.push_back({section_.axiom, instance, std::move(description), std::move(before),
                                         std::move(after), std::move(score_before), std::move(score_after),
                                         std::move(margin)});
        }
    }

    /// Records the outcome of `holds`; `before`/`after` are the compared sets.
    void check(bool holds, std::size_t instance, std::string description, const DistanceMatrix& before,
               const DistanceMatrix& after, const Scalar& score_before, const Scalar& score_after) {
        if (holds) {
            pass();
        } else {
            fail(instance, std::move(description), before, after, score_before, score_after);
        }
    }

    AxiomSection finish() { return std::move(section_); }

private:
    void persist(std::size_t instance, const DistanceMatrix& before, const DistanceMatrix& after) const {
        std::filesystem::create_directories(*cfg_.evidence_dir);
        std::string stem = section_.measure + "_axiom" + section_.axiom + "_" + std::to_string(instance);
        std::replace_if(stem.begin(), stem.end(), [](char c) { return c == ':' || c == ','; }, '_');
        std::ofstream(*cfg_.evidence_dir / (stem + "_before.csv")) << [&] {
            std::ostringstream os;
            write_distance_csv(os, before);
            return os.str();
        }();
        std::ofstream(*cfg_.evidence_dir / (stem + "_after.csv")) << [&] {
            std::ostringstream os;
            write_distance_csv(os, after);
            return os.str();
        }();
    }

    const AuditConfig& cfg_;
    AxiomSection section_;
};

constexpr std::size_t fixed_instance = static_cast<std::size_t>(-1);

DistanceMatrix triangle(const Scalar& d12, const Scalar& d13, const Scalar& d23) {
    return DistanceMatrix::from_upper_triangle({d12, d13, d23});
}

DistanceMatrix permuted(const DistanceMatrix& m, const Permutation& sigma) {
    const std::size_t n = m.size();
    std::vector<Scalar> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = m(sigma[i], sigma[j]);
    }
    return DistanceMatrix(m.labels(), std::move(entries));
}

/// Mean of m composed with every power of sigma; sigma is then an isometry.
DistanceMatrix symmetrise(const DistanceMatrix& m, const Permutation& sigma) {
    const std::size_t n = m.size();
    std::vector<Scalar> total(n * n);
    Permutation identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    Permutation power = identity;
    long order = 0;
    do {
        const DistanceMatrix p = permuted(m, power);
        for (std::size_t i = 0; i < n * n; ++i) total[i] += p.entries()[i];
        ++order;
        for (auto& x : power) x = sigma[x];
    } while (power != identity);
    for (auto& x : total) x /= Scalar(order);
    return DistanceMatrix(m.labels(), std::move(total));
}

Permutation random_permutation(Rng& rng, std::size_t n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(i) - 1))]);
    return p;
}

/// Orbits of vertex pairs (i < j) under the cyclic group generated by sigma.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pair_orbits(const Permutation& sigma) {
    const std::size_t n = sigma.size();
    std::vector<bool> seen(n * n, false);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> orbits;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (seen[i * n + j]) continue;
            auto& orbit = orbits.emplace_back();
            std::size_t a = i, b = j;
            while (!seen[std::min(a, b) * n + std::max(a, b)]) {
                seen[std::min(a, b) * n + std::max(a, b)] = true;
                orbit.emplace_back(std::min(a, b), std::max(a, b));
                a = sigma[a];
                b = sigma[b];
            }
        }
    }
    return orbits;
}

std::vector<PartialGraph::LabeledEdge> name_edges(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<PartialGraph::LabeledEdge> out;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        out.push_back({pairs[e].first, pairs[e].second, "e" + std::to_string(e + 1)});
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

AxiomSection audit_axiom1(const MeasureKind& measure, const AuditConfig& cfg) {
    SectionBuilder out(measure, Axiom::adding, cfg);
    const Compare cmp = comparator(measure, cfg);
    Rng rng = section_rng(cfg.seed, "axiom1");

    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const std::size_t n = pick_n(cfg, i);
        const DistanceMatrix full = sample(cfg, rng, n + 1, i);
        std::vector<std::size_t> first(n);
        std::iota(first.begin(), first.end(), 0);
        const DistanceMatrix s = restrict(full, first);
        const auto of = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
        const DistanceMatrix dup = with_duplicate(s, of, "x");

        const auto ds = measure_value(s, measure, cfg);
        const auto dfresh = measure_value(full, measure, cfg);
        const auto ddup = measure_value(dup, measure, cfg);
        if (ds && dfresh) {
            out.check(cmp.gt(*dfresh, *ds), i, "adding a new point did not increase the score", s, full, *ds,
                      *dfresh);
        } else {
            out.skip();
        }
        if (ds && ddup) {
            out.check(cmp.eq(*ddup, *ds), i, "adding a copy of " + s.labels()[of] + " changed the score", s, dup,
                      *ds, *ddup);
        } else {
            out.skip();
        }
    }
    return out.finish();
}

AxiomSection audit_axiom2(const MeasureKind& measure, const AuditConfig& cfg) {
    SectionBuilder out(measure, Axiom::increasing, cfg);
    const Compare cmp = comparator(measure, cfg);
    Rng rng = section_rng(cfg.seed, "axiom2");

    {
        const DistanceMatrix t = triangle(1, 1, 1);
        const DistanceMatrix s = triangle(1, 2, 1);
        const auto dt = measure_value(t, measure, cfg);
        const auto ds = measure_value(s, measure, cfg);
        if (dt && ds) {
            out.check(cmp.gt(*ds, *dt), fixed_instance, "(1,1,2) does not score above the unit triangle", t, s, *dt,
                      *ds);
            out.check(cmp.eq(*dt, *dt), fixed_instance, "T = S scored differently", t, t, *dt, *dt);
        } else {
            out.skip();
        }
    }

    std::size_t fallbacks = 0;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const std::size_t n = pick_n(cfg, i);
        const DistanceMatrix s = sample(cfg, rng, n, i);
        std::optional<DistanceMatrix> t;
        for (std::size_t attempt = 0; attempt < cfg.max_retries && !t; ++attempt) {
            DistanceMatrix candidate = s;
            bool changed = false;
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    if (uniform(rng, 0, 1) == 0) continue;
                    candidate = candidate.with_distance(a, b, s(a, b) * (Scalar(1) + ratio(rng, 1, 8, 16)));
                    changed = true;
                }
            }
            if (changed && is_pseudometric(candidate)) t = std::move(candidate);
        }
        if (!t) {
            // A cut metric added to s is always a metric.
            ++fallbacks;
            const long side = uniform(rng, 1, (1L << n) - 2);
            const Scalar c = ratio(rng, 1, 8, 16);
            DistanceMatrix candidate = s;
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    if (((side >> a) & 1) != ((side >> b) & 1)) candidate = candidate.with_distance(a, b, s(a, b) + c);
                }
            }
            t = std::move(candidate);
        }
        const auto ds = measure_value(s, measure, cfg);
        const auto dt = measure_value(*t, measure, cfg);
        if (!ds || !dt) {
            out.skip();
            continue;
        }
        out.check(cmp.gt(*dt, *ds), i, "increasing distances did not increase the score", s, *t, *ds, *dt);
    }
    if (fallbacks) out.note(std::to_string(fallbacks) + " instances used a cut-metric increase after retries");
    return out.finish();
}

AxiomSection audit_axiom4(const MeasureKind& measure, const AuditConfig& cfg) {
    SectionBuilder out(measure, Axiom::scaling, cfg);
    const Compare cmp = comparator(measure, cfg);
    Rng rng = section_rng(cfg.seed, "axiom4");

    auto check = [&](std::size_t instance, const DistanceMatrix& s, const Scalar& c) {
        const DistanceMatrix scaled = scale(s, c);
        const auto ds = measure_value(s, measure, cfg);
        const auto dc = measure_value(scaled, measure, cfg);
        if (!ds || !dc) {
            out.skip();
            return;
        }
        const Scalar expected = c * *ds;
        out.check(cmp.eq(*dc, expected), instance, "scaling by " + c.str() + " did not scale the score", s, scaled,
                  expected, *dc);
    };
    check(fixed_instance, triangle(4, 2, 3), Scalar(2));
    check(fixed_instance, triangle(1, 1, 1), Scalar(1, 3));
    check(fixed_instance, triangle(1, 1, 1), Scalar(1));

    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const DistanceMatrix s = sample(cfg, rng, pick_n(cfg, i), i);
        check(i, s, Scalar(uniform(rng, 1, 12), uniform(rng, 1, 12)));
    }
    return out.finish();
}

AxiomSection audit_equidistance3(const MeasureKind& measure, const AuditConfig& cfg) {
    SectionBuilder out(measure, Axiom::equidistance3, cfg);
    const Compare cmp = comparator(measure, cfg);
    Rng rng = section_rng(cfg.seed, "axiom5");

    // Sides s1s2 = base, s1s3 = a, s2s3 = lambda - a.
    auto check = [&](std::size_t instance, const Scalar& base, const Scalar& lambda, const Scalar& a,
                     const Scalar& b) {
        const DistanceMatrix s = triangle(base, a, lambda - a);
        const DistanceMatrix t = triangle(base, b, lambda - b);
        const auto ds = measure_value(s, measure, cfg);
        const auto dt = measure_value(t, measure, cfg);
        if (!ds || !dt) {
            out.skip();
            return;
        }
        out.check(cmp.gt(*dt, *ds), instance, "evening out the two sides did not increase the score", s, t, *ds,
                  *dt);
    };
    check(fixed_instance, Scalar(1), Scalar(2), Scalar(1, 2), Scalar(1));

    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const Scalar base = ratio(rng, 1, 16, 4);
        const Scalar lambda = base + ratio(rng, 0, 16, 4);
        const long u = uniform(rng, -15, 15);
        const long v = uniform(rng, -15, 15);
        if (u == 0) {
            out.skip();  // sides already equal: nothing to move
            continue;
        }
        const Scalar half = lambda / Scalar(2);
        const Scalar offset = base / Scalar(2) * Scalar(u, 16);
        const Scalar a = half + offset;
        const Scalar b = half + offset * Scalar(v, 16);
        check(i, base, lambda, a, b);
    }
    out.note("triangles drawn with quarter-integer base and side sum");
    return out.finish();
}

AxiomSection audit_symmetric_a(const MeasureKind& measure, const AuditConfig& cfg) {
    SectionBuilder out(measure, Axiom::symmetric_a, cfg);
    const Compare cmp = comparator(measure, cfg);
    Rng rng = section_rng(cfg.seed, "axiom5a");
    std::size_t transform_failures = 0;

    auto check = [&](std::size_t instance, const DistanceMatrix& s, const PartialGraph& g) {
        DistanceMatrix t;
        try {
            t = average_orbits(s, g, cfg.symmetry);
        } catch (const TransformViolation& e) {
            ++transform_failures;
            out.fail(instance, std::string("averaged graph is not a metric: ") + e.what(), s, e.after(), Scalar(0),
                     Scalar(0));
            return;
        }
        const auto ds = measure_value(s, measure, cfg);
        const auto dt = measure_value(t, measure, cfg);
        if (!ds || !dt) {
            out.skip();
            return;
        }
        if (t == s) {
            out.check(cmp.eq(*dt, *ds), instance, "averaging changed nothing but the score moved", s, t, *ds, *dt);
        } else {
            out.check(cmp.gt(*dt, *ds), instance, "averaging symmetric edges did not increase the score", s, t, *ds,
                      *dt);
        }
    };

    {
        // Two four-point sets whose symmetric edges average to the unit tetrahedron,
        // and the tetrahedron with one long edge averaged over a vertex star.
        const DistanceMatrix star = DistanceMatrix::from_upper_triangle({1, 1, Scalar(4, 3), 1, Scalar(4, 3), Scalar(1, 3)});
        check(fixed_instance, star, PartialGraph::from_matrix(star, name_edges({{0, 3}, {1, 3}, {2, 3}})));
        const DistanceMatrix pinched = DistanceMatrix::from_upper_triangle({0, 1, 1, 1, 1, 2});
        check(fixed_instance, pinched, PartialGraph::from_matrix(pinched, name_edges({{0, 1}, {2, 3}})));
        const DistanceMatrix spike = DistanceMatrix::from_upper_triangle({1, 1, 2, 1, 1, 1});
        check(fixed_instance, spike, PartialGraph::from_matrix(spike, name_edges({{0, 3}, {2, 3}, {1, 3}})));
    }

    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const std::size_t n = pick_n(cfg, i);
        const Permutation sigma = random_permutation(rng, n);
        const DistanceMatrix base = symmetrise(sample(cfg, rng, n, i), sigma);

        const auto orbits = pair_orbits(sigma);
        std::vector<std::pair<std::size_t, std::size_t>> labelled;
        while (labelled.empty()) {
            for (const auto& orbit : orbits) {
                if (uniform(rng, 0, 1) == 1) labelled.insert(labelled.end(), orbit.begin(), orbit.end());
            }
        }
        std::sort(labelled.begin(), labelled.end());

        std::optional<DistanceMatrix> s;
        for (std::size_t attempt = 0; attempt < cfg.max_retries && !s; ++attempt) {
            DistanceMatrix candidate = base;
            for (const auto& [a, b] : labelled) {
                candidate = candidate.with_distance(a, b, base(a, b) * (Scalar(1) + ratio(rng, -8, 8, 16)));
            }
            if (is_pseudometric(candidate)) s = std::move(candidate);
        }
        if (!s) s = base;  // equality branch
        check(i, *s, PartialGraph::from_matrix(*s, name_edges(labelled)));
    }
    if (transform_failures) {
        out.note(std::to_string(transform_failures) + " averaged graphs violated the triangle inequality");
    }
    return out.finish();
}

AxiomSection audit_symmetric_b(const MeasureKind& measure, const AuditConfig& cfg) {
    SectionBuilder out(measure, Axiom::symmetric_b, cfg);
    const Compare cmp = comparator(measure, cfg);
    Rng rng = section_rng(cfg.seed, "axiom5b");
    std::size_t transform_failures = 0;

    auto check = [&](std::size_t instance, const DistanceMatrix& s, const PartialGraph& g, const Scalar& new_w1) {
        DistanceMatrix t;
        try {
            t = apply_pair_move(s, PairMove::toward_mean(s, g, new_w1), g, cfg.symmetry);
        } catch (const TransformViolation& e) {
            ++transform_failures;
            out.fail(instance, std::string("moved graph is not a metric: ") + e.what(), s, e.after(), Scalar(0),
                     Scalar(0));
            return;
        }
        const auto ds = measure_value(s, measure, cfg);
        const auto dt = measure_value(t, measure, cfg);
        if (!ds || !dt) {
            out.skip();
            return;
        }
        out.check(cmp.gt(*dt, *ds), instance, "moving a symmetric pair toward its mean did not increase the score",
                  s, t, *ds, *dt);
    };

    {
        const DistanceMatrix first = DistanceMatrix::from_upper_triangle({1, 1, 2, 1, 1, 1});
        check(fixed_instance, first, PartialGraph::from_matrix(first, name_edges({{0, 3}, {2, 3}})), Scalar(17, 10));
        const DistanceMatrix second =
            DistanceMatrix::from_upper_triangle({1, 1, Scalar(17, 10), 1, 1, Scalar(13, 10)});
        check(fixed_instance, second, PartialGraph::from_matrix(second, name_edges({{0, 3}, {1, 3}})), Scalar(7, 5));
    }

    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const std::size_t n = pick_n(cfg, i);
        // Random involution with at least one transposition.
        const Permutation order = random_permutation(rng, n);
        Permutation sigma(n);
        std::iota(sigma.begin(), sigma.end(), 0);
        const long swaps = uniform(rng, 1, static_cast<long>(n / 2));
        for (long k = 0; k < swaps; ++k) std::swap(sigma[order[2 * k]], sigma[order[2 * k + 1]]);

        std::vector<std::pair<std::size_t, std::size_t>> movable;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (std::minmax(sigma[a], sigma[b]) != std::minmax(a, b)) movable.emplace_back(a, b);
            }
        }
        if (movable.empty()) {
            out.skip();
            continue;
        }
        const auto e1 = movable[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(movable.size()) - 1))];
        const auto [c, d] = std::minmax(sigma[e1.first], sigma[e1.second]);
        const std::pair<std::size_t, std::size_t> e2{c, d};

        const DistanceMatrix base = symmetrise(sample(cfg, rng, n, i), sigma);
        std::optional<DistanceMatrix> s;
        for (std::size_t attempt = 0; attempt < cfg.max_retries && !s; ++attempt) {
            const Scalar shift = base(e1.first, e1.second) * ratio(rng, 1, 8, 16) * Scalar(uniform(rng, 0, 1) ? 1 : -1);
            DistanceMatrix candidate = base.with_distance(e1.first, e1.second, base(e1.first, e1.second) + shift)
                                           .with_distance(e2.first, e2.second, base(e2.first, e2.second) - shift);
            if (is_pseudometric(candidate)) s = std::move(candidate);
        }
        if (!s) {
            out.skip();
            continue;
        }
        const Scalar w1 = (*s)(e1.first, e1.second);
        const Scalar half = (w1 + (*s)(e2.first, e2.second)) / Scalar(2);
        const Scalar new_w1 = half + (w1 - half) * ratio(rng, -15, 15, 16);
        std::vector<std::pair<std::size_t, std::size_t>> pair{e1, e2};
        check(i, *s, PartialGraph::from_matrix(*s, name_edges(pair)), new_w1);
    }
    if (transform_failures) {
        out.note(std::to_string(transform_failures) + " moved graphs violated the triangle inequality");
    }
    return out.finish();
}

AxiomSection audit_axiom(const MeasureKind& measure, Axiom axiom, const AuditConfig& cfg) {
    switch (axiom) {
        case Axiom::adding: return audit_axiom1(measure, cfg);
        case Axiom::increasing: return audit_axiom2(measure, cfg);
        case Axiom::scaling: return audit_axiom4(measure, cfg);
        case Axiom::equidistance3: return audit_equidistance3(measure, cfg);
        case Axiom::symmetric_a: return audit_symmetric_a(measure, cfg);
        case Axiom::symmetric_b: return audit_symmetric_b(measure, cfg);
    }
    throw std::logic_error("unhandled axiom");
}

// ---------------------------------------------------------------------------

DistanceMatrix family_u(std::size_t k) {
    const Scalar side(static_cast<long>(k + 2), static_cast<long>(k + 1));
    return DistanceMatrix::from_upper_triangle({"u1", "u2", "u3"}, {Scalar(1), side, side});
}

DistanceMatrix family_s() { return DistanceMatrix::from_upper_triangle({"s1", "s2", "s3"}, {1, 2, 1}); }

DistanceMatrix pad_with_copies(const DistanceMatrix& m, std::size_t of, std::size_t copies) {
    DistanceMatrix out = m;
    const std::string stem = m.labels()[of] + "'";
    for (std::size_t c = 0; c < copies; ++c) out = with_duplicate(out, of, stem + std::to_string(c + 1));
    return out;
}

ContinuityReport probe_continuity(const MeasureKind& measure, const DistanceMatrix& m, const AuditConfig& cfg) {
    ContinuityReport report;
    report.measure = measure.name();
    report.base = m;
    report.base_score = evaluate(m, measure, cfg.limits).value;

    // Common random numbers: each sample is (1 - a) m + b M, with a and b
    // scaled so no distance moves by more than delta.
    Rng rng = section_rng(cfg.seed, "continuity");
    const std::size_t samples = std::min<std::size_t>(cfg.instances, 100);
    Scalar max_m(0);
    for (const auto& e : m.entries()) max_m = max(max_m, e);
    struct Draw {
        Scalar alpha, beta;
        DistanceMatrix other;
        Scalar max_other;
    };
    std::vector<Draw> draws;
    for (std::size_t j = 0; j < samples; ++j) {
        Draw d{ratio(rng, 0, 16, 16), ratio(rng, 0, 16, 16),
               exact_copy(random_metric(m.size(), MetricEnsemble::shortest_path_repair, rng)), Scalar(0)};
        for (const auto& e : d.other.entries()) d.max_other = max(d.max_other, e);
        draws.push_back(std::move(d));
    }

    for (const auto& delta : cfg.delta_probe) {
        ContinuityRow row{delta, Scalar(0), 0};
        for (const auto& d : draws) {
            const Scalar a = max_m.is_zero() ? Scalar(0) : delta * d.alpha / (Scalar(2) * max_m);
            const Scalar b = delta * d.beta / (Scalar(2) * d.max_other);
            std::vector<Scalar> entries(m.entries().size());
            for (std::size_t x = 0; x < entries.size(); ++x) {
                entries[x] = (Scalar(1) - a) * m.entries()[x] + b * d.other.entries()[x];
            }
            const DistanceMatrix p(m.labels(), std::move(entries));
            row.max_change = max(row.max_change, (evaluate(p, measure, cfg.limits).value - report.base_score).abs());
            ++row.samples;
        }
        if (!report.rows.empty() && report.rows.back().delta > delta && row.max_change > report.rows.back().max_change) {
            report.non_increasing = false;
        }
        report.rows.push_back(std::move(row));
    }

    for (std::size_t k = 1; k <= 50; ++k) {
        if (auto v = measure_value(family_u(k), measure, cfg)) report.family.push_back({k, *v});
    }
    if (auto v = measure_value(triangle(1, 1, 1), measure, cfg)) report.family_limit = *v;
    return report;
}

EquidistanceDemo equidistance_demo(const MeasureKind& measure, std::size_t max_k, const MeasureLimits& limits) {
    EquidistanceDemo demo;
    demo.measure = measure.name();
    const DistanceMatrix s = family_s();
    demo.d_s = evaluate(s, measure, limits).value;
    demo.d_u0 = evaluate(family_u(0), measure, limits).value;
    demo.ledger.push_back("D(S) = " + demo.d_s.str() + " for S with sides s1s2 = 1, s2s3 = 1, s1s3 = 2");
    demo.ledger.push_back("k = 0: D(U_0) = " + demo.d_u0.str() + (demo.d_s > demo.d_u0 ? " < D(S)" : " >= D(S)"));

    for (std::size_t k = 1; k <= max_k; ++k) {
        const Scalar v = evaluate(family_u(k), measure, limits).value;
        demo.scanned.push_back({k, v});
        if (demo.d_s > v) {
            demo.minimal_k = k;
            demo.d_uk = v;
            break;
        }
    }
    if (!demo.minimal_k) {
        demo.ledger.push_back("no k <= " + std::to_string(max_k) + " with D(S) > D(U_k)");
        return demo;
    }
    const std::size_t k = *demo.minimal_k;
    const std::string uk = "U_" + std::to_string(k);
    demo.ledger.push_back("minimal k = " + std::to_string(k) + ": D(S) = " + demo.d_s.str() + " > D(" + uk +
                          ") = " + demo.d_uk.str());

    // Pad the second point with k - 1 copies; the apex (index 2) is the special vertex.
    const DistanceMatrix s_pad = pad_with_copies(s, 1, k - 1);
    const DistanceMatrix u_pad = pad_with_copies(family_u(k), 1, k - 1);
    try {
        const Scalar ds_pad = evaluate(s_pad, measure, limits).value;
        const Scalar du_pad = evaluate(u_pad, measure, limits).value;
        demo.padding_preserves = ds_pad == demo.d_s && du_pad == demo.d_uk;
        demo.ledger.push_back("padding with " + std::to_string(k - 1) + " copies of the second point: D(S') = " +
                              ds_pad.str() + ", D(" + uk + "') = " + du_pad.str() +
                              (demo.padding_preserves ? " (both unchanged)" : " (CHANGED)"));
    } catch (const std::exception& e) {
        demo.ledger.push_back(std::string("padded sets could not be scored: ") + e.what());
    }

    const std::size_t apex = 2;
    const std::size_t size = s_pad.size();
    bool same_base = true;
    Scalar lambda_s(0), lambda_u(0);
    for (std::size_t i = 0; i < size; ++i) {
        if (i == apex) continue;
        lambda_s += s_pad(i, apex);
        lambda_u += u_pad(i, apex);
        for (std::size_t j = 0; j < size; ++j) {
            if (j != apex && s_pad(i, j) != u_pad(i, j)) same_base = false;
        }
    }
    const Scalar target = lambda_s / Scalar(static_cast<long>(size - 1));
    bool no_worse = true, some_better = false;
    std::string s_star, u_star;
    for (std::size_t i = 0; i < size; ++i) {
        if (i == apex) continue;
        const Scalar gs = (s_pad(i, apex) - target).abs();
        const Scalar gu = (u_pad(i, apex) - target).abs();
        if (gu > gs) no_worse = false;
        if (gu < gs) some_better = true;
        s_star += (s_star.empty() ? "" : ", ") + s_pad(i, apex).str();
        u_star += (u_star.empty() ? "" : ", ") + u_pad(i, apex).str();
    }
    demo.premises_hold = same_base && lambda_s == lambda_u && no_worse && some_better;
    demo.ledger.push_back("strong equidistance premises " + std::string(demo.premises_hold ? "hold" : "FAIL") +
                          ": lambda = " + lambda_s.str() + ", apex distances in S' (" + s_star + "), in " + uk +
                          "' (" + u_star + "), target lambda/" + std::to_string(size - 1) + " = " + target.str());
    demo.ledger.push_back("strong equidistance demands D(" + uk + "') > D(S'), i.e. D(" + uk + ") > D(S)");
    if (demo.contradiction()) {
        demo.ledger.push_back("contradiction: D(S) = " + demo.d_s.str() + " > " + demo.d_uk.str() + " = D(" + uk +
                              ")");
    }
    return demo;
}

// ---------------------------------------------------------------------------

namespace {

std::string join(const std::vector<Scalar>& values) {
    std::string out;
    for (const auto& v : values) out += (out.empty() ? "" : ",") + v.str();
    return out;
}

std::string decimal(const Scalar& v, int digits) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v.to_double();
    return os.str();
}

class CaseTable {
public:
    explicit CaseTable(std::filesystem::path dir) : dir_(std::move(dir)) {}

    template <class Fn>
    void add(std::string id, std::string description, std::string expected, Fn compute) {
        WorkedExample c{std::move(id), std::move(description), std::move(expected), {}, false};
        try {
            c.computed = compute();
            c.match = c.computed == c.expected;
        } catch (const std::exception& e) {
            c.computed = std::string("error: ") + e.what();
        }
        cases_.push_back(std::move(c));
    }

    /// Case that matches on a predicate rather than string equality.
    template <class Fn>
    void add_checked(std::string id, std::string description, std::string expected, Fn compute) {
        WorkedExample c{std::move(id), std::move(description), std::move(expected), {}, false};
        try {
            std::tie(c.computed, c.match) = compute();
        } catch (const std::exception& e) {
            c.computed = std::string("error: ") + e.what();
        }
        cases_.push_back(std::move(c));
    }

    DistanceMatrix csv(const std::string& name) const { return load_distance_csv(dir_ / name); }
    WeightedTree tree(const std::string& name) const { return load_tree(dir_ / name); }
    PartialGraph graph(const std::string& name) const { return load_partial_graph(dir_ / name); }
    PointCloud points(const std::string& name) const { return load_points(dir_ / name); }

    std::vector<WorkedExample> finish() { return std::move(cases_); }

private:
    std::filesystem::path dir_;
    std::vector<WorkedExample> cases_;
};

}  // namespace

std::vector<WorkedExample> reproduce_worked_examples(const std::filesystem::path& fixture_dir) {
    CaseTable t(fixture_dir);

    const std::vector<std::pair<std::vector<std::string>, std::string>> pd{
        {{"u", "v", "w"}, "14"}, {{"u", "v", "x"}, "22"}, {{"u", "x", "y"}, "20"},
        {{"u", "w", "y"}, "19"}, {{"u", "y"}, "19"}};
    for (const auto& [subset, expected] : pd) {
        std::string id = "pd.";
        for (const auto& v : subset) id += v;
        t.add(id, "phylogenetic diversity on the example tree", expected,
              [&, subset = subset] { return phylo_diversity(t.tree("fig1.tree"), subset).value.str(); });
    }
    t.add("pd.w-adds-nothing", "adding w to {u,y} leaves the score unchanged", "true", [&] {
        const auto tree = t.tree("fig1.tree");
        const std::vector<std::string> uy{"u", "y"}, uwy{"u", "w", "y"};
        return phylo_diversity(tree, uy).value == phylo_diversity(tree, uwy).value ? "true" : "false";
    });

    t.add("hamming.all-two", "four cube points {u,v,w,x} are pairwise at distance 2", "2", [&] {
        const auto m = from_points(t.points("table1.points"));
        const std::vector<std::size_t> idx{0, 1, 2, 3};
        const auto sub = restrict(m, idx);
        Scalar lo = sub(0, 1), hi = sub(0, 1);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) {
                lo = min(lo, sub(i, j));
                hi = max(hi, sub(i, j));
            }
        }
        return lo == hi ? lo.str() : lo.str() + ".." + hi.str();
    });
    t.add("hamming.same-matrix", "{u,v,w,x} and {u,v,w,y} have identical distances", "true", [&] {
        const auto m = from_points(t.points("table1.points"));
        const std::vector<std::size_t> a{0, 1, 2, 3}, b{0, 1, 2, 4};
        return restrict(m, a).entries() == restrict(m, b).entries() ? "true" : "false";
    });

    t.add("d-three.unit", "unit equilateral triangle under the three-point formula", "2",
          [] { return d_three(triangle(1, 1, 1)).value.str(); });
    t.add("d-f.degenerate", "sides (1, 1/2, 3/2) under the harmonic recursion", "51/22",
          [] { return d_f(triangle(1, Scalar(1, 2), Scalar(3, 2)), SuitableFunction::harmonic()).value.str(); });
    t.add("d-f.degenerate-beats-unit", "51/22 exceeds the unit triangle's 2", "true", [] {
        const auto f = SuitableFunction::harmonic();
        return d_f(triangle(1, Scalar(1, 2), Scalar(3, 2)), f).value > d_f(triangle(1, 1, 1), f).value ? "true"
                                                                                                         : "false";
    });
    t.add("d-f.harmonic-unit", "harmonic f on a unit triangle", "1",
          [] { return suitable_f(triangle(1, 1, 1), SuitableFunction::harmonic()).str(); });
    for (std::size_t n = 2; n <= 8; ++n) {
        t.add("d-f.ones-" + std::to_string(n), "all-ones matrix on " + std::to_string(n) + " points",
              std::to_string(n - 1), [n] {
                  std::vector<Scalar> upper(n * (n - 1) / 2, Scalar(1));
                  return d_f(DistanceMatrix::from_upper_triangle(default_labels(n), upper), SuitableFunction::harmonic())
                      .value.str();
              });
    }

    t.add("hybrid.S", "hybrid measure on the four-point set S", "97/30",
          [&] { return d_f_hybrid(t.csv("fig2_S.csv")).value.str(); });
    t.add("hybrid.S-prime", "hybrid measure on the unit tetrahedron", "3",
          [&] { return d_f_hybrid(t.csv("fig2_S_prime.csv")).value.str(); });
    t.add("hybrid.restricted", "S restricted to {s1,s2,s4}", "1,4/3,4/3", [&] {
        const std::vector<std::size_t> idx{0, 1, 3};
        const auto m = restrict(t.csv("fig2_S.csv"), idx);
        return join({m(0, 1), m(0, 2), m(1, 2)});
    });
    t.add("hybrid.rank", "S ranks above S' under the hybrid measure", "S", [&] {
        const auto a = d_f_hybrid(t.csv("fig2_S.csv")).value;
        const auto b = d_f_hybrid(t.csv("fig2_S_prime.csv")).value;
        return a > b ? "S" : (b > a ? "S'" : "tie");
    });

    t.add("merging.triangle", "merging measure on the (4,2,3) triangle", "153/26",
          [&] { return d_merging(t.csv("fig9.csv")).value.str(); });
    t.add("merging.triangle-weights", "merge probabilities p12, p13, p23", "3/13,6/13,4/13", [&] {
        std::vector<Scalar> p;
        for (const auto& w : merging_weights(t.csv("fig9.csv"))) p.push_back(w.p);
        return join(p);
    });
    t.add("merging.triangle-merged", "merged pair distances for S12, S13, S23", "5/2,7/2,3", [&] {
        const auto m = t.csv("fig9.csv");
        return join({merge_pair(m, 0, 1)(0, 1), merge_pair(m, 0, 2)(0, 1), merge_pair(m, 1, 2)(0, 1)});
    });
    t.add("merging.triangle-three-point", "three-point formula on the same triangle", "153/26",
          [&] { return d_three(t.csv("fig9.csv")).value.str(); });
    t.add_checked("merging.S-decimal", "merging measure on S against the rounded value", "2.838", [&] {
        const auto v = d_merging(t.csv("fig2_S.csv")).value;
        return std::pair{decimal(v, 7), std::fabs(v.to_double() - 2.838) < 5e-4};
    });
    t.add("merging.S-exact", "exact merging value on S", "2990633/1053740",
          [&] { return d_merging(t.csv("fig2_S.csv")).value.str(); });
    t.add("merging.S-prime", "merging measure on the unit tetrahedron", "3",
          [&] { return d_merging(t.csv("fig2_S_prime.csv")).value.str(); });
    t.add("merging.order", "unit tetrahedron scores above S", "true", [&] {
        return d_merging(t.csv("fig2_S_prime.csv")).value > d_merging(t.csv("fig2_S.csv")).value ? "true" : "false";
    });

    t.add("symmetry.G2", "fully labelled K4: automorphisms and orbits", "24 automorphisms, 1 orbit of 6", [&] {
        const auto p = edge_orbits(t.graph("fig5_G2.json"));
        return std::to_string(p.group_size) + " automorphisms, " + std::to_string(p.orbits.size()) + " orbit" +
               (p.orbits.size() == 1 ? "" : "s") + " of " + std::to_string(p.orbits.front().size());
    });
    t.add("symmetry.G1", "e1 and e2 in G1", "not symmetric", [&] {
        const auto g = t.graph("fig5_G1.json");
        return symmetric(g, g.find_label("e1"), g.find_label("e2")) ? "symmetric" : "not symmetric";
    });
    t.add("symmetry.average", "orbit averaging of the spiked tetrahedron", "4/3,4/3,4/3", [&] {
        const auto g = t.graph("fig8_Gp.json");
        const auto m = average_orbits(t.csv("fig8_GS.csv"), g);
        std::vector<Scalar> w;
        for (const auto& e : g.labeled_edges()) w.push_back(m(e.u, e.v));
        return join(w);
    });
    t.add("symmetry.average-orbits", "orbits of the vertex-star labelling", "1 orbit of 3", [&] {
        const auto p = edge_orbits(t.graph("fig8_Gp.json"));
        return std::to_string(p.orbits.size()) + " orbit of " + std::to_string(p.orbits.front().size());
    });
    t.add("symmetry.pair-move", "first symmetric pair move", "17/10,13/10", [&] {
        const auto g = t.graph("pairmove_Gp.json");
        const auto s = t.csv("fig8_GS.csv");
        const auto m = apply_pair_move(s, PairMove::toward_mean(s, g, Scalar(17, 10)), g);
        return join({m(0, 3), m(2, 3)});
    });
    t.add("symmetry.pair-move-second", "second move, distances from s4 to s1, s2, s3", "7/5,13/10,13/10", [&] {
        const auto g = t.graph("pairmove2_Gp.json");
        const auto s = t.csv("pairmove_T.csv");
        const auto m = apply_pair_move(s, PairMove::toward_mean(s, g, Scalar(7, 5)), g);
        return join({m(0, 3), m(1, 3), m(2, 3)});
    });

    return t.finish();
}

bool AuditReport::ok() const {
    return std::all_of(sections.begin(), sections.end(), [](const AxiomSection& s) { return s.satisfied(); }) &&
           std::all_of(cases.begin(), cases.end(), [](const WorkedExample& c) { return c.match; });
}

AuditReport run_audit(const AuditRequest& request, const AuditConfig& cfg) {
    if (request.measure.needs_tree()) throw InputError("phylo needs a tree and cannot be audited on random metrics");
    if (cfg.instances == 0) throw InputError("instances must be at least 1");
    if (cfg.n_values.empty()) throw InputError("no set sizes configured");
    for (std::size_t n : cfg.n_values) {
        if (n < 2) throw InputError("set sizes must be at least 2");
    }
    AuditReport report;
    report.config = cfg;
    report.measure = request.measure.name();
    for (Axiom axiom : request.axioms) report.sections.push_back(audit_axiom(request.measure, axiom, cfg));
    if (request.continuity) {
        Rng rng = section_rng(cfg.seed, "continuity-base");
        const DistanceMatrix base = exact_copy(random_metric(4, MetricEnsemble::shortest_path_repair, rng));
        try {
            report.continuity = probe_continuity(request.measure, base, cfg);
        } catch (const std::invalid_argument&) {
            // measure undefined on four points (d_three)
            report.continuity = probe_continuity(request.measure, family_u(1), cfg);
        }
    }
    if (request.fixture_dir) report.cases = reproduce_worked_examples(*request.fixture_dir);
    return report;
}

}  // namespace diversity
