// diversity: score, rank and audit diversity measures on finite metric spaces.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "diversity/audit.hpp"
#include "diversity/errors.hpp"
#include "diversity/io.hpp"
#include "diversity/measures.hpp"
#include "diversity/metric.hpp"
#include "diversity/serialize.hpp"
#include "diversity/symmetry.hpp"

namespace fs = std::filesystem;
using namespace diversity;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_assertion = 2;

struct Globals {
    std::string format = "json";
    std::uint64_t seed = 1;
    std::optional<std::size_t> max_n;
    bool decimal = false;
    bool allow_float = false;

    MeasureLimits limits() const {
        MeasureLimits l;
        if (max_n) {
            l.max_merging = *max_n;
            l.max_subset_recursion = *max_n;
        }
        return l;
    }
    SymmetryOptions symmetry() const {
        SymmetryOptions s;
        if (max_n) s.max_n = *max_n;
        return s;
    }
    bool json() const { return format == "json"; }
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        out.push_back(first == std::string::npos ? "" : item.substr(first, last - first + 1));
    }
    return out;
}

std::vector<std::string> parse_subset(const std::string& text) {
    if (text.empty()) return {};
    auto out = split(text, ',');
    for (const auto& label : out) {
        if (label.empty()) throw InputError("empty label in subset '" + text + "'");
    }
    return out;
}

void require_metric(const DistanceMatrix& m, const std::string& source) {
    const auto result = validate(m);
    if (result.ok()) return;
    std::ostringstream os;
    os << source << " is not a pseudometric:";
    for (const auto& v : result.violations) {
        os << "\n  " << to_string(v.kind) << " at (";
        for (std::size_t i = 0; i < v.witness.size(); ++i) os << (i ? "," : "") << m.labels()[v.witness[i]];
        os << "), slack " << v.slack.str();
    }
    throw InputError(os.str());
}

/// Matrix or tree, chosen by extension.
struct Input {
    std::optional<WeightedTree> tree;
    std::optional<DistanceMatrix> matrix;
};

Input load_input(const std::string& path, const Globals& g) {
    const ReadOptions options{g.allow_float};
    const std::string ext = fs::path(path).extension().string();
    Input in;
    if (ext == ".tree") {
        in.tree = load_tree(path, options);
    } else if (ext == ".points") {
        in.matrix = from_points(load_points(path, options));
    } else {
        in.matrix = load_distance_csv(path, options);
        require_metric(*in.matrix, path);
    }
    return in;
}

void emit(const Globals& g, const Json& json, const std::string& text) {
    if (g.json()) {
        std::cout << json.dump(2) << '\n';
    } else {
        std::cout << text;
    }
}

fs::path default_fixtures() { return DIVERSITY_FIXTURE_DIR; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diversity measures on finite pseudometric spaces"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", g.seed, "Random seed for audits");
    app.add_option("--max-n", g.max_n, "Size bound for the recursive measures and the automorphism search");
    app.add_flag("--decimal", g.decimal, "Add a decimal rendering next to exact values");
    app.add_flag("--allow-float", g.allow_float, "Accept decimal numbers in input files (flagged inexact)");

    // score
    auto* score_cmd = app.add_subcommand("score", "Score one subset");
    std::string score_file, score_measure = "d-merging", score_subset;
    score_cmd->add_option("file", score_file, "Distance CSV, .tree or .points file")->required();
    score_cmd->add_option("--measure", score_measure, "Measure name");
    score_cmd->add_option("--subset", score_subset, "Comma-separated labels (default: all points)");

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "Rank several subsets");
    std::vector<std::string> rank_files;
    std::string rank_measure = "d-merging";
    std::vector<std::string> rank_subsets;
    rank_cmd->add_option("files", rank_files, "One input file, or several to rank whole sets")->required();
    rank_cmd->add_option("--measure", rank_measure, "Measure name");
    rank_cmd->add_option("--subsets", rank_subsets, "Subsets of a single file, separated by ';', labels by ','; may repeat");

    // audit
    auto* audit_cmd = app.add_subcommand("audit", "Property-check the axioms for a measure");
    std::string audit_measure = "d-merging", audit_axioms = "all", audit_ensemble = "mixed", audit_n = "3,4,5";
    std::size_t audit_instances = 200;
    std::string audit_out, audit_summary, audit_fixtures, audit_evidence;
    bool no_cases = false, no_continuity = false;
    audit_cmd->add_option("--measure", audit_measure, "Measure name");
    audit_cmd->add_option("--axioms", audit_axioms, "Comma-separated axiom ids (1,2,4,5,5a,5b) or all");
    audit_cmd->add_option("--instances", audit_instances, "Random instances per axiom");
    audit_cmd->add_option("--n", audit_n, "Comma-separated set sizes");
    audit_cmd->add_option("--ensemble", audit_ensemble, "euclidean, shortest-path or mixed");
    audit_cmd->add_option("--out", audit_out, "Write the JSON report here (text summary goes to stdout)");
    audit_cmd->add_option("--summary", audit_summary, "Also write the text summary to this file");
    audit_cmd->add_option("--fixtures", audit_fixtures, "Fixture directory for the worked examples");
    audit_cmd->add_option("--evidence-dir", audit_evidence, "Write every violation's matrices here");
    audit_cmd->add_flag("--no-cases", no_cases, "Skip the worked examples");
    audit_cmd->add_flag("--no-continuity", no_continuity, "Skip the continuity probe");

    // symmetry
    auto* sym_cmd = app.add_subcommand("symmetry", "Edge orbits of a partial graph, orbit averaging, pair moves");
    std::string sym_file, sym_average, sym_move_source, sym_move_to;
    bool sym_orbits = false;
    sym_cmd->add_option("graph", sym_file, "Partial graph JSON")->required();
    auto* orbits_flag = sym_cmd->add_flag("--orbits", sym_orbits, "Print automorphisms and edge orbits (default)");
    auto* average_opt =
        sym_cmd->add_option("--average", sym_average, "Average the labelled edges of this source matrix over orbits");
    auto* move_opt = sym_cmd->add_option("--move", sym_move_source, "Source matrix for a symmetric pair move");
    sym_cmd->add_option("--to", sym_move_to, "New weight of the first labelled edge for --move")->needs(move_opt);
    orbits_flag->excludes(average_opt)->excludes(move_opt);
    average_opt->excludes(move_opt);

    // demo
    auto* demo_cmd = app.add_subcommand("demo", "Worked demonstrations");
    bool demo_equidistance = false;
    std::string demo_measure = "d-merging";
    std::size_t demo_max_k = 200;
    demo_cmd->add_flag("--strong-equidistance,--theorem2", demo_equidistance, "Strong equidistance contradiction")
        ->required();
    demo_cmd->add_option("--measure", demo_measure, "Measure name");
    demo_cmd->add_option("--max-k", demo_max_k, "Largest k to scan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_input;
    }

    try {
        if (*score_cmd) {
            const MeasureKind kind = MeasureKind::parse(score_measure);
            const Input in = load_input(score_file, g);
            const auto subset = parse_subset(score_subset);
            const DiversityScore s = in.tree ? score(*in.tree, subset, kind, g.limits())
                                             : score(*in.matrix, subset, kind, g.limits());
            emit(g, to_json(s, g.decimal), to_text(s, g.decimal));
        } else if (*rank_cmd) {
            const MeasureKind kind = MeasureKind::parse(rank_measure);
            std::vector<RankEntry> ranking;
            if (rank_files.size() == 1) {
                if (rank_subsets.empty()) throw InputError("rank of a single file needs --subsets");
                const Input in = load_input(rank_files.front(), g);
                std::vector<std::vector<std::string>> subsets;
                for (const auto& group : rank_subsets)
                    for (const auto& part : split(group, ';')) subsets.push_back(parse_subset(part));
                ranking = in.tree ? rank(*in.tree, subsets, kind, g.limits())
                                  : rank(*in.matrix, subsets, kind, g.limits());
            } else {
                if (!rank_subsets.empty()) throw InputError("--subsets applies to a single file only");
                std::vector<DiversityScore> scores;
                for (const auto& file : rank_files) {
                    const Input in = load_input(file, g);
                    if (in.tree) throw InputError("multi-file rank takes distance or point files, not trees");
                    scores.push_back(score(*in.matrix, {}, kind, g.limits()));
                    scores.back().notes.push_back("file " + fs::path(file).filename().string());
                }
                ranking = rank_scores(std::move(scores));
            }
            emit(g, to_json(ranking, g.decimal), to_text(ranking, g.decimal));
        } else if (*audit_cmd) {
            AuditRequest request{MeasureKind::parse(audit_measure), parse_axioms(audit_axioms), !no_continuity, {}};
            AuditConfig cfg;
            cfg.seed = g.seed;
            cfg.instances = audit_instances;
            cfg.ensemble = parse_ensemble(audit_ensemble);
            cfg.limits = g.limits();
            cfg.symmetry = g.symmetry();
            cfg.n_values.clear();
            for (const auto& n : split(audit_n, ',')) {
                try {
                    cfg.n_values.push_back(std::stoul(n));
                } catch (const std::exception&) {
                    throw InputError("bad set size '" + n + "'");
                }
            }
            if (!audit_evidence.empty()) cfg.evidence_dir = audit_evidence;
            if (!no_cases) {
                const fs::path dir = audit_fixtures.empty() ? default_fixtures() : fs::path(audit_fixtures);
                if (!fs::is_directory(dir)) throw InputError("fixture directory " + dir.string() + " not found");
                request.fixture_dir = dir;
            }
            const AuditReport report = run_audit(request, cfg);
            const std::string summary = to_text(report);
            if (!audit_out.empty()) {
                std::ofstream(audit_out) << to_json(report).dump(2) << '\n';
                std::cout << summary;
            } else {
                emit(g, to_json(report), summary);
            }
            if (!audit_summary.empty()) std::ofstream(audit_summary) << summary;
            if (!report.ok()) return exit_assertion;
        } else if (*sym_cmd) {
            const PartialGraph graph = load_partial_graph(sym_file);
            const SymmetryOptions opts = g.symmetry();
            const ReadOptions read{g.allow_float};
            if (!sym_average.empty()) {
                const DistanceMatrix source = load_distance_csv(sym_average, read);
                require_metric(source, sym_average);
                const DistanceMatrix out = average_orbits(source, graph, opts);
                emit(g, to_json(out), to_text(out));
            } else if (!sym_move_source.empty()) {
                if (sym_move_to.empty()) throw InputError("--move needs --to");
                const DistanceMatrix source = load_distance_csv(sym_move_source, read);
                require_metric(source, sym_move_source);
                Scalar to;
                try {
                    to = Scalar::parse(sym_move_to, g.allow_float);
                } catch (const std::exception& e) {
                    throw InputError(std::string("--to: ") + e.what());
                }
                const DistanceMatrix out =
                    apply_pair_move(source, PairMove::toward_mean(source, graph, to), graph, opts);
                emit(g, to_json(out), to_text(out));
            } else {
                SymmetrySummary summary{&graph, edge_orbits(graph, opts), automorphisms(graph, opts)};
                emit(g, to_json(summary), to_text(summary));
            }
        } else if (*demo_cmd) {
            const MeasureKind kind = MeasureKind::parse(demo_measure);
            const EquidistanceDemo demo = equidistance_demo(kind, demo_max_k, g.limits());
            emit(g, to_json(demo), to_text(demo));
            if (!demo.contradiction()) return exit_assertion;
        }
    } catch (const TransformViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_assertion;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_assertion;
    }
    return exit_ok;
}
