#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diversity/audit.hpp"
#include "diversity/errors.hpp"
#include "diversity/io.hpp"
#include "diversity/measures.hpp"
#include "diversity/serialize.hpp"
#include "diversity/symmetry.hpp"

namespace py = pybind11;
using namespace diversity;

namespace {

using Rows = std::vector<std::vector<std::string>>;
using Rational = std::pair<std::string, std::string>;
using WeightedList = std::vector<std::tuple<std::size_t, std::size_t, std::string>>;
using LabeledList = std::vector<std::tuple<std::size_t, std::size_t, std::string>>;

Rational rational(const Scalar& s) { return {s.numerator_str(), s.denominator_str()}; }

DistanceMatrix matrix(const std::vector<std::string>& labels, const Rows& rows, bool allow_float) {
    const std::size_t n = labels.size();
    if (rows.size() != n) throw InputError("need one row per label");
    std::vector<Scalar> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) throw InputError("every row needs one entry per label");
        for (const auto& cell : row) entries.push_back(Scalar::parse(cell, allow_float));
    }
    return DistanceMatrix(labels, std::move(entries));
}

Rows rows_of(const DistanceMatrix& m) {
    Rows out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out[i].push_back(m(i, j).str());
    return out;
}

PartialGraph graph(std::size_t n, const WeightedList& weighted, const LabeledList& labeled) {
    std::vector<PartialGraph::WeightedEdge> w;
    for (const auto& [u, v, x] : weighted) w.push_back({u, v, Scalar::parse(x)});
    std::vector<PartialGraph::LabeledEdge> l;
    for (const auto& [u, v, label] : labeled) l.push_back({u, v, label});
    return PartialGraph(n, std::move(w), std::move(l));
}

}  // namespace

PYBIND11_MODULE(_pydiversity, m) {
    m.doc() = "Exact diversity measures on finite pseudometric spaces (low-level layer)";
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DepthLimitExceeded>(m, "DepthLimitExceeded", PyExc_ValueError);

    m.def(
        "score",
        [](const std::vector<std::string>& labels, const Rows& rows, const std::string& measure,
           const std::vector<std::string>& subset, bool allow_float) {
            const auto dm = matrix(labels, rows, allow_float);
            const auto s = score(dm, subset, MeasureKind::parse(measure));
            return std::make_tuple(rational(s.value), s.exact, s.notes);
        },
        py::arg("labels"), py::arg("rows"), py::arg("measure"), py::arg("subset"), py::arg("allow_float") = false);

    m.def("phylo",
          [](const std::vector<std::tuple<std::string, std::string, std::string>>& edges,
             const std::vector<std::string>& subset) {
              std::vector<WeightedTree::Edge> tree_edges;
              for (const auto& [u, v, w] : edges) tree_edges.push_back({u, v, Scalar::parse(w)});
              return rational(phylo_diversity(WeightedTree(std::move(tree_edges)), subset).value);
          });

    m.def("validate", [](const std::vector<std::string>& labels, const Rows& rows) {
        std::vector<std::tuple<std::string, std::vector<std::size_t>, std::string>> out;
        for (const auto& v : validate(matrix(labels, rows, true)).violations)
            out.emplace_back(to_string(v.kind), v.witness, v.slack.str());
        return out;
    });

    m.def("load_distance_csv", [](const std::string& path, bool allow_float) {
        const auto dm = load_distance_csv(path, ReadOptions{allow_float});
        return std::make_pair(dm.labels(), rows_of(dm));
    }, py::arg("path"), py::arg("allow_float") = false);

    m.def("edge_orbits", [](std::size_t n, const WeightedList& weighted, const LabeledList& labeled) {
        const auto g = graph(n, weighted, labeled);
        const auto p = edge_orbits(g);
        std::vector<std::vector<std::string>> orbits;
        for (const auto& orbit : p.orbits) {
            orbits.emplace_back();
            for (std::size_t e : orbit) orbits.back().push_back(g.labeled_edges()[e].label);
        }
        return std::make_pair(p.group_size, orbits);
    });

    m.def("average_orbits", [](const std::vector<std::string>& labels, const Rows& rows, const WeightedList& weighted,
                               const LabeledList& labeled) {
        return rows_of(average_orbits(matrix(labels, rows, false), graph(labels.size(), weighted, labeled)));
    });

    m.def("equidistance_demo", [](const std::string& measure, std::size_t max_k) {
        return to_json(equidistance_demo(MeasureKind::parse(measure), max_k)).dump();
    }, py::arg("measure"), py::arg("max_k") = 200);

    m.def(
        "audit",
        [](const std::string& measure, const std::string& axioms, std::size_t instances, std::uint64_t seed,
           const std::vector<std::size_t>& n_values, bool continuity) {
            AuditConfig cfg;
            cfg.instances = instances;
            cfg.seed = seed;
            cfg.n_values = n_values;
            AuditRequest req{MeasureKind::parse(measure), parse_axioms(axioms), continuity, std::nullopt};
            return to_json(run_audit(req, cfg)).dump();
        },
        py::arg("measure"), py::arg("axioms"), py::arg("instances"), py::arg("seed"), py::arg("n_values"),
        py::arg("continuity"));

    m.def("worked_examples", [](const std::string& fixture_dir) {
        return to_json(reproduce_worked_examples(fixture_dir)).dump();
    });
}
