#include "diversity/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "diversity/errors.hpp"

namespace diversity {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool skippable(const std::string& line) {
    const std::string t = trim(line);
    return t.empty() || t.front() == '#';
}

Scalar parse_cell(const std::string& text, const std::string& source, std::size_t line, const ReadOptions& options) {
    try {
        return Scalar::parse(text, options.allow_float);
    } catch (const std::exception& e) {
        throw ParseError(source, line, e.what());
    }
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return in;
}

}  // namespace

DistanceMatrix read_distance_csv(std::istream& in, const std::string& source, const ReadOptions& options) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        labels = split_csv(line);
        break;
    }
    if (labels.empty()) throw ParseError(source, line_no, "missing label row");
    for (const auto& l : labels) {
        if (l.empty()) throw ParseError(source, line_no, "empty label");
    }

    const std::size_t n = labels.size();
    std::vector<Scalar> entries(n * n);
    std::size_t row = 0;
    bool lower = false;  // layout is fixed by the first data row
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        if (row == n) throw ParseError(source, line_no, "more rows than labels");
        const auto cells = split_csv(line);
        if (row == 0) lower = cells.size() == 1;
        const std::size_t expected = lower ? row + 1 : n;
        if (cells.size() != expected) {
            throw ParseError(source, line_no,
                             "row " + std::to_string(row + 1) + " has " + std::to_string(cells.size()) +
                                 " entries; expected " + std::to_string(expected));
        }
        for (std::size_t j = 0; j < expected; ++j) {
            Scalar value = parse_cell(cells[j], source, line_no, options);
            if (lower) entries[j * n + row] = value;
            entries[row * n + j] = std::move(value);
        }
        ++row;
    }
    if (row != n) {
        throw ParseError(source, line_no, "expected " + std::to_string(n) + " rows, found " + std::to_string(row));
    }
    try {
        return DistanceMatrix(std::move(labels), std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw ParseError(source, 1, e.what());
    }
}

DistanceMatrix load_distance_csv(const std::filesystem::path& path, const ReadOptions& options) {
    auto in = open(path);
    return read_distance_csv(in, path.string(), options);
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& m) {
    const auto& labels = m.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << labels[i];
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) out << (j ? "," : "") << m(i, j).str();
        out << '\n';
    }
}

WeightedTree read_tree(std::istream& in, const std::string& source, const ReadOptions& options) {
    std::vector<WeightedTree::Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> parts;
        for (std::string part; fields >> part;) parts.push_back(part);
        if (parts.empty()) continue;
        if (parts.size() != 3) throw ParseError(source, line_no, "expected 'u v w'");
        edges.push_back({parts[0], parts[1], parse_cell(parts[2], source, line_no, options)});
    }
    if (edges.empty()) throw ParseError(source, line_no, "tree has no edges");
    return WeightedTree(std::move(edges));
}

WeightedTree load_tree(const std::filesystem::path& path, const ReadOptions& options) {
    auto in = open(path);
    return read_tree(in, path.string(), options);
}

void write_tree(std::ostream& out, const WeightedTree& tree) {
    for (const auto& e : tree.edges()) out << e.u << ' ' << e.v << ' ' << e.weight.str() << '\n';
}

PointCloud read_points(std::istream& in, const std::string& source, const ReadOptions& options) {
    PointCloud cloud;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto cells = split_csv(line);
        if (!have_header) {
            if (cells.size() != 2 || cells[0] != "metric") {
                throw ParseError(source, line_no, "expected header 'metric,hamming' or 'metric,euclidean'");
            }
            if (cells[1] == "hamming") {
                cloud.metric = PointMetric::hamming;
            } else if (cells[1] == "euclidean") {
                cloud.metric = PointMetric::euclidean;
            } else {
                throw ParseError(source, line_no, "unknown metric '" + cells[1] + "'");
            }
            have_header = true;
            continue;
        }
        if (cells.size() < 2 || cells[0].empty()) throw ParseError(source, line_no, "expected 'label,x1,...'");
        std::vector<Scalar> point;
        for (std::size_t c = 1; c < cells.size(); ++c) point.push_back(parse_cell(cells[c], source, line_no, options));
        if (!cloud.points.empty() && point.size() != cloud.points.front().size()) {
            throw ParseError(source, line_no, "dimension mismatch");
        }
        cloud.labels.push_back(cells[0]);
        cloud.points.push_back(std::move(point));
    }
    if (!have_header) throw ParseError(source, line_no, "missing metric header");
    if (cloud.points.empty()) throw ParseError(source, line_no, "no points");
    return cloud;
}

PointCloud load_points(const std::filesystem::path& path, const ReadOptions& options) {
    auto in = open(path);
    return read_points(in, path.string(), options);
}

void write_points(std::ostream& out, const PointCloud& cloud) {
    out << "metric," << (cloud.metric == PointMetric::hamming ? "hamming" : "euclidean") << '\n';
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        out << cloud.labels[i];
        for (const auto& x : cloud.points[i]) out << ',' << x.str();
        out << '\n';
    }
}

PartialGraph read_partial_graph(std::istream& in, const std::string& source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(source + ": " + e.what());
    }
    try {
        const auto n = doc.at("n").get<std::size_t>();
        std::vector<PartialGraph::WeightedEdge> weighted;
        for (const auto& e : doc.value("weighted", nlohmann::json::array())) {
            if (!e.is_array() || e.size() != 3) throw InputError(source + ": weighted edge must be [i, j, w]");
            const auto& w = e[2];
            Scalar weight = w.is_string() ? Scalar::parse(w.get<std::string>())
                                          : Scalar(w.get<long>());
            weighted.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), std::move(weight)});
        }
        std::vector<PartialGraph::LabeledEdge> labeled;
        for (const auto& e : doc.value("labeled", nlohmann::json::array())) {
            if (!e.is_array() || e.size() != 3) throw InputError(source + ": labelled edge must be [i, j, label]");
            labeled.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<std::string>()});
        }
        return PartialGraph(n, std::move(weighted), std::move(labeled));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(source + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(source + ": " + e.what());
    }
}

PartialGraph load_partial_graph(const std::filesystem::path& path) {
    auto in = open(path);
    return read_partial_graph(in, path.string());
}

void write_partial_graph(std::ostream& out, const PartialGraph& g) {
    nlohmann::ordered_json doc;
    doc["n"] = g.size();
    doc["weighted"] = nlohmann::ordered_json::array();
    for (const auto& e : g.weighted_edges()) doc["weighted"].push_back({e.u, e.v, e.weight.str()});
    doc["labeled"] = nlohmann::ordered_json::array();
    for (const auto& e : g.labeled_edges()) doc["labeled"].push_back({e.u, e.v, e.label});
    out << doc.dump(2) << '\n';
}

}  // namespace diversity
