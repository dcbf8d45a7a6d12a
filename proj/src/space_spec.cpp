#include "cbb/space_spec.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cbb/metric_space.hpp"
#include "cbb/model_plane.hpp"

namespace cbb {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

// Numeric literal with an optional "pi" suffix: "1.5pi" -> 1.5*pi.
double parse_length(const std::string& text) {
    std::string t = trim(text);
    double factor = 1.0;
    if (t.size() >= 2 && t.substr(t.size() - 2) == "pi") {
        factor = pi;
        t = t.substr(0, t.size() - 2);
        if (t.empty()) return pi;
    }
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw validation_error("bad numeric value '" + text + "'");
    return v * factor;
}

std::string format_number(double v) {
    std::ostringstream out;
    out << std::setprecision(15) << v;
    return out.str();
}

}  // namespace

SpaceSpec SpaceSpec::parse(const std::string& text) {
    SpaceSpec spec;
    const auto colon = text.find(':');
    spec.type = trim(colon == std::string::npos ? text : text.substr(0, colon));
    if (spec.type.empty()) throw validation_error("space spec needs a type");
    if (spec.type == "hemisphere") spec.incomplete = true;

    if (colon == std::string::npos) return spec;
    for (const auto& raw : split(text.substr(colon + 1), ',')) {
        const std::string tok = trim(raw);
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            if (tok == "open" || tok == "incomplete")
                spec.incomplete = true;
            else if (tok == "complete")
                spec.incomplete = false;
            else if (tok == "canonical")
                spec.canonical = true;
            else
                throw validation_error("unknown space-spec flag '" + tok + "'");
            continue;
        }
        const std::string key = trim(tok.substr(0, eq));
        const std::string val = trim(tok.substr(eq + 1));
        if (key == "r" || key == "radius")
            spec.radius = parse_length(val);
        else if (key == "angle" || key == "total_angle")
            spec.total_angle = parse_length(val);
        else if (key == "n")
            spec.n = static_cast<int>(std::stol(val));
        else if (key == "seed")
            spec.seed = std::stoull(val);
        else if (key == "min_sep")
            spec.min_sep = parse_length(val);
        else if (key == "canonical")
            spec.canonical = (val == "1" || val == "true");
        else if (key == "legs" || key == "leg_points")
            spec.leg_points = static_cast<int>(std::stol(val));
        else if (key == "leg_length")
            spec.leg_length = parse_length(val);
        else if (key == "edges") {
            // a-b:1|b-c:2.5
            for (const auto& etok : split(val, '|')) {
                const auto dash = etok.find('-');
                const auto colon2 = etok.find(':', dash == std::string::npos ? 0 : dash);
                if (dash == std::string::npos)
                    throw validation_error("bad edge '" + etok + "'");
                GraphEdge e;
                e.from = trim(etok.substr(0, dash));
                e.to = trim(colon2 == std::string::npos ? etok.substr(dash + 1)
                                                        : etok.substr(dash + 1, colon2 - dash - 1));
                e.weight = colon2 == std::string::npos ? 1.0 : parse_length(etok.substr(colon2 + 1));
                spec.edges.push_back(e);
            }
        } else {
            throw validation_error("unknown space-spec key '" + key + "'");
        }
    }
    return spec;
}

std::string SpaceSpec::to_string() const {
    std::ostringstream out;
    out << type << ':';
    bool first = true;
    auto emit = [&](const std::string& piece) {
        if (!first) out << ',';
        out << piece;
        first = false;
    };
    if (type == "tripod") {
        emit("legs=" + std::to_string(leg_points));
        emit("leg_length=" + format_number(leg_length));
    } else if (type == "graph") {
        std::string es = "edges=";
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (i) es += '|';
            es += edges[i].from + "-" + edges[i].to + ":" + format_number(edges[i].weight);
        }
        emit(es);
    } else {
        emit("r=" + format_number(radius));
        if (type == "cone") emit("angle=" + format_number(total_angle));
        emit("n=" + std::to_string(n));
        emit("seed=" + std::to_string(seed));
        if (incomplete && type != "hemisphere") emit("incomplete");
        if (canonical) emit("canonical");
        if (min_sep > 0) emit("min_sep=" + format_number(min_sep));
    }
    return out.str();
}

// --------------------------------------------------------------- CSV I/O

MetricSpace load_distance_matrix(std::istream& in, double tolerance, double epsilon_override) {
    std::string header;
    if (!std::getline(in, header)) throw validation_error("empty distance-matrix input");
    std::vector<std::string> names;
    for (auto& tok : split(header, ',')) {
        const std::string id = trim(tok);
        if (!id.empty()) names.push_back(id);
    }
    const int n = static_cast<int>(names.size());
    if (n < 2) throw validation_error("distance matrix needs at least two points");

    Eigen::MatrixXd m(n, n);
    std::string line;
    int row = 0;
    while (row < n && std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (static_cast<int>(cells.size()) != n)
            throw validation_error("row " + std::to_string(row + 1) + " has " +
                                   std::to_string(cells.size()) + " cells, expected " +
                                   std::to_string(n));
        for (int j = 0; j < n; ++j) {
            try {
                m(row, j) = std::stod(trim(cells[j]));
            } catch (const std::exception&) {
                throw validation_error("unparseable cell in row " + std::to_string(row + 1));
            }
            if (m(row, j) < 0.0)
                throw validation_error("negative entry at (" + names[row] + ", " + names[j] + ")");
        }
        ++row;
    }
    if (row != n) throw validation_error("expected " + std::to_string(n) + " body rows");
    return MetricSpace::from_matrix(std::move(names), std::move(m), tolerance, epsilon_override);
}

MetricSpace load_distance_matrix_file(const std::string& path, double tolerance,
                                      double epsilon_override) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open '" + path + "'");
    return load_distance_matrix(in, tolerance, epsilon_override);
}

void write_distance_matrix(std::ostream& out, const MetricSpace& space) {
    const int n = space.size();
    for (int j = 0; j < n; ++j) out << (j ? "," : "") << space.ids[j];
    out << '\n';
    out << std::setprecision(17);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out << (j ? "," : "") << space.dist(i, j);
        out << '\n';
    }
}

}  // namespace cbb
