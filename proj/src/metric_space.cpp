#include "cbb/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "cbb/model_plane.hpp"
#include "cbb/rng.hpp"

namespace cbb {

namespace {

// Signed angular difference on a cone of the given total angle, wrapped to
// (-total/2, total/2].
double cone_wrap(double dphi, double total) {
    dphi -= total * std::floor(dphi / total);
    if (dphi > 0.5 * total) dphi -= total;
    return dphi;
}

double sphere_distance(const Eigen::Vector3d& u, const Eigen::Vector3d& v, double radius) {
    return radius * std::acos(std::clamp(u.dot(v), -1.0, 1.0));
}

double minkowski(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    return u(0) * v(0) - u(1) * v(1) - u(2) * v(2);
}

double hyperbolic_distance(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    return std::acosh(std::max(1.0, minkowski(u, v)));
}

double cone_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double total) {
    const double r1 = a(0), r2 = b(0);
    if (r1 == 0.0 || r2 == 0.0) return r1 + r2;
    const double delta = std::abs(cone_wrap(b(1) - a(1), total));
    if (delta >= pi) return r1 + r2;
    return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(delta)));
}

Eigen::Vector3d slerp(const Eigen::Vector3d& u, const Eigen::Vector3d& v, double f) {
    const double omega = std::acos(std::clamp(u.dot(v), -1.0, 1.0));
    if (omega < 1e-14) return u;
    const double s = std::sin(omega);
    return (std::sin((1.0 - f) * omega) / s) * u + (std::sin(f * omega) / s) * v;
}

// Point at hyperbolic arclength s from u toward v on the hyperboloid.
Eigen::Vector3d hyperboloid_walk(const Eigen::Vector3d& u, const Eigen::Vector3d& v, double s) {
    const double d = hyperbolic_distance(u, v);
    if (d < 1e-14) return u;
    const Eigen::Vector3d dir = (v - std::cosh(d) * u) / std::sinh(d);
    return std::cosh(s) * u + std::sinh(s) * dir;
}

std::string pad_index(int i, int width) {
    std::string s = std::to_string(i);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

}  // namespace

// ---------------------------------------------------------------- geodesics

DiscreteGeodesic DiscreteGeodesic::reversed() const {
    DiscreteGeodesic out;
    out.from = to;
    out.to = from;
    out.length = length;
    out.error_bound = error_bound;
    out.vertices.assign(vertices.rbegin(), vertices.rend());
    out.params.reserve(params.size());
    for (auto it = params.rbegin(); it != params.rend(); ++it)
        out.params.push_back(length - *it);
    if (!out.params.empty()) out.params.front() = 0.0;
    return out;
}

DiscreteGeodesic DiscreteGeodesic::subsegment(std::size_t i, std::size_t j) const {
    if (i > j) return subsegment(j, i).reversed();
    if (j >= vertices.size()) throw std::invalid_argument("subsegment: index out of range");
    DiscreteGeodesic out;
    out.vertices.assign(vertices.begin() + i, vertices.begin() + j + 1);
    out.params.reserve(j - i + 1);
    const double base = params[i];
    for (std::size_t k = i; k <= j; ++k) out.params.push_back(params[k] - base);
    out.from = out.vertices.front();
    out.to = out.vertices.back();
    out.length = out.params.back();
    out.error_bound = error_bound;
    return out;
}

std::size_t DiscreteGeodesic::nearest_vertex(double s) const {
    const auto it = std::lower_bound(params.begin(), params.end(), s);
    if (it == params.begin()) return 0;
    if (it == params.end()) return params.size() - 1;
    const std::size_t hi = it - params.begin();
    return (s - params[hi - 1] <= params[hi] - s) ? hi - 1 : hi;
}

// ------------------------------------------------------------- MetricSpace

SpacePoint MetricSpace::point(int i) const {
    if (i < 0 || i >= size()) throw std::invalid_argument("point index out of range");
    return SpacePoint(i, coords.col(i));
}

int MetricSpace::index_of(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
        if (ids[i] == id) return i;
    return -1;
}

double MetricSpace::distance(const SpacePoint& x, const SpacePoint& y) const {
    if (x.id >= 0 && y.id >= 0) return dist(x.id, y.id);
    switch (backend) {
        case Backend::euclidean:
            return (x.chart - y.chart).head<2>().norm();
        case Backend::sphere:
            return sphere_distance(x.chart, y.chart, radius);
        case Backend::hyperbolic:
            return hyperbolic_distance(x.chart, y.chart);
        case Backend::cone:
            return cone_distance(x.chart, y.chart, total_angle);
        default:
            throw std::invalid_argument("off-sample points need an analytic backend");
    }
}

std::vector<int> MetricSpace::points_within(const SpacePoint& center, double r) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (distance(center, point(i)) <= r) out.push_back(i);
    return out;
}

double MetricSpace::median_nn_distance() const {
    const int n = size();
    if (n < 2) return 0.0;
    std::vector<double> nn(n, infinity);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) nn[i] = std::min(nn[i], dist(i, j));
    std::sort(nn.begin(), nn.end());
    return nn[n / 2];
}

void MetricSpace::validate(double tolerance) const {
    const int n = size();
    if (static_cast<int>(tags.size()) != n || dist.rows() != n || dist.cols() != n)
        throw validation_error("inconsistent sample arrays");
    {
        std::set<std::string> seen(ids.begin(), ids.end());
        if (static_cast<int>(seen.size()) != n)
            throw validation_error("duplicate point identifiers");
    }
    for (int i = 0; i < n; ++i) {
        if (dist(i, i) != 0.0)
            throw validation_error("nonzero diagonal at " + ids[i]);
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(dist(i, j) - dist(j, i)) > tolerance)
                throw validation_error("asymmetry at (" + ids[i] + ", " + ids[j] + ")");
            if (!(dist(i, j) > 0.0))
                throw validation_error("nonpositive distance at (" + ids[i] + ", " + ids[j] + ")");
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (dist(i, k) > dist(i, j) + dist(j, k) + tolerance)
                    throw validation_error("triangle inequality fails at (" + ids[i] + ", " +
                                           ids[j] + ", " + ids[k] + ")");
            }
        }
}

// ------------------------------------------------------------- generation

namespace {

void fill_distances(MetricSpace& s) {
    const int n = s.size();
    s.dist = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = 0.0;
            switch (s.backend) {
                case Backend::euclidean:
                    d = (s.coords.col(i) - s.coords.col(j)).head<2>().norm();
                    break;
                case Backend::sphere:
                    d = sphere_distance(s.coords.col(i), s.coords.col(j), s.radius);
                    break;
                case Backend::hyperbolic:
                    d = hyperbolic_distance(s.coords.col(i), s.coords.col(j));
                    break;
                case Backend::cone:
                    d = cone_distance(s.coords.col(i), s.coords.col(j), s.total_angle);
                    break;
                default:
                    throw std::logic_error("fill_distances: analytic backend expected");
            }
            s.dist(i, j) = s.dist(j, i) = d;
        }
}

bool far_enough(const MetricSpace& s, const std::vector<Eigen::Vector3d>& pts,
                const Eigen::Vector3d& cand, double min_sep) {
    if (min_sep <= 0.0) return true;
    SpacePoint c(-1, cand);
    for (const auto& p : pts)
        if (s.distance(SpacePoint(-1, p), c) < min_sep) return false;
    return true;
}

void sample_points(MetricSpace& s, const SpaceSpec& spec,
                   const std::vector<std::pair<std::string, Eigen::Vector3d>>& fixed) {
    SplitMix64 rng(spec.seed);
    std::vector<Eigen::Vector3d> pts;
    std::vector<std::string> names;
    for (const auto& [name, c] : fixed) {
        pts.push_back(c);
        names.push_back(name);
    }
    const int want = std::max(spec.n, static_cast<int>(pts.size()));
    const int width = std::max(2, static_cast<int>(std::to_string(std::max(1, want - 1)).size()));
    long attempts = 0;
    const long max_attempts = 4000L * std::max(1, want) + 4000;
    while (static_cast<int>(pts.size()) < want) {
        if (++attempts > max_attempts)
            throw validation_error("sampling stalled; min_sep too large for n");
        Eigen::Vector3d c = Eigen::Vector3d::Zero();
        switch (s.backend) {
            case Backend::euclidean: {
                const double rr = spec.radius * std::sqrt(rng.next_double());
                const double th = 2.0 * pi * rng.next_double();
                c = {rr * std::cos(th), rr * std::sin(th), 0.0};
                if (s.variant == "punctured" && rr < 1e-3 * spec.radius) continue;
                break;
            }
            case Backend::sphere: {
                const bool hemi = (s.variant == "hemisphere");
                const double z = hemi ? rng.next_double() : rng.uniform(-1.0, 1.0);
                if (hemi && z <= 1e-12) continue;
                const double th = 2.0 * pi * rng.next_double();
                const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                c = {rho * std::cos(th), rho * std::sin(th), z};
                break;
            }
            case Backend::hyperbolic: {
                // area-uniform radius inside the hyperbolic disk
                const double t = std::acosh(1.0 + rng.next_double() * (std::cosh(spec.radius) - 1.0));
                const double th = 2.0 * pi * rng.next_double();
                c = {std::cosh(t), std::sinh(t) * std::cos(th), std::sinh(t) * std::sin(th)};
                break;
            }
            case Backend::cone: {
                // annulus with a radius floor: every sample keeps an
                // apex-free neighborhood
                const double lo = 0.35 * spec.radius;
                const double rr = std::sqrt(lo * lo +
                                            rng.next_double() * (spec.radius * spec.radius - lo * lo));
                c = {rr, s.total_angle * rng.next_double(), 0.0};
                break;
            }
            default:
                throw std::logic_error("sample_points: analytic backend expected");
        }
        if (!far_enough(s, pts, c, spec.min_sep)) continue;
        names.push_back("p" + pad_index(static_cast<int>(pts.size()), width));
        pts.push_back(c);
    }
    s.ids = std::move(names);
    s.coords.resize(3, static_cast<int>(pts.size()));
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) s.coords.col(i) = pts[i];
    s.tags.assign(pts.size(), PointTag::original);
}

MetricSpace build_graph_space(const SpaceSpec& spec, const std::vector<GraphEdge>& edges) {
    MetricSpace s;
    s.backend = Backend::graph;
    s.spec = spec;
    for (const auto& e : edges) {
        if (!(e.weight > 0.0)) throw validation_error("graph edge weights must be positive");
        for (const auto& id : {e.from, e.to})
            if (s.index_of(id) < 0) {
                s.ids.push_back(id);
            }
    }
    const int n = s.size();
    if (n < 2) throw validation_error("graph needs at least two vertices");
    s.tags.assign(n, PointTag::original);
    s.coords = Eigen::Matrix3Xd::Zero(3, n);
    s.adjacency.assign(n, {});
    for (const auto& e : edges) {
        const int a = s.index_of(e.from), b = s.index_of(e.to);
        s.adjacency[a].emplace_back(b, e.weight);
        s.adjacency[b].emplace_back(a, e.weight);
    }
    // all-pairs shortest paths
    s.dist = Eigen::MatrixXd::Constant(n, n, infinity);
    for (int src = 0; src < n; ++src) {
        std::vector<double> d(n, infinity);
        std::vector<bool> done(n, false);
        d[src] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        heap.emplace(0.0, src);
        while (!heap.empty()) {
            auto [du, u] = heap.top();
            heap.pop();
            if (done[u]) continue;
            done[u] = true;
            for (auto [v, w] : s.adjacency[u])
                if (du + w < d[v]) {
                    d[v] = du + w;
                    heap.emplace(d[v], v);
                }
        }
        for (int j = 0; j < n; ++j) s.dist(src, j) = d[j];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(s.dist(i, j)))
                throw validation_error("graph is disconnected: no path " + s.ids[i] + " -> " + s.ids[j]);
    return s;
}

std::vector<GraphEdge> tripod_edges(const SpaceSpec& spec) {
    const int k = std::max(1, spec.leg_points);
    const double h = spec.leg_length / k;
    std::vector<GraphEdge> edges;
    for (const std::string leg : {"a", "b", "c"}) {
        std::string prev = "hub";
        for (int i = 1; i <= k; ++i) {
            const std::string cur = leg + pad_index(i, 2);
            edges.push_back({prev, cur, h});
            prev = cur;
        }
    }
    return edges;
}

}  // namespace

MetricSpace MetricSpace::generate(const SpaceSpec& spec) {
    MetricSpace s;
    s.spec = spec;
    const std::string& t = spec.type;

    if (t == "tripod") return build_graph_space(spec, tripod_edges(spec));
    if (t == "graph") return build_graph_space(spec, spec.edges);

    if (spec.n < 4) throw validation_error("spec: need n >= 4 sample points");

    std::vector<std::pair<std::string, Eigen::Vector3d>> fixed;
    if (t == "euclidean") {
        s.backend = Backend::euclidean;
        if (!(spec.radius > 0)) throw validation_error("spec: radius must be positive");
        if (spec.incomplete) {
            s.variant = "punctured";
            s.incomplete = true;
        }
        if (spec.canonical) {
            const double r = spec.radius;
            fixed = {{"line_a", {-0.5 * r, -0.25 * r, 0}},
                     {"line_b", {0.0, -0.25 * r, 0}},
                     {"line_c", {0.5 * r, -0.25 * r, 0}},
                     {"off", {0.0, 0.25 * r, 0}}};
        }
    } else if (t == "sphere" || t == "hemisphere") {
        s.backend = Backend::sphere;
        s.radius = spec.radius;
        if (!(spec.radius > 0)) throw validation_error("spec: radius must be positive");
        if (t == "hemisphere" || spec.incomplete) {
            s.variant = "hemisphere";
            s.incomplete = true;
        }
        if (spec.canonical) {
            if (s.variant == "hemisphere") {
                const double c = std::sqrt(0.5);
                fixed = {{"north", {0, 0, 1}},
                         {"mid000", {c, 0, c}},
                         {"mid120", {c * std::cos(2 * pi / 3), c * std::sin(2 * pi / 3), c}},
                         {"mid240", {c * std::cos(4 * pi / 3), c * std::sin(4 * pi / 3), c}}};
            } else {
                fixed = {{"north", {0, 0, 1}},
                         {"south", {0, 0, -1}},
                         {"eq000", {1, 0, 0}},
                         {"eq090", {0, 1, 0}}};
            }
        }
    } else if (t == "hyperbolic") {
        s.backend = Backend::hyperbolic;
        if (!(spec.radius > 0)) throw validation_error("spec: radius must be positive");
        if (spec.incomplete) throw validation_error("hyperbolic samples have no incomplete variant");
        if (spec.canonical) {
            const double tc = 0.6 * spec.radius;
            fixed = {{"center", {1, 0, 0}}};
            for (int k = 0; k < 3; ++k) {
                const double th = 2 * pi * k / 3;
                fixed.push_back({"spoke" + std::to_string(k),
                                 {std::cosh(tc), std::sinh(tc) * std::cos(th),
                                  std::sinh(tc) * std::sin(th)}});
            }
        }
    } else if (t == "cone") {
        s.backend = Backend::cone;
        if (!(spec.total_angle > 0)) throw validation_error("spec: cone needs total_angle > 0");
        if (!(spec.radius > 0)) throw validation_error("spec: radius must be positive");
        s.total_angle = spec.total_angle;
        if (spec.incomplete) {
            s.variant = "apexless";
            s.incomplete = true;
        } else {
            fixed.push_back({"apex", {0, 0, 0}});
        }
        if (spec.canonical) {
            const double rc = 0.9 * spec.radius;
            fixed.push_back({"c0", {rc, 0, 0}});
            fixed.push_back({"c1", {rc, spec.total_angle / 3, 0}});
            fixed.push_back({"c2", {rc, 2 * spec.total_angle / 3, 0}});
        }
    } else {
        throw validation_error("spec: unknown space type '" + t + "'");
    }

    sample_points(s, spec, fixed);
    fill_distances(s);
    s.validate();
    return s;
}

MetricSpace MetricSpace::from_matrix(std::vector<std::string> names, Eigen::MatrixXd distances,
                                     double tolerance, double epsilon_override) {
    MetricSpace s;
    s.backend = Backend::matrix_only;
    if (distances.rows() != distances.cols()) throw validation_error("matrix must be square");
    if (static_cast<int>(names.size()) != distances.rows())
        throw validation_error("identifier row does not match matrix size");
    s.ids = std::move(names);
    // symmetrize within tolerance so downstream arithmetic sees one value
    for (int i = 0; i < distances.rows(); ++i)
        for (int j = i + 1; j < distances.cols(); ++j) {
            if (std::abs(distances(i, j) - distances(j, i)) > tolerance)
                throw validation_error("asymmetry at (" + s.ids[i] + ", " + s.ids[j] + ")");
            const double d = 0.5 * (distances(i, j) + distances(j, i));
            distances(i, j) = distances(j, i) = d;
        }
    s.dist = std::move(distances);
    s.tags.assign(s.ids.size(), PointTag::original);
    s.coords = Eigen::Matrix3Xd::Zero(3, s.size());
    s.validate(tolerance);

    s.graph_epsilon = epsilon_override > 0 ? epsilon_override : 2.0 * s.median_nn_distance();
    s.adjacency.assign(s.size(), {});
    for (int i = 0; i < s.size(); ++i)
        for (int j = 0; j < s.size(); ++j)
            if (j != i && s.dist(i, j) <= s.graph_epsilon + 1e-15)
                s.adjacency[i].emplace_back(j, s.dist(i, j));
    return s;
}

// -------------------------------------------------------------- completion

MetricSpace MetricSpace::completion() const {
    if (backend == Backend::matrix_only)
        throw std::invalid_argument("completion is not computable from a bare distance matrix");
    if (!incomplete) return *this;

    MetricSpace out = *this;
    out.incomplete = false;
    std::vector<std::pair<std::string, Eigen::Vector3d>> extra;

    if (variant == "hemisphere") {
        const double spacing = std::max(median_nn_distance(), 1e-3 * radius);
        const int m = std::clamp<int>(static_cast<int>(std::ceil(2.0 * pi * radius / spacing)), 8, 512);
        for (int j = 0; j < m; ++j) {
            const double th = 2.0 * pi * j / m;
            extra.push_back({"rim" + pad_index(j, 3), {std::cos(th), std::sin(th), 0.0}});
        }
    } else if (variant == "punctured") {
        extra.push_back({"origin", {0.0, 0.0, 0.0}});
    } else if (variant == "apexless") {
        extra.push_back({"apex", {0.0, 0.0, 0.0}});
    } else {
        throw std::logic_error("unknown incomplete variant '" + variant + "'");
    }

    const int n0 = size();
    const int n = n0 + static_cast<int>(extra.size());
    out.coords.conservativeResize(3, n);
    for (int j = 0; j < static_cast<int>(extra.size()); ++j) {
        out.ids.push_back(extra[j].first);
        out.tags.push_back(PointTag::completion);
        out.coords.col(n0 + j) = extra[j].second;
    }
    fill_distances(out);
    out.variant.clear();
    out.validate();
    return out;
}

// --------------------------------------------------------------- geodesics

namespace {

// Deterministic Dijkstra path: ties broken toward lexicographically smaller
// predecessor identifiers.
std::vector<int> dijkstra_path(const MetricSpace& s, int src, int dst) {
    const int n = s.size();
    std::vector<double> d(n, infinity);
    std::vector<int> pred(n, -1);
    std::vector<bool> done(n, false);
    d[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = true;
        for (auto [v, w] : s.adjacency[u]) {
            const double nd = du + w;
            if (nd < d[v] - 1e-15) {
                d[v] = nd;
                pred[v] = u;
                heap.emplace(nd, v);
            } else if (std::abs(nd - d[v]) <= 1e-15 && pred[v] >= 0 && s.ids[u] < s.ids[pred[v]]) {
                pred[v] = u;
            }
        }
    }
    if (!std::isfinite(d[dst]))
        throw no_geodesic_error("no path between " + s.ids[src] + " and " + s.ids[dst] +
                                (s.backend == Backend::matrix_only
                                     ? " in the epsilon-neighborhood graph"
                                     : ""));
    std::vector<int> path{dst};
    while (path.back() != src) path.push_back(pred[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

DiscreteGeodesic MetricSpace::geodesic(const SpacePoint& x, const SpacePoint& y,
                                       double resolution) const {
    const double L = distance(x, y);
    if (!(L > 0.0)) throw std::invalid_argument("geodesic endpoints must be distinct");

    DiscreteGeodesic geo;
    geo.from = x;
    geo.to = y;

    if (backend == Backend::graph || backend == Backend::matrix_only) {
        if (x.id < 0 || y.id < 0)
            throw std::invalid_argument("graph geodesics need sample-point endpoints");
        // canonical orientation for reversal symmetry
        if (ids[y.id] < ids[x.id]) return geodesic(y, x, resolution).reversed();
        const auto path = dijkstra_path(*this, x.id, y.id);
        double acc = 0.0;
        for (std::size_t k = 0; k < path.size(); ++k) {
            geo.vertices.push_back(point(path[k]));
            if (k > 0) acc += dist(path[k - 1], path[k]);
            geo.params.push_back(acc);
        }
        geo.length = acc;
        geo.error_bound = acc - L;  // zero for exact graph metrics
        return geo;
    }

    if (backend == Backend::sphere && L >= pi * radius - 1e-9)
        throw no_geodesic_error("antipodal endpoints: minimizing geodesic not unique");

    if (resolution <= 0.0) resolution = L / 64.0;

    if (backend == Backend::cone) {
        const double delta = cone_wrap(y.chart(1) - x.chart(1), total_angle);
        const bool through_apex =
            x.chart(0) == 0.0 || y.chart(0) == 0.0 || std::abs(delta) >= pi;
        if (through_apex) {
            int apex = -1;
            for (int i = 0; i < size(); ++i)
                if (coords.col(i)(0) == 0.0) apex = i;
            if (incomplete || (apex < 0 && x.chart(0) != 0.0 && y.chart(0) != 0.0))
                throw no_geodesic_error("geodesic passes through the missing apex");
            // two radial pieces meeting at the apex
            const double r1 = x.chart(0), r2 = y.chart(0);
            auto radial = [&](double rr, double phi) { return SpacePoint(-1, {rr, phi, 0.0}); };
            if (r1 > 0.0) {
                const int m1 = std::max(1, static_cast<int>(std::ceil(r1 / resolution)));
                for (int k = 0; k < m1; ++k) {
                    const double rr = r1 * (1.0 - static_cast<double>(k) / m1);
                    geo.vertices.push_back(radial(rr, x.chart(1)));
                    geo.params.push_back(r1 - rr);
                }
            }
            geo.vertices.push_back(apex >= 0 ? point(apex) : radial(0.0, 0.0));
            geo.params.push_back(r1);
            if (r2 > 0.0) {
                const int m2 = std::max(1, static_cast<int>(std::ceil(r2 / resolution)));
                for (int k = 1; k <= m2; ++k) {
                    const double rr = r2 * static_cast<double>(k) / m2;
                    geo.vertices.push_back(radial(rr, y.chart(1)));
                    geo.params.push_back(r1 + rr);
                }
            }
            geo.vertices.front() = x;
            geo.vertices.back() = y;
            geo.length = r1 + r2;
            geo.error_bound = 0.0;
            return geo;
        }
    }

    const int m = std::max(1, static_cast<int>(std::ceil(L / resolution)));
    for (int k = 0; k <= m; ++k) {
        const double f = static_cast<double>(k) / m;
        Eigen::Vector3d c;
        switch (backend) {
            case Backend::euclidean:
                c = (1.0 - f) * x.chart + f * y.chart;
                break;
            case Backend::sphere:
                c = slerp(x.chart, y.chart, f);
                break;
            case Backend::hyperbolic:
                c = hyperboloid_walk(x.chart, y.chart, f * L);
                break;
            case Backend::cone: {
                const double delta = cone_wrap(y.chart(1) - x.chart(1), total_angle);
                const Eigen::Vector2d a(x.chart(0), 0.0);
                const Eigen::Vector2d b(y.chart(0) * std::cos(delta), y.chart(0) * std::sin(delta));
                const Eigen::Vector2d p = (1.0 - f) * a + f * b;
                double phi = x.chart(1) + std::atan2(p(1), p(0));
                phi -= total_angle * std::floor(phi / total_angle);
                c = {p.norm(), phi, 0.0};
                break;
            }
            default:
                c = Eigen::Vector3d::Zero();
        }
        geo.vertices.emplace_back(-1, c);
        geo.params.push_back(f * L);
    }
    geo.vertices.front() = x;
    geo.vertices.back() = y;
    geo.length = L;
    geo.error_bound = 0.0;  // vertices and interpolation are exact
    return geo;
}

SpacePoint MetricSpace::point_along(const DiscreteGeodesic& geo, double s) const {
    if (geo.vertices.empty()) throw std::invalid_argument("empty geodesic");
    if (s <= 0.0) return geo.vertices.front();
    if (s >= geo.length) return geo.vertices.back();
    if (!analytic()) {
        // snap to the nearest recorded vertex, but never back onto the start
        std::size_t idx = geo.nearest_vertex(s);
        if (idx == 0) idx = 1;
        return geo.vertices[idx];
    }

    const auto it = std::upper_bound(geo.params.begin(), geo.params.end(), s);
    const std::size_t hi = std::min<std::size_t>(it - geo.params.begin(), geo.params.size() - 1);
    const std::size_t lo = hi - 1;
    const double seg = geo.params[hi] - geo.params[lo];
    const double f = seg > 0 ? (s - geo.params[lo]) / seg : 0.0;
    const Eigen::Vector3d &a = geo.vertices[lo].chart, &b = geo.vertices[hi].chart;

    Eigen::Vector3d c;
    switch (backend) {
        case Backend::euclidean:
            c = (1.0 - f) * a + f * b;
            break;
        case Backend::sphere:
            c = slerp(a, b, f);
            break;
        case Backend::hyperbolic:
            c = hyperboloid_walk(a, b, f * hyperbolic_distance(a, b));
            break;
        case Backend::cone: {
            if (a(0) == 0.0 || b(0) == 0.0) {
                // radial piece through the apex
                const double rr = (1.0 - f) * a(0) + f * b(0);
                const double phi = a(0) == 0.0 ? b(1) : a(1);
                c = {rr, phi, 0.0};
                break;
            }
            const double delta = cone_wrap(b(1) - a(1), total_angle);
            const Eigen::Vector2d u(a(0), 0.0);
            const Eigen::Vector2d v(b(0) * std::cos(delta), b(0) * std::sin(delta));
            const Eigen::Vector2d p = (1.0 - f) * u + f * v;
            double phi = a(1) + std::atan2(p(1), p(0));
            phi -= total_angle * std::floor(phi / total_angle);
            c = {p.norm(), phi, 0.0};
            break;
        }
        default:
            c = Eigen::Vector3d::Zero();
    }
    return SpacePoint(-1, c);
}

DiscreteGeodesic MetricSpace::extend_rayward(const SpacePoint& w, const SpacePoint& a, double R,
                                             double step) const {
    const double r = distance(w, a);
    if (!(r > 0.0)) throw std::invalid_argument("extend_rayward: a must differ from w");
    if (!(R > r)) throw std::invalid_argument("extend_rayward: R must exceed |wa|");
    if (!(step > 0.0)) throw std::invalid_argument("extend_rayward: step must be positive");

    DiscreteGeodesic geo;
    geo.from = w;

    if (backend == Backend::graph || backend == Backend::matrix_only) {
        if (w.id < 0 || a.id < 0)
            throw std::invalid_argument("graph rays need sample-point endpoints");
        DiscreteGeodesic base = geodesic(w, a);
        geo.vertices = base.vertices;
        for (std::size_t k = 0; k < base.vertices.size(); ++k)
            geo.params.push_back(dist(w.id, base.vertices[k].id));
        int cur = a.id;
        while (dist(w.id, cur) < R) {
            int best = -1;
            double best_d = dist(w.id, cur) + 1e-12;
            for (auto [v, wt] : adjacency[cur]) {
                const double dv = dist(w.id, v);
                if (dv > best_d || (best >= 0 && dv == best_d && ids[v] < ids[best])) {
                    best = v;
                    best_d = dv;
                }
            }
            if (best < 0) break;  // trapped: no distance-increasing step
            cur = best;
            geo.vertices.push_back(point(cur));
            geo.params.push_back(dist(w.id, cur));
        }
        geo.to = geo.vertices.back();
        geo.length = geo.params.back();
        geo.error_bound = 0.0;
        return geo;
    }

    if (backend == Backend::sphere && (R >= pi * radius - 1e-9 || r >= pi * radius - 1e-9))
        throw std::invalid_argument("extend_rayward: reaches the antipode");

    const int m = std::max(1, static_cast<int>(std::ceil(R / step)));
    for (int k = 0; k <= m; ++k) {
        const double t = R * static_cast<double>(k) / m;
        Eigen::Vector3d c;
        switch (backend) {
            case Backend::euclidean: {
                const Eigen::Vector3d dir = (a.chart - w.chart) / r;
                c = w.chart + t * dir;
                break;
            }
            case Backend::sphere: {
                const double omega = r / radius;
                const Eigen::Vector3d u =
                    (a.chart - std::cos(omega) * w.chart) / std::sin(omega);
                c = std::cos(t / radius) * w.chart + std::sin(t / radius) * u;
                break;
            }
            case Backend::hyperbolic: {
                const Eigen::Vector3d dir = (a.chart - std::cosh(r) * w.chart) / std::sinh(r);
                c = std::cosh(t) * w.chart + std::sinh(t) * dir;
                break;
            }
            case Backend::cone: {
                const double delta = cone_wrap(a.chart(1) - w.chart(1), total_angle);
                const Eigen::Vector2d u(w.chart(0), 0.0);
                const Eigen::Vector2d v(a.chart(0) * std::cos(delta),
                                        a.chart(0) * std::sin(delta));
                const Eigen::Vector2d p = u + (t / r) * (v - u);
                const double psi = std::atan2(p(1), p(0));
                // past this offset the unrolled chart stops giving distances
                if (std::abs(psi) >= std::min(pi, 0.5 * total_angle) - 1e-9) {
                    if (geo.vertices.empty()) throw no_geodesic_error("ray immediately leaves the chart");
                    geo.vertices.front() = w;
                    geo.to = geo.vertices.back();
                    geo.length = geo.params.back();
                    return geo;
                }
                double phi = w.chart(1) + psi;
                phi -= total_angle * std::floor(phi / total_angle);
                c = {p.norm(), phi, 0.0};
                break;
            }
            default:
                c = Eigen::Vector3d::Zero();
        }
        geo.vertices.emplace_back(-1, c);
        geo.params.push_back(t);
    }
    geo.vertices.front() = w;
    geo.to = geo.vertices.back();
    geo.length = R;
    geo.error_bound = 0.0;
    return geo;
}

}  // namespace cbb
