#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbb/space_spec.hpp"

// Finite samples of geodesic spaces. Analytic backends (plane, sphere,
// hyperbolic plane, Euclidean cone) carry exact chart coordinates and give
// exact distances and geodesics; graph and matrix-only backends work from
// the distance data alone.

namespace cbb {

enum class Backend { euclidean, sphere, hyperbolic, cone, graph, matrix_only };

enum class PointTag { original, completion };

// Input data fails a metric-space constraint; carries the first witness.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A required minimizing geodesic does not exist (antipodal ambiguity,
// missing apex, disconnected neighborhood graph). Distinct from bad input.
struct no_geodesic_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point of a sampled space: a sample index, or a free point on an
// analytic backend given by its chart coordinates.
// Charts: euclidean (x, y, 0); sphere: unit vector; hyperbolic: hyperboloid
// point with x0^2 - x1^2 - x2^2 = 1; cone: (r, phi, 0) with phi in
// [0, total_angle).
struct SpacePoint {
    int id = -1;
    Eigen::Vector3d chart = Eigen::Vector3d::Zero();

    SpacePoint() = default;
    explicit SpacePoint(int index) : id(index) {}
    SpacePoint(int index, const Eigen::Vector3d& c) : id(index), chart(c) {}
};

// Ordered polyline approximation of a unit-speed minimizing geodesic.
// Vertices lie exactly on the geodesic for analytic backends; `params`
// holds arclength from `from`, strictly increasing from 0 to `length`.
struct DiscreteGeodesic {
    SpacePoint from, to;
    std::vector<SpacePoint> vertices;
    std::vector<double> params;
    double length = 0.0;
    double error_bound = 0.0;  // max deviation of the polyline metric from the geodesic metric

    DiscreteGeodesic reversed() const;
    // Contiguous sub-polyline between vertex indices (either order),
    // reparametrized from zero.
    DiscreteGeodesic subsegment(std::size_t i, std::size_t j) const;
    // Index of the vertex whose parameter is nearest to s.
    std::size_t nearest_vertex(double s) const;
};

class MetricSpace {
public:
    Backend backend = Backend::matrix_only;
    double radius = 1.0;        // sphere
    double total_angle = 0.0;   // cone
    bool incomplete = false;    // declared incomplete variant, completion() known
    std::string variant;        // "hemisphere" | "punctured" | "apexless" | ""
    SpaceSpec spec;             // provenance; type empty for loaded matrices

    std::vector<std::string> ids;
    std::vector<PointTag> tags;
    Eigen::Matrix3Xd coords;    // chart coordinates column-per-point (analytic backends)
    Eigen::MatrixXd dist;

    // Neighborhood structure for graph and matrix-only backends.
    std::vector<std::vector<std::pair<int, double>>> adjacency;
    double graph_epsilon = 0.0;  // edge cutoff used for matrix-only adjacency

    static MetricSpace generate(const SpaceSpec& spec);

    // Validated matrix-only space. epsilon_override > 0 replaces the default
    // neighborhood-graph cutoff (twice the median 1-NN distance).
    static MetricSpace from_matrix(std::vector<std::string> ids, Eigen::MatrixXd distances,
                                   double tolerance = 1e-9, double epsilon_override = 0.0);

    int size() const { return static_cast<int>(ids.size()); }
    bool analytic() const {
        return backend != Backend::graph && backend != Backend::matrix_only;
    }

    double distance(int i, int j) const { return dist(i, j); }
    double distance(const SpacePoint& x, const SpacePoint& y) const;
    SpacePoint point(int i) const;
    int index_of(const std::string& id) const;  // -1 if absent

    // Minimizing geodesic from x to y sampled at roughly `resolution`
    // spacing (<= 0 picks length/64). Deterministic tie-breaking.
    DiscreteGeodesic geodesic(const SpacePoint& x, const SpacePoint& y,
                              double resolution = 0.0) const;

    // Exact point at arclength s along a geodesic of this space (nearest
    // recorded vertex on graph/matrix backends).
    SpacePoint point_along(const DiscreteGeodesic& geo, double s) const;

    // Extends the geodesic [w a] beyond a up to distance R from w, sampled
    // at `step`; the escape trajectory used by radial curves.
    DiscreteGeodesic extend_rayward(const SpacePoint& w, const SpacePoint& a, double R,
                                    double step) const;

    // The sample augmented by its analytically known completion points;
    // identity when already complete. Throws for matrix-only backends.
    MetricSpace completion() const;

    // Re-checks the metric axioms; throws validation_error with the first
    // witness on failure.
    void validate(double tolerance = 1e-9) const;

    // Median over points of the distance to the nearest other point.
    double median_nn_distance() const;

    // Sample indices within `radius` of `center`.
    std::vector<int> points_within(const SpacePoint& center, double r) const;

    double curvature_scale() const;  // 1/radius^2, -1, 0 as appropriate
};

// CSV distance-matrix interface: first row holds the point identifiers,
// then a symmetric numeric body with zero diagonal.
MetricSpace load_distance_matrix(std::istream& in, double tolerance = 1e-9,
                                 double epsilon_override = 0.0);
MetricSpace load_distance_matrix_file(const std::string& path, double tolerance = 1e-9,
                                      double epsilon_override = 0.0);
void write_distance_matrix(std::ostream& out, const MetricSpace& space);

}  // namespace cbb
