#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

// Trigonometry in the model plane M^k of constant curvature k: side and
// angle solvers, comparison triangles, point-to-segment distance and the
// hinge-splitting lemma. All lengths are in the metric of M^k; angles in
// radians. "Undefined" results (no triangle with the requested data
// exists in M^k) are first-class values, reported as std::nullopt.

namespace cbb {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Guard band for clamping inverse-trig arguments: violations beyond this
// are treated as genuine inconsistencies, smaller ones as rounding.
inline constexpr double kClampGuard = 1e-9;

// Diameter of M^k: infinite for k <= 0, pi/sqrt(k) on the sphere.
inline double model_diameter(double kappa) {
    if (kappa <= 0.0) return infinity;
    return pi / std::sqrt(kappa);
}

// Curvature bound together with the diameter of its model plane.
struct Curvature {
    double kappa = 0.0;
    double diameter = infinity;

    Curvature() = default;
    explicit Curvature(double k) : kappa(k), diameter(model_diameter(k)) {}
};

// Side c of the M^kappa triangle with sides a, b and included angle gamma
// (the law of cosines of the appropriate geometry, in half-angle form so
// that nearly degenerate data stays accurate).  nullopt when kappa > 0 and
// a side exceeds the model diameter.
std::optional<double> model_side(double kappa, double a, double b, double gamma);

// Angle opposite c in the M^kappa triangle with sides a, b, c; nullopt
// exactly when no such triangle exists (triangle-inequality failure, or for
// kappa > 0 a side beyond the model diameter or perimeter beyond twice the
// diameter).  Boundary cases count as defined; degenerate vertices (a or b
// zero) resolve to angle 0.
std::optional<double> model_angle(double kappa, double a, double b, double c);

// Comparison triangle [p~ w~ q~]: `a` and `b` are the sides meeting at the
// apex w~, `c` the opposite side [p~ q~].
struct ModelTriangle {
    Curvature curv;
    double a = 0.0, b = 0.0, c = 0.0;
    bool defined = false;

    // Builds from three sides; defined=false when the data fits no triangle.
    static ModelTriangle from_sides(double kappa, double a, double b, double c);
    // Builds from two sides and the apex angle between them.
    static ModelTriangle from_hinge(double kappa, double a, double b, double apex_angle);

    // Interior angles (nullopt mirrors model_angle on degenerate data).
    std::optional<double> apex_angle() const;   // at w~, opposite c
    std::optional<double> angle_at_p() const;   // between a and c, opposite b
    std::optional<double> angle_at_q() const;   // between b and c, opposite a
};

// Distance in M^kappa from the apex w~ to the opposite side [p~ q~],
// minimised over the whole segment (endpoints included).  Throws on
// undefined triangles.
double dist_to_opposite_side(const ModelTriangle& tri);

// Result of splitting a model hinge along its opposite side.
struct LemmaSplit {
    bool feasible = false;
    double t = 0.0;        // position of the split point on [p q], in [0, 1]
    double angle_p = 0.0;  // model angle at w between p and the split point
    double angle_q = 0.0;  // model angle at w between q and the split point
};

// Places a point a on the segment [p q] realised in M^kappa (hinge at w with
// sides wp, wq and opposite side |pq| = opposite) so that the model angles
// at w toward (p, a) and (q, a) stay below the two targets.  Monotone
// bisection in t to 1e-10; infeasible when the targets sum to less than the
// full model angle at w.
LemmaSplit alexandrov_lemma_split(double kappa, double wp, double wq,
                                  double target_angle_p, double target_angle_q,
                                  double opposite);

}  // namespace cbb
