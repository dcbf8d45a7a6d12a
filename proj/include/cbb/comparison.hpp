#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cbb/metric_space.hpp"
#include "cbb/model_plane.hpp"

// The comparison tests: (1+3)-point quadruple comparison, hinge angles via
// the monotone small-scale limit, the adjacent-angle identity, and
// kappa-domain certification.

namespace cbb {

enum class Verdict { holds, holds_undefined, fails };

// Absolute slack used by comparison verdicts: a fixed floor plus a multiple
// of the geodesic discretization error feeding the distances.
inline double comparison_tolerance(double geodesic_error = 0.0) {
    return 1e-8 + 4.0 * geodesic_error;
}

// Budget for angle-valued checks built on hinge estimates.
inline double angle_budget(double geodesic_error = 0.0, double smallest_scale = 1.0) {
    if (smallest_scale <= 0.0) smallest_scale = 1.0;
    return 1e-6 + 4.0 * geodesic_error / smallest_scale;
}

struct QuadrupleVerdict {
    std::array<std::string, 4> ids;  // p, x1, x2, x3 (empty for free points)
    std::array<std::optional<double>, 3> angles;  // at p: (x1,x2), (x2,x3), (x3,x1)
    std::optional<double> angle_sum;              // absent when any angle undefined
    Verdict verdict = Verdict::holds;
    double excess = 0.0;  // amount above 2*pi, zero unless fails
};

// The (1+3)-point test at p from the six pairwise distances.  Throws
// validation_error when the distances are not a 4-point metric.
QuadrupleVerdict quadruple_check(double kappa, double d_px1, double d_px2, double d_px3,
                                 double d_x1x2, double d_x2x3, double d_x3x1,
                                 double tolerance = comparison_tolerance());

struct ScanStrategy {
    bool exhaustive = true;
    long count = 0;
    uint64_t seed = 0;

    static ScanStrategy Exhaustive() { return {}; }
    static ScanStrategy Random(long count, uint64_t seed) { return {false, count, seed}; }
};

struct ComparisonReport {
    std::string space;
    double kappa = 0.0;
    ScanStrategy strategy;
    double tolerance = 0.0;
    long holds = 0;
    long holds_undefined = 0;
    long fails = 0;
    std::optional<QuadrupleVerdict> worst;  // present iff fails > 0

    long total() const { return holds + holds_undefined + fails; }
    bool clean() const { return fails == 0; }
};

// Runs quadruple_check over ordered quadruples (p; {x1,x2,x3}).  `subset`
// restricts the scan to the given sample indices (empty = all points).
// Aggregation is a commutative monoid, so reports are identical for any
// worker count. Exhaustive scans are gated to at most 40 points.
ComparisonReport scan_quadruples(const MetricSpace& space, double kappa,
                                 const ScanStrategy& strategy, int workers = 0,
                                 std::vector<int> subset = {},
                                 double tolerance = comparison_tolerance());

// Largest kappa that still passes the scan, located by bisection on
// [kappa_lo, kappa_hi]; requires a pass at the bottom and a failure at the
// top of the bracket.
double max_lower_bound(const MetricSpace& space, double kappa_lo, double kappa_hi, double tol,
                       const ScanStrategy& strategy, int workers = 0);

// Hinge at `vertex` made of two geodesics leaving it, with the decreasing
// evaluation scales for the monotone limit.
struct Hinge {
    SpacePoint vertex;
    DiscreteGeodesic to_x, to_y;
    std::vector<std::pair<double, double>> scales;
};

// Builds the hinge [x p y] with a geometric scale grid r0, r0/2, ...
// (levels entries, clamped below both geodesic lengths). r0 <= 0 picks
// min(|px|,|py|)/8.
Hinge make_hinge(const MetricSpace& space, const SpacePoint& p, const SpacePoint& x,
                 const SpacePoint& y, double r0 = 0.0, int levels = 9,
                 double resolution = 0.0);

struct HingeAngle {
    double angle = 0.0;          // value at the smallest scale (certified one-sided)
    double extrapolated = 0.0;   // Richardson-style secondary estimate
    double deviation = 0.0;      // worst observed non-monotonicity across the grid
    double budget = 0.0;
    bool flagged = false;        // deviation exceeded the budget
    // (scale_x, scale_y, model angle) rows actually evaluated
    std::vector<std::array<double, 3>> grid;
};

HingeAngle hinge_angle(const MetricSpace& space, const Hinge& hinge, double kappa,
                       double budget_override = 0.0);

// |angle(p;y,z) + angle(p;x,z) - pi| for p an interior vertex of [xy];
// the identity holds exactly in any space satisfying local comparison.
double adjacent_angle_check(const MetricSpace& space, const DiscreteGeodesic& xy,
                            std::size_t interior_vertex, const SpacePoint& z, double kappa);

struct DomainCheckOptions {
    int max_configs = 60;      // hinge configurations per region
    int scale_levels = 9;
    double resolution = 0.0;   // geodesic sampling resolution
    uint64_t seed = 1;         // deterministic config subsampling
    int workers = 0;
    long max_scan = 4000;      // quadruple budget for the half-ball scan
};

struct DomainCertificate {
    SpacePoint center;
    double radius = 0.0;
    double kappa = 0.0;
    bool pass = false;
    long configs = 0;
    long skipped = 0;          // configurations without usable geodesics
    double worst_violation = 0.0;
    std::string witness;       // human-readable first failure
    ComparisonReport half_ball_scan;
};

// Certifies a metric ball as a kappa-domain at sample resolution: hinge
// configurations (p, [q s]) inside the ball must satisfy the comparison
// inequality at small scales, and quadruples in the half-radius ball must
// pass the scan.
DomainCertificate kappa_domain_check(const MetricSpace& space, const SpacePoint& center,
                                     double radius, double kappa,
                                     const DomainCheckOptions& opts = {});

}  // namespace cbb
