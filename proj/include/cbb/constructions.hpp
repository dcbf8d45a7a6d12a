#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cbb/comparison.hpp"
#include "cbb/metric_space.hpp"

// Escape-curve machinery: radial curves with their monotonicity check, the
// alternating cat's-cradle iteration, and the hinge-versus-model-side
// comparison built from them.

namespace cbb {

// Curve escaping from `base` through `start`, parametrized by distance from
// the base point: dist(base, vertex[k]) == params[k] up to the step budget.
struct RadialCurve {
    SpacePoint base;   // w
    SpacePoint start;  // a
    double r = 0.0;    // dist(base, start)
    double R = 0.0;    // requested outer parameter
    double step = 0.0;
    std::vector<SpacePoint> vertices;
    std::vector<double> params;  // strictly increasing, from r toward R
    bool trapped = false;        // stopped before reaching R
    SpacePoint trap_vertex;      // where progress stopped (when trapped)
};

// Analytic backends extend the geodesic [w a] beyond a; graph backends take
// greedy distance-increasing steps. R == r yields the degenerate one-point
// curve.
RadialCurve radial_curve(const MetricSpace& space, const SpacePoint& w, const SpacePoint& a,
                         double R, double step);

struct RadialMonotonicity {
    double max_increase = 0.0;  // worst uptick of the comparison angle along t
    bool undefined_seen = false;
    double undefined_at = 0.0;  // first parameter with an undefined model triangle
    std::vector<std::array<double, 2>> series;  // (t, angle at the base vertex)
};

// Comparison angle at the base vertex of the model triangle with sides
// (dist(w,p), t, dist(p, curve(t))), scanned over the recorded parameters.
// Nonincreasing in t inside a kappa-domain.
RadialMonotonicity radial_monotonicity_check(const MetricSpace& space, const RadialCurve& curve,
                                             const SpacePoint& p, double kappa);

enum class CradleHalt { max_steps, left_domain, converged };

struct CradleTrace {
    SpacePoint p, q, w;
    double epsilon = 0.0;
    std::vector<SpacePoint> vertices;  // w0, w1, ...
    std::vector<double> ell;           // ell[n] = |p w_{2n}| + |w_{2n} q|
    std::vector<double> s;             // s[n] = sum |w_{2(i-1)} w_{2i}|, s[0] = 0
    CradleHalt halt = CradleHalt::max_steps;

    std::size_t even_count() const { return ell.size(); }
};

// Alternating epsilon-steps toward p and q starting from w; records every
// vertex and the per-n summaries. A finite domain_radius halts the walk as
// soon as an iterate leaves B(w, domain_radius).
CradleTrace cats_cradle(const MetricSpace& space, const SpacePoint& p, const SpacePoint& q,
                        const SpacePoint& w, double epsilon, int max_steps,
                        double domain_radius = infinity);

// Checks dist(w, w_k) < R for every k up to the largest n with
// s_n < R - epsilon. Pure function of the recorded trace.
bool cradle_domain_containment(const MetricSpace& space, const CradleTrace& trace,
                               const SpacePoint& w, double R);

enum class KeyLemmaVerdict { verified, hypotheses_unmet, violated };

struct KeyLemmaOptions {
    double resolution = 0.0;
    bool check_domains = true;   // run kappa_domain_check on B[w, R]
    bool bisector_mode = false;  // gate on R > bisector length instead
    DomainCheckOptions domain;
};

struct KeyLemmaResult {
    KeyLemmaVerdict verdict = KeyLemmaVerdict::hypotheses_unmet;
    double hinge = 0.0;        // angle estimate at w
    double R = 0.0;            // distance from w~ to the opposite model side
    double d_pq = 0.0;
    double model_pq = 0.0;     // |p~ q~|
    double budget = 0.0;
    double bisector = 0.0;     // filled in bisector mode
    std::string detail;
};

// Builds the comparison triangle from the hinge at w and verifies
// |pq| <= |p~ q~| when the hypotheses (R below half the model diameter,
// certified ball around w) hold.
KeyLemmaResult key_lemma_check(const MetricSpace& space, const SpacePoint& p,
                               const SpacePoint& q, const SpacePoint& w, double kappa,
                               const KeyLemmaOptions& opts = {});

}  // namespace cbb
