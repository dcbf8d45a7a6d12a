#include "cbb/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace cbb {

RadialCurve radial_curve(const MetricSpace& space, const SpacePoint& w, const SpacePoint& a,
                         double R, double step) {
    RadialCurve out;
    out.base = w;
    out.start = a;
    out.r = space.distance(w, a);
    out.R = R;
    out.step = step;
    if (!(out.r > 0.0)) throw std::invalid_argument("radial_curve: a must differ from w");
    if (R < out.r) throw std::invalid_argument("radial_curve: R must be at least |wa|");
    if (!(step > 0.0)) throw std::invalid_argument("radial_curve: step must be positive");

    if (R - out.r < 1e-12) {  // degenerate single-point curve
        out.vertices.push_back(a);
        out.params.push_back(out.r);
        return out;
    }

    const DiscreteGeodesic ray = space.extend_rayward(w, a, R, step);
    for (std::size_t k = 0; k < ray.vertices.size(); ++k) {
        if (ray.params[k] < out.r - 1e-12) continue;
        out.vertices.push_back(ray.vertices[k]);
        out.params.push_back(ray.params[k]);
    }
    if (out.vertices.empty() || out.params.front() > out.r + 1e-12) {
        out.vertices.insert(out.vertices.begin(), a);
        out.params.insert(out.params.begin(), out.r);
    }
    if (out.params.back() < R - 1e-9) {
        out.trapped = true;
        out.trap_vertex = out.vertices.back();
    }
    return out;
}

RadialMonotonicity radial_monotonicity_check(const MetricSpace& space, const RadialCurve& curve,
                                             const SpacePoint& p, double kappa) {
    RadialMonotonicity out;
    const double dwp = space.distance(curve.base, p);
    std::optional<double> prev;
    for (std::size_t k = 0; k < curve.vertices.size(); ++k) {
        const double t = curve.params[k];
        const double dpa = space.distance(p, curve.vertices[k]);
        const auto ang = model_angle(kappa, dwp, t, dpa);
        if (!ang) {
            if (!out.undefined_seen) out.undefined_at = t;
            out.undefined_seen = true;
            prev.reset();
            continue;
        }
        out.series.push_back({t, *ang});
        if (prev) out.max_increase = std::max(out.max_increase, *ang - *prev);
        prev = *ang;
    }
    return out;
}

CradleTrace cats_cradle(const MetricSpace& space, const SpacePoint& p, const SpacePoint& q,
                        const SpacePoint& w, double epsilon, int max_steps,
                        double domain_radius) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("cats_cradle: epsilon must be positive");
    if (max_steps < 1) throw std::invalid_argument("cats_cradle: max_steps must be positive");

    CradleTrace trace;
    trace.p = p;
    trace.q = q;
    trace.w = w;
    trace.epsilon = epsilon;
    trace.vertices.push_back(w);
    trace.ell.push_back(space.distance(p, w) + space.distance(w, q));
    trace.s.push_back(0.0);
    trace.halt = CradleHalt::max_steps;

    const double resolution = epsilon / 16.0;
    SpacePoint last_even = w;
    for (int k = 1; k <= 2 * max_steps; ++k) {
        const SpacePoint& target = (k % 2 == 1) ? p : q;
        const SpacePoint& cur = trace.vertices.back();
        const double reach = space.distance(target, cur);
        if (reach < epsilon) {
            trace.halt = CradleHalt::converged;
            break;
        }
        const DiscreteGeodesic g = space.geodesic(cur, target, resolution);
        const SpacePoint next = space.point_along(g, epsilon);
        trace.vertices.push_back(next);
        if (k % 2 == 0) {
            trace.ell.push_back(space.distance(p, next) + space.distance(next, q));
            trace.s.push_back(trace.s.back() + space.distance(last_even, next));
            last_even = next;
        }
        if (std::isfinite(domain_radius) && space.distance(w, next) > domain_radius) {
            trace.halt = CradleHalt::left_domain;
            break;
        }
    }
    return trace;
}

bool cradle_domain_containment(const MetricSpace& space, const CradleTrace& trace,
                               const SpacePoint& w, double R) {
    std::size_t n_max = 0;
    for (std::size_t n = 0; n < trace.s.size(); ++n)
        if (trace.s[n] < R - trace.epsilon) n_max = n;
    const std::size_t last_vertex = std::min(trace.vertices.size() - 1, 2 * n_max);
    for (std::size_t k = 0; k <= last_vertex; ++k)
        if (!(space.distance(w, trace.vertices[k]) < R)) return false;
    return true;
}

namespace {

// Length of the angle bisector from the apex of the model triangle to its
// opposite side, by bisection on the split angle.
double bisector_length(const ModelTriangle& tri) {
    const double kappa = tri.curv.kappa;
    const double full = tri.apex_angle().value_or(0.0);
    const auto gp = tri.angle_at_p();
    if (!gp) return 0.0;
    auto angle_at = [&](double t) {
        const double da = model_side(kappa, tri.a, t * tri.c, *gp).value_or(0.0);
        return model_angle(kappa, tri.a, da, t * tri.c).value_or(0.0);
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (angle_at(mid) < 0.5 * full ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    return model_side(kappa, tri.a, t * tri.c, *gp).value_or(0.0);
}

}  // namespace

KeyLemmaResult key_lemma_check(const MetricSpace& space, const SpacePoint& p,
                               const SpacePoint& q, const SpacePoint& w, double kappa,
                               const KeyLemmaOptions& opts) {
    KeyLemmaResult res;
    const double wp = space.distance(w, p);
    const double wq = space.distance(w, q);
    res.d_pq = space.distance(p, q);

    Hinge hinge = make_hinge(space, w, p, q, 0.0, 9, opts.resolution);
    const HingeAngle theta = hinge_angle(space, hinge, kappa);
    res.hinge = theta.angle;
    if (theta.flagged) {
        res.detail = "hinge angle non-monotone beyond budget; scales leave the kappa-domain";
        return res;
    }

    const ModelTriangle tri = ModelTriangle::from_hinge(kappa, wp, wq, theta.angle);
    if (!tri.defined) {
        res.detail = "comparison triangle undefined at this kappa";
        return res;
    }
    res.model_pq = tri.c;
    res.R = dist_to_opposite_side(tri);
    res.budget = comparison_tolerance(std::max(hinge.to_x.error_bound, hinge.to_y.error_bound)) +
                 theta.budget * std::min(wp, wq);

    // In bisector mode the certified ball must reach the apex bisector
    // (always >= R), the radius the cradle iteration can wander to.
    double ball_radius = res.R;
    if (opts.bisector_mode) {
        res.bisector = bisector_length(tri);
        ball_radius = std::max(res.R, res.bisector);
    }
    if (ball_radius >= 0.5 * model_diameter(kappa)) {
        res.detail = "required ball reaches half the model diameter";
        return res;
    }
    if (ball_radius > 0.0 && opts.check_domains) {
        const DomainCertificate cert =
            kappa_domain_check(space, w, ball_radius, kappa, opts.domain);
        if (!cert.pass) {
            res.detail = "ball around w is not a kappa-domain: " + cert.witness;
            return res;
        }
    }

    if (res.d_pq <= res.model_pq + res.budget) {
        res.verdict = KeyLemmaVerdict::verified;
    } else {
        res.verdict = KeyLemmaVerdict::violated;
        res.detail = "distance exceeds the comparison side";
    }
    return res;
}

}  // namespace cbb
