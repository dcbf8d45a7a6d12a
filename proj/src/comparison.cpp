#include "cbb/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "cbb/parallel.hpp"
#include "cbb/rng.hpp"

namespace cbb {

namespace {

long choose3(long m) { return m < 3 ? 0 : m * (m - 1) * (m - 2) / 6; }

void require_triangle(double a, double b, double c, const char* what) {
    const double guard = 1e-9 * (1.0 + a + b + c);
    if (c > a + b + guard || c < std::abs(a - b) - guard)
        throw validation_error(std::string("not a metric: ") + what);
}

std::string space_label(const MetricSpace& space) {
    if (!space.spec.type.empty()) return space.spec.to_string();
    return "matrix(n=" + std::to_string(space.size()) + ")";
}

}  // namespace

QuadrupleVerdict quadruple_check(double kappa, double d_px1, double d_px2, double d_px3,
                                 double d_x1x2, double d_x2x3, double d_x3x1,
                                 double tolerance) {
    for (double d : {d_px1, d_px2, d_px3, d_x1x2, d_x2x3, d_x3x1})
        if (!(d >= 0.0)) throw validation_error("quadruple distances must be nonnegative");
    require_triangle(d_px1, d_px2, d_x1x2, "(p,x1,x2)");
    require_triangle(d_px2, d_px3, d_x2x3, "(p,x2,x3)");
    require_triangle(d_px3, d_px1, d_x3x1, "(p,x3,x1)");
    require_triangle(d_x1x2, d_x2x3, d_x3x1, "(x1,x2,x3)");

    QuadrupleVerdict v;
    v.angles[0] = model_angle(kappa, d_px1, d_px2, d_x1x2);
    v.angles[1] = model_angle(kappa, d_px2, d_px3, d_x2x3);
    v.angles[2] = model_angle(kappa, d_px3, d_px1, d_x3x1);
    if (!v.angles[0] || !v.angles[1] || !v.angles[2]) {
        v.verdict = Verdict::holds_undefined;
        return v;
    }
    const double sum = *v.angles[0] + *v.angles[1] + *v.angles[2];
    v.angle_sum = sum;
    if (sum <= 2.0 * pi + tolerance) {
        v.verdict = Verdict::holds;
    } else {
        v.verdict = Verdict::fails;
        v.excess = sum - 2.0 * pi;
    }
    return v;
}

// ------------------------------------------------------------------ scans

namespace {

struct TripleCursor {
    int i = 0, j = 1, l = 2;
    int m = 0;  // number of available elements

    static TripleCursor unrank(long r, int m) {
        TripleCursor t;
        t.m = m;
        long i = 0;
        auto c2 = [](long x) { return x * (x - 1) / 2; };
        while (r >= c2(m - 1 - i)) {
            r -= c2(m - 1 - i);
            ++i;
        }
        long j = i + 1;
        while (r >= m - 1 - j) {
            r -= m - 1 - j;
            ++j;
        }
        t.i = static_cast<int>(i);
        t.j = static_cast<int>(j);
        t.l = static_cast<int>(j + 1 + r);
        return t;
    }

    void advance() {
        if (l + 1 < m) {
            ++l;
            return;
        }
        if (j + 2 < m) {
            ++j;
            l = j + 1;
            return;
        }
        ++i;
        j = i + 1;
        l = j + 1;
    }
};

struct ScanPartial {
    long holds = 0, undef = 0, fails = 0;
    double worst_excess = -1.0;
    long worst_index = -1;
    QuadrupleVerdict worst;

    void absorb(const QuadrupleVerdict& v, long index) {
        switch (v.verdict) {
            case Verdict::holds: ++holds; break;
            case Verdict::holds_undefined: ++undef; break;
            case Verdict::fails:
                ++fails;
                if (v.excess > worst_excess ||
                    (v.excess == worst_excess && index < worst_index)) {
                    worst_excess = v.excess;
                    worst_index = index;
                    worst = v;
                }
                break;
        }
    }
};

ScanPartial merge_partials(ScanPartial a, const ScanPartial& b) {
    a.holds += b.holds;
    a.undef += b.undef;
    a.fails += b.fails;
    if (b.fails > 0 && (b.worst_excess > a.worst_excess ||
                        (b.worst_excess == a.worst_excess && b.worst_index < a.worst_index)))
    {
        a.worst_excess = b.worst_excess;
        a.worst_index = b.worst_index;
        a.worst = b.worst;
    }
    return a;
}

// (p; x1,x2,x3) with all four drawn from `pts`, in sample-index space.
struct Quadruple {
    int p, x1, x2, x3;
};

Quadruple random_quadruple(const std::vector<int>& pts, uint64_t seed, long index) {
    SplitMix64 rng = substream(seed, static_cast<uint64_t>(index));
    const int m = static_cast<int>(pts.size());
    const int a = static_cast<int>(rng.next_below(m));
    int b = static_cast<int>(rng.next_below(m - 1));
    if (b >= a) ++b;
    int c = static_cast<int>(rng.next_below(m - 2));
    for (int used : {std::min(a, b), std::max(a, b)})
        if (c >= used) ++c;
    int d = static_cast<int>(rng.next_below(m - 3));
    int used[3] = {a, b, c};
    std::sort(used, used + 3);
    for (int u : used)
        if (d >= u) ++d;
    int xs[3] = {b, c, d};
    std::sort(xs, xs + 3);
    return {pts[a], pts[xs[0]], pts[xs[1]], pts[xs[2]]};
}

}  // namespace

ComparisonReport scan_quadruples(const MetricSpace& space, double kappa,
                                 const ScanStrategy& strategy, int workers,
                                 std::vector<int> subset, double tolerance) {
    std::vector<int> pts = std::move(subset);
    if (pts.empty()) {
        pts.resize(space.size());
        for (int i = 0; i < space.size(); ++i) pts[i] = i;
    }
    const int m = static_cast<int>(pts.size());

    ComparisonReport rep;
    rep.space = space_label(space);
    rep.kappa = kappa;
    rep.strategy = strategy;
    rep.tolerance = tolerance;
    if (m < 4) return rep;

    long total = 0;
    if (strategy.exhaustive) {
        if (m > 40)
            throw std::invalid_argument(
                "exhaustive scan is limited to 40 points; use a random strategy");
        total = m * choose3(m - 1);
    } else {
        if (strategy.count <= 0) throw std::invalid_argument("random strategy needs count > 0");
        total = strategy.count;
    }

    auto check_quadruple = [&](const Quadruple& q) {
        auto v = quadruple_check(kappa, space.dist(q.p, q.x1), space.dist(q.p, q.x2),
                                 space.dist(q.p, q.x3), space.dist(q.x1, q.x2),
                                 space.dist(q.x2, q.x3), space.dist(q.x3, q.x1), tolerance);
        v.ids = {space.ids[q.p], space.ids[q.x1], space.ids[q.x2], space.ids[q.x3]};
        return v;
    };

    const long per_p = choose3(m - 1);
    auto chunk = [&](long lo, long hi) {
        ScanPartial part;
        TripleCursor cursor;
        int cur_p = -1;
        for (long k = lo; k < hi; ++k) {
            Quadruple q{};
            if (strategy.exhaustive) {
                const int pi_ = static_cast<int>(k / per_p);
                const long r = k % per_p;
                if (pi_ != cur_p || k == lo) {
                    cursor = TripleCursor::unrank(r, m - 1);
                    cur_p = pi_;
                } else {
                    cursor.advance();
                }
                auto other = [&](int t) { return pts[t < pi_ ? t : t + 1]; };
                q = {pts[pi_], other(cursor.i), other(cursor.j), other(cursor.l)};
            } else {
                q = random_quadruple(pts, strategy.seed, k);
            }
            part.absorb(check_quadruple(q), k);
        }
        return part;
    };

    const ScanPartial out =
        parallel_reduce<ScanPartial>(total, workers, ScanPartial{}, chunk, merge_partials);
    rep.holds = out.holds;
    rep.holds_undefined = out.undef;
    rep.fails = out.fails;
    if (out.fails > 0) rep.worst = out.worst;
    return rep;
}

double max_lower_bound(const MetricSpace& space, double kappa_lo, double kappa_hi, double tol,
                       const ScanStrategy& strategy, int workers) {
    if (!(tol > 0.0)) throw std::invalid_argument("max_lower_bound: tol must be positive");
    if (!(kappa_lo < kappa_hi)) throw std::invalid_argument("max_lower_bound: empty bracket");
    if (!scan_quadruples(space, kappa_lo, strategy, workers).clean())
        throw std::invalid_argument("max_lower_bound: scan must pass at kappa_lo");
    if (scan_quadruples(space, kappa_hi, strategy, workers).clean())
        throw std::invalid_argument("max_lower_bound: scan must fail at kappa_hi");
    double lo = kappa_lo, hi = kappa_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (scan_quadruples(space, mid, strategy, workers).clean() ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ----------------------------------------------------------------- hinges

Hinge make_hinge(const MetricSpace& space, const SpacePoint& p, const SpacePoint& x,
                 const SpacePoint& y, double r0, int levels, double resolution) {
    Hinge h;
    h.vertex = p;
    h.to_x = space.geodesic(p, x, resolution);
    h.to_y = space.geodesic(p, y, resolution);
    const double reach = std::min(h.to_x.length, h.to_y.length);
    if (r0 <= 0.0) r0 = reach / 8.0;
    r0 = std::min(r0, 0.995 * reach);
    const double err = std::max(h.to_x.error_bound, h.to_y.error_bound);
    for (int k = 0; k < levels; ++k) {
        const double s = r0 / static_cast<double>(1 << k);
        if (s < 2.0 * err) break;
        h.scales.emplace_back(s, s);
    }
    if (h.scales.empty()) h.scales.emplace_back(r0, r0);
    return h;
}

HingeAngle hinge_angle(const MetricSpace& space, const Hinge& hinge, double kappa,
                       double budget_override) {
    HingeAngle out;
    const double err = std::max(hinge.to_x.error_bound, hinge.to_y.error_bound);
    double prev_sx = -1.0, prev_sy = -1.0;
    for (const auto& [sx_req, sy_req] : hinge.scales) {
        const SpacePoint xbar = space.point_along(hinge.to_x, sx_req);
        const SpacePoint ybar = space.point_along(hinge.to_y, sy_req);
        const double sx = space.distance(hinge.vertex, xbar);
        const double sy = space.distance(hinge.vertex, ybar);
        if (!(sx > 0.0) || !(sy > 0.0)) continue;
        if (sx == prev_sx && sy == prev_sy) continue;  // graph snapping duplicate
        prev_sx = sx;
        prev_sy = sy;
        const auto ang = model_angle(kappa, sx, sy, space.distance(xbar, ybar));
        if (!ang) continue;  // comparison angle undefined at this scale
        out.grid.push_back({sx, sy, *ang});
    }
    if (out.grid.empty())
        throw validation_error("hinge angle: no usable evaluation scale");

    out.angle = out.grid.back()[2];
    for (std::size_t i = 0; i + 1 < out.grid.size(); ++i)
        out.deviation = std::max(out.deviation, out.grid[i][2] - out.grid[i + 1][2]);
    out.extrapolated =
        out.grid.size() >= 2
            ? std::clamp(2.0 * out.grid.back()[2] - out.grid[out.grid.size() - 2][2], 0.0, pi)
            : out.angle;
    const double smallest = std::min(out.grid.back()[0], out.grid.back()[1]);
    out.budget = budget_override > 0.0 ? budget_override : angle_budget(err, smallest);
    out.flagged = out.deviation > out.budget;
    return out;
}

double adjacent_angle_check(const MetricSpace& space, const DiscreteGeodesic& xy,
                            std::size_t interior_vertex, const SpacePoint& z, double kappa) {
    if (interior_vertex == 0 || interior_vertex + 1 >= xy.vertices.size())
        throw std::invalid_argument("adjacent_angle_check: vertex must be interior");
    const SpacePoint p = xy.vertices[interior_vertex];
    DiscreteGeodesic toward_y = xy.subsegment(interior_vertex, xy.vertices.size() - 1);
    DiscreteGeodesic toward_x = xy.subsegment(interior_vertex, 0);
    DiscreteGeodesic toward_z = space.geodesic(p, z);

    const double reach =
        std::min({toward_x.length, toward_y.length, toward_z.length});
    const double r0 = reach / 8.0;
    const double err = std::max({toward_x.error_bound, toward_y.error_bound,
                                 toward_z.error_bound});
    auto scales = [&]() {
        std::vector<std::pair<double, double>> s;
        for (int k = 0; k < 9; ++k) {
            const double v = r0 / static_cast<double>(1 << k);
            if (v < 2.0 * err) break;
            s.emplace_back(v, v);
        }
        if (s.empty()) s.emplace_back(r0, r0);
        return s;
    }();

    Hinge hyz{p, toward_y, toward_z, scales};
    Hinge hxz{p, toward_x, toward_z, scales};
    const double a1 = hinge_angle(space, hyz, kappa).angle;
    const double a2 = hinge_angle(space, hxz, kappa).angle;
    return std::abs(a1 + a2 - pi);
}

// ----------------------------------------------------------- kappa-domain

DomainCertificate kappa_domain_check(const MetricSpace& space, const SpacePoint& center,
                                     double radius, double kappa,
                                     const DomainCheckOptions& opts) {
    DomainCertificate cert;
    cert.center = center;
    cert.radius = radius;
    cert.kappa = kappa;
    cert.pass = true;

    const std::vector<int> members = space.points_within(center, radius);
    const int m = static_cast<int>(members.size());

    const double r0 = radius / 8.0;
    auto fail = [&](double violation, const std::string& what) {
        cert.pass = false;
        cert.worst_violation = std::max(cert.worst_violation, violation);
        if (cert.witness.empty()) cert.witness = what;
    };

    if (m >= 3) {
        const long total = static_cast<long>(m) * (m - 1) * (m - 2);
        std::vector<long> chosen;
        if (total <= opts.max_configs) {
            chosen.resize(total);
            for (long t = 0; t < total; ++t) chosen[t] = t;
        } else {
            for (long t = 0; t < opts.max_configs; ++t)
                chosen.push_back(static_cast<long>(
                    substream(opts.seed, static_cast<uint64_t>(t)).next_below(total)));
            std::sort(chosen.begin(), chosen.end());
            chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
        }
        for (long code : chosen) {
            const int a = static_cast<int>(code / ((m - 1) * (m - 2)));
            const long rem = code % ((m - 1) * (m - 2));
            int b = static_cast<int>(rem / (m - 2));
            int c = static_cast<int>(rem % (m - 2));
            if (b >= a) ++b;
            for (int used : {std::min(a, b), std::max(a, b)})
                if (c >= used) ++c;
            const SpacePoint q = space.point(members[a]);
            const SpacePoint s = space.point(members[b]);
            const SpacePoint p = space.point(members[c]);
            if (!(space.distance(q, s) > 1e-12) || !(space.distance(q, p) > 1e-12)) continue;

            ++cert.configs;
            try {
                Hinge h = make_hinge(space, q, s, p, r0, opts.scale_levels, opts.resolution);
                const HingeAngle theta = hinge_angle(space, h, kappa);
                if (theta.flagged) {
                    fail(theta.deviation - theta.budget,
                         "non-monotone hinge at (" + space.ids[members[a]] + "," +
                             space.ids[members[b]] + "," + space.ids[members[c]] + ")");
                    continue;
                }
                const double dqp = space.distance(q, p);
                for (const auto& [scale, unused] : h.scales) {
                    if (scale > 0.995 * h.to_x.length) continue;
                    const SpacePoint sbar = space.point_along(h.to_x, scale);
                    const double dqs = space.distance(q, sbar);
                    if (!(dqs > 0.0)) continue;
                    const auto model =
                        model_angle(kappa, dqs, dqp, space.distance(sbar, p));
                    if (!model) continue;
                    const double viol = *model - theta.angle - theta.budget;
                    if (viol > 0.0)
                        fail(viol, "comparison fails at hinge (" + space.ids[members[a]] + "," +
                                       space.ids[members[b]] + "," + space.ids[members[c]] +
                                       ") scale " + std::to_string(scale));
                }
            } catch (const no_geodesic_error&) {
                ++cert.skipped;
                --cert.configs;
            } catch (const validation_error&) {
                // hinge not evaluable at any scale (coarse graph sampling)
                ++cert.skipped;
                --cert.configs;
            }
        }
    }

    // ball-doubling cross-check: quadruples in the half-radius ball
    std::vector<int> inner = space.points_within(center, 0.5 * radius);
    if (static_cast<int>(inner.size()) >= 4) {
        const ScanStrategy strat = static_cast<int>(inner.size()) <= 40
                                       ? ScanStrategy::Exhaustive()
                                       : ScanStrategy::Random(opts.max_scan, opts.seed);
        cert.half_ball_scan =
            scan_quadruples(space, kappa, strat, opts.workers, inner);
        if (!cert.half_ball_scan.clean())
            fail(cert.half_ball_scan.worst->excess,
                 "quadruple comparison fails in the half ball (worst p=" +
                     cert.half_ball_scan.worst->ids[0] + ")");
    }
    return cert;
}

}  // namespace cbb
