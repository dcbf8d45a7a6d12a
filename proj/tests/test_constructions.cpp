#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbb/constructions.hpp"
#include "cbb/rng.hpp"

using namespace cbb;

namespace {

MetricSpace plane(int n = 8, uint64_t seed = 1) {
    SpaceSpec spec;
    spec.type = "euclidean";
    spec.radius = 3.0;
    spec.n = n;
    spec.seed = seed;
    return MetricSpace::generate(spec);
}

MetricSpace unit_sphere(int n = 12, uint64_t seed = 2) {
    SpaceSpec spec;
    spec.type = "sphere";
    spec.n = n;
    spec.seed = seed;
    return MetricSpace::generate(spec);
}

MetricSpace cone_space(double angle, bool canonical, uint64_t seed = 3, int n = 24) {
    SpaceSpec spec;
    spec.type = "cone";
    spec.total_angle = angle;
    spec.radius = 1.2;
    spec.n = n;
    spec.seed = seed;
    spec.canonical = canonical;
    return MetricSpace::generate(spec);
}

}  // namespace

TEST_CASE("radial curve in the plane is the ray from w") {
    const auto s = plane();
    const SpacePoint w(-1, {0, 0, 0}), a(-1, {0.5, 0, 0});
    const auto curve = radial_curve(s, w, a, 2.0, 0.1);
    CHECK(!curve.trapped);
    CHECK(curve.params.front() == doctest::Approx(0.5));
    CHECK(curve.params.back() == doctest::Approx(2.0));
    for (std::size_t k = 0; k < curve.vertices.size(); ++k) {
        CHECK(std::abs(s.distance(w, curve.vertices[k]) - curve.params[k]) <= 2 * curve.step);
        CHECK(std::abs(curve.vertices[k].chart(1)) < 1e-12);  // stays on the x-axis
    }
}

TEST_CASE("radial curve on the sphere follows the great circle") {
    const auto s = unit_sphere();
    const SpacePoint w(-1, {0, 0, 1});
    const SpacePoint a(-1, {std::sin(0.4), 0, std::cos(0.4)});
    const auto curve = radial_curve(s, w, a, 1.4, 0.05);
    CHECK(!curve.trapped);
    for (std::size_t k = 0; k < curve.vertices.size(); ++k) {
        CHECK(std::abs(s.distance(w, curve.vertices[k]) - curve.params[k]) <= 1e-9);
        CHECK(std::abs(curve.vertices[k].chart(1)) < 1e-12);  // meridian plane
    }
}

TEST_CASE("radial curve on the tripod is trapped at a leaf") {
    SpaceSpec spec;
    spec.type = "tripod";
    const auto t = MetricSpace::generate(spec);
    const auto hub = t.point(t.index_of("hub"));
    const auto curve = radial_curve(t, hub, t.point(t.index_of("a01")), 2.5, 0.25);
    CHECK(curve.trapped);
    CHECK(t.ids[curve.trap_vertex.id] == "a04");
    CHECK(curve.params.back() == doctest::Approx(1.0));
}

TEST_CASE("degenerate radial curve is a vacuous single point") {
    const auto s = plane();
    const SpacePoint w(-1, {0, 0, 0}), a(-1, {0.5, 0, 0});
    const auto curve = radial_curve(s, w, a, 0.5, 0.1);
    CHECK(curve.vertices.size() == 1);
    const auto mono = radial_monotonicity_check(s, curve, SpacePoint(-1, {1, 1, 0}), 0.0);
    CHECK(mono.max_increase == 0.0);
}

TEST_CASE("radial monotonicity is exact in the plane") {
    const auto s = plane();
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const SpacePoint w(-1, {rng.uniform(-1, 1), rng.uniform(-1, 1), 0});
        const SpacePoint a(-1, {w.chart(0) + rng.uniform(0.2, 0.5), w.chart(1) + rng.uniform(0.1, 0.4), 0});
        const SpacePoint p(-1, {rng.uniform(-1, 1), rng.uniform(-1, 1), 0});
        if (s.distance(w, p) < 0.05) continue;
        const auto curve = radial_curve(s, w, a, s.distance(w, a) + 1.0, 0.05);
        const auto mono = radial_monotonicity_check(s, curve, p, 0.0);
        CHECK(mono.max_increase <= 1e-9);
        CHECK(!mono.undefined_seen);
    }
}

TEST_CASE("radial monotonicity on the sphere stays within budget") {
    const auto s = unit_sphere();
    const SpacePoint w(-1, {0, 0, 1});
    const SpacePoint a(-1, {std::sin(0.3), 0, std::cos(0.3)});
    const SpacePoint p(-1, {std::sin(pi / 4) * std::cos(1.0), std::sin(pi / 4) * std::sin(1.0),
                            std::cos(pi / 4)});
    const auto curve = radial_curve(s, w, a, 1.5, 0.02);
    for (double kappa : {1.0, 0.5, 0.0}) {
        const auto mono = radial_monotonicity_check(s, curve, p, kappa);
        CHECK(mono.max_increase <= 1e-6);
    }
}

TEST_CASE("radial monotonicity flags undefined model triangles") {
    const auto s = unit_sphere();
    const SpacePoint w(-1, {0, 0, 1});
    const SpacePoint a(-1, {std::sin(0.2), 0, std::cos(0.2)});
    const SpacePoint p(-1, {std::sin(0.9), 0, std::cos(0.9)});
    const auto curve = radial_curve(s, w, a, 2.0, 0.05);
    const auto mono = radial_monotonicity_check(s, curve, p, 4.0);
    CHECK(mono.undefined_seen);  // the t side passes the model diameter pi/2
}

TEST_CASE("cats cradle: recomputable summaries and epsilon steps") {
    const auto s = plane();
    const SpacePoint p(-1, {-1, 0, 0}), q(-1, {1, 0, 0}), w(-1, {0, -1, 0});
    const auto trace = cats_cradle(s, p, q, w, 0.1, 25);
    REQUIRE(trace.vertices.size() >= 3);
    // step lengths
    for (std::size_t k = 1; k < trace.vertices.size(); ++k)
        CHECK(s.distance(trace.vertices[k - 1], trace.vertices[k]) ==
              doctest::Approx(0.1).epsilon(1e-9));
    // ell and s recomputation
    SpacePoint last_even = trace.vertices[0];
    double acc = 0.0;
    for (std::size_t n = 0; n < trace.even_count(); ++n) {
        const SpacePoint& even = trace.vertices[2 * n];
        if (n > 0) acc += s.distance(last_even, even);
        last_even = even;
        const double ell = s.distance(p, even) + s.distance(even, q);
        CHECK(std::abs(ell - trace.ell[n]) <= 1e-12);
        CHECK(std::abs(acc - trace.s[n]) <= 1e-12);
    }
    CHECK(cradle_domain_containment(s, trace, w, 2.0));
}

TEST_CASE("cats cradle boundary step lands on the target") {
    const auto s = plane();
    const SpacePoint p(-1, {-1, 0, 0}), q(-1, {1, 0, 0}), w(-1, {0, -1, 0});
    const double eps = s.distance(w, p);
    const auto trace = cats_cradle(s, p, q, w, eps, 3);
    REQUIRE(trace.vertices.size() >= 3);
    CHECK(s.distance(trace.vertices[1], p) <= 1e-12);
    // next step moves along [q p]
    CHECK(std::abs(trace.vertices[2].chart(1)) <= 1e-9);
}

TEST_CASE("collinear cradle stays on the line with constant ell") {
    const auto s = plane();
    const SpacePoint p(-1, {-1, 0, 0}), q(-1, {1, 0, 0}), w(-1, {0.3, 0, 0});
    const auto trace = cats_cradle(s, p, q, w, 0.1, 10);
    for (const auto& v : trace.vertices) CHECK(std::abs(v.chart(1)) < 1e-12);
    for (double ell : trace.ell) CHECK(ell == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cradle converges when the target is within epsilon") {
    const auto s = plane();
    const SpacePoint p(-1, {-0.05, 0, 0}), q(-1, {1, 0, 0}), w(-1, {0, 0, 0});
    const auto trace = cats_cradle(s, p, q, w, 0.2, 10);
    CHECK(trace.halt == CradleHalt::converged);
}

TEST_CASE("containment is vacuous when s_1 already reaches R - eps") {
    const auto s = plane();
    const SpacePoint p(-1, {-1, 0, 0}), q(-1, {1, 0, 0}), w(-1, {0, -1, 0});
    auto trace = cats_cradle(s, p, q, w, 0.1, 10);
    CHECK(cradle_domain_containment(s, trace, w, trace.epsilon * 0.5));
    // adversarial edit: teleport a covered vertex far away
    if (trace.vertices.size() > 4) {
        trace.vertices[2] = SpacePoint(-1, {50, 50, 0});
        CHECK(!cradle_domain_containment(s, trace, w, 2.0));
    }
}

TEST_CASE("key lemma on the plane gives equality") {
    const auto s = plane(14, 9);
    SplitMix64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const SpacePoint w(-1, {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 0});
        const SpacePoint p(-1, {w.chart(0) + rng.uniform(0.4, 0.9), w.chart(1) + rng.uniform(-0.2, 0.2), 0});
        const SpacePoint q(-1, {w.chart(0) + rng.uniform(-0.3, 0.3), w.chart(1) + rng.uniform(0.4, 0.9), 0});
        const auto res = key_lemma_check(s, p, q, w, 0.0);
        REQUIRE(res.verdict == KeyLemmaVerdict::verified);
        CHECK(std::abs(res.d_pq - res.model_pq) <= res.budget + 1e-9);
    }
}

TEST_CASE("key lemma on the unit sphere gives equality at kappa 1") {
    const auto s = unit_sphere(16, 5);
    const SpacePoint w(-1, {0, 0, 1});
    const SpacePoint p(-1, {std::sin(0.5), 0, std::cos(0.5)});
    const SpacePoint q(-1, {std::sin(0.45) * std::cos(1.1), std::sin(0.45) * std::sin(1.1),
                            std::cos(0.45)});
    const auto res = key_lemma_check(s, p, q, w, 1.0);
    REQUIRE(res.verdict == KeyLemmaVerdict::verified);
    CHECK(std::abs(res.d_pq - res.model_pq) <= 1e-6);
}

TEST_CASE("key lemma degenerate R = 0 verifies by the triangle inequality") {
    const auto s = plane();
    const SpacePoint p(-1, {-1, 0, 0}), q(-1, {1, 0, 0}), w(-1, {0, 0, 0});
    const auto res = key_lemma_check(s, p, q, w, 0.0);
    CHECK(res.verdict == KeyLemmaVerdict::verified);
    CHECK(res.R <= 1e-9);
    CHECK(res.model_pq == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("key lemma is strict across the cone apex") {
    const auto s = cone_space(1.5 * pi, true);
    const auto w = s.point(s.index_of("c0"));
    const auto p = s.point(s.index_of("c1"));
    const auto q = s.point(s.index_of("c2"));
    const auto res = key_lemma_check(s, p, q, w, 0.0);
    REQUIRE(res.verdict == KeyLemmaVerdict::verified);
    const double rc = 0.9 * 1.2;  // canonical radius
    CHECK(res.hinge == doctest::Approx(pi / 2).epsilon(1e-6));
    CHECK(res.d_pq == doctest::Approx(rc * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(res.model_pq == doctest::Approx(rc * 2.0).epsilon(1e-6));
    CHECK(res.model_pq - res.d_pq > 0.05);
}

TEST_CASE("key lemma bisector mode certifies the larger ball") {
    const auto s = plane(14, 9);
    const SpacePoint w(-1, {0, 0, 0}), p(-1, {1, 0, 0}), q(-1, {0, 1.2, 0});
    KeyLemmaOptions opts;
    opts.bisector_mode = true;
    const auto res = key_lemma_check(s, p, q, w, 0.0, opts);
    CHECK(res.verdict == KeyLemmaVerdict::verified);
    CHECK(res.bisector >= res.R - 1e-12);
}
