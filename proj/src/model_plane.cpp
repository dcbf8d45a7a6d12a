#include "cbb/model_plane.hpp"

#include <algorithm>

namespace cbb {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// sqrt of a product of slacks that may dip just below zero from rounding.
double sqrt_nonneg(double x) { return std::sqrt(std::max(0.0, x)); }

void require_hinge_inputs(double a, double b, double gamma) {
    if (!(a >= 0.0) || !(b >= 0.0))
        throw std::invalid_argument("model_side: sides must be nonnegative");
    if (!(gamma >= 0.0 && gamma <= pi + kClampGuard))
        throw std::invalid_argument("model_side: angle must lie in [0, pi]");
}

}  // namespace

std::optional<double> model_side(double kappa, double a, double b, double gamma) {
    require_hinge_inputs(a, b, gamma);
    gamma = std::min(gamma, pi);
    const double sg = std::sin(0.5 * gamma);

    if (kappa == 0.0) {
        // c^2 = (a-b)^2 + 4ab sin^2(gamma/2)
        return std::hypot(a - b, 2.0 * std::sqrt(a * b) * sg);
    }
    if (kappa > 0.0) {
        const double s = std::sqrt(kappa);
        double A = a * s, B = b * s;
        if (A > pi + kClampGuard || B > pi + kClampGuard) return std::nullopt;
        A = std::min(A, pi);
        B = std::min(B, pi);
        const double dh = std::sin(0.5 * (A - B));
        const double h = dh * dh + std::sin(A) * std::sin(B) * sg * sg;
        return 2.0 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, h)))) / s;
    }
    const double s = std::sqrt(-kappa);
    const double A = a * s, B = b * s;
    const double dh = std::sinh(0.5 * (A - B));
    const double h = dh * dh + std::sinh(A) * std::sinh(B) * sg * sg;
    return 2.0 * std::asinh(std::sqrt(std::max(0.0, h))) / s;
}

namespace {

// Triangle-inequality test with the clamp-guard slack, in the units of the
// arguments (lengths for kappa <= 0, radians on the sphere).
bool sides_consistent(double a, double b, double c, double guard) {
    const double hi = a + b + guard;
    const double lo = std::abs(a - b) - guard;
    return c <= hi && c >= lo;
}

}  // namespace

std::optional<double> model_angle(double kappa, double a, double b, double c) {
    if (!(a >= 0.0) || !(b >= 0.0) || !(c >= 0.0))
        throw std::invalid_argument("model_angle: sides must be nonnegative");

    if (kappa > 0.0) {
        const double s = std::sqrt(kappa);
        double A = a * s, B = b * s, C = c * s;
        const double g = kClampGuard;
        if (A > pi + g || B > pi + g || C > pi + g) return std::nullopt;
        if (A + B + C > 2.0 * pi + g) return std::nullopt;
        if (!sides_consistent(A, B, C, g * (1.0 + A + B + C))) return std::nullopt;
        if (A == 0.0 || B == 0.0) return 0.0;
        A = std::min(A, pi);
        B = std::min(B, pi);
        C = std::min(C, pi);
        const double sem = 0.5 * (A + B + C);
        // tan^2(gamma/2) = sin(s-A) sin(s-B) / (sin s sin(s-C))
        const double num = sqrt_nonneg(std::sin(sem - A) * std::sin(sem - B));
        const double den = sqrt_nonneg(std::sin(std::min(sem, pi)) * std::sin(sem - C));
        if (num == 0.0 && den == 0.0) return (sem - C <= 0.0 && sem >= pi - 1e-12) ? pi : 0.0;
        return 2.0 * std::atan2(num, den);
    }

    const double scale = (kappa == 0.0) ? 1.0 : std::sqrt(-kappa);
    const double A = a * scale, B = b * scale, C = c * scale;
    if (!sides_consistent(A, B, C, kClampGuard * (1.0 + A + B + C))) return std::nullopt;
    if (A == 0.0 || B == 0.0) return 0.0;
    const double sem = 0.5 * (A + B + C);

    if (kappa == 0.0) {
        const double num = sqrt_nonneg((sem - A) * (sem - B));
        const double den = sqrt_nonneg(sem * (sem - C));
        return 2.0 * std::atan2(num, den);
    }
    const double num = sqrt_nonneg(std::sinh(sem - A) * std::sinh(sem - B));
    const double den = sqrt_nonneg(std::sinh(sem) * std::sinh(sem - C));
    return 2.0 * std::atan2(num, den);
}

ModelTriangle ModelTriangle::from_sides(double kappa, double a, double b, double c) {
    ModelTriangle tri;
    tri.curv = Curvature(kappa);
    tri.a = a;
    tri.b = b;
    tri.c = c;
    tri.defined = model_angle(kappa, a, b, c).has_value();
    return tri;
}

ModelTriangle ModelTriangle::from_hinge(double kappa, double a, double b, double apex_angle) {
    ModelTriangle tri;
    tri.curv = Curvature(kappa);
    tri.a = a;
    tri.b = b;
    const auto c = model_side(kappa, a, b, apex_angle);
    if (c) {
        tri.c = *c;
        tri.defined = true;
    }
    return tri;
}

std::optional<double> ModelTriangle::apex_angle() const {
    return model_angle(curv.kappa, a, b, c);
}
std::optional<double> ModelTriangle::angle_at_p() const {
    return model_angle(curv.kappa, a, c, b);
}
std::optional<double> ModelTriangle::angle_at_q() const {
    return model_angle(curv.kappa, b, c, a);
}

double dist_to_opposite_side(const ModelTriangle& tri) {
    if (!tri.defined)
        throw std::invalid_argument("dist_to_opposite_side: undefined triangle");
    const double kappa = tri.curv.kappa;
    const auto gp = tri.angle_at_p();
    if (!gp) return 0.0;  // degenerate apex on the side
    const double angle_p = *gp;
    const double cosg = std::cos(angle_p);

    if (kappa == 0.0) {
        const double t = std::clamp(tri.a * cosg, 0.0, tri.c);
        return *model_side(0.0, tri.a, t, angle_p);
    }
    if (kappa > 0.0) {
        const double s = std::sqrt(kappa);
        const double A = tri.a * s, C = tri.c * s;
        // cos d(t) = cos A cos t + sin A cos(angle_p) sin t peaks at t = phi.
        const double phi = std::atan2(std::sin(A) * cosg, std::cos(A));
        const double t = std::clamp(phi, 0.0, C);
        const double cd = std::cos(A) * std::cos(t) + std::sin(A) * cosg * std::sin(t);
        return std::acos(std::clamp(cd, -1.0, 1.0)) / s;
    }
    const double s = std::sqrt(-kappa);
    const double A = tri.a * s, C = tri.c * s;
    const double phi = std::atanh(std::clamp(std::tanh(A) * cosg, -1.0, 1.0));
    const double t = std::clamp(phi, 0.0, C);
    const double chd = std::cosh(A) * std::cosh(t) - std::sinh(A) * cosg * std::sinh(t);
    return std::acosh(std::max(1.0, chd)) / s;
}

LemmaSplit alexandrov_lemma_split(double kappa, double wp, double wq,
                                  double target_angle_p, double target_angle_q,
                                  double opposite) {
    LemmaSplit out;
    if (opposite == 0.0) {
        // The split point coincides with both ends; any parameter works.
        out.feasible = true;
        out.t = 0.5;
        return out;
    }
    const auto full_opt = model_angle(kappa, wp, wq, opposite);
    if (!full_opt) return out;
    const double full = *full_opt;
    constexpr double kAngleTol = 1e-9;
    if (target_angle_p + target_angle_q < full - kAngleTol) return out;

    // Aim the angle toward p at the midpoint of the feasible window
    // [full - target_q, target_p]; both inequalities then hold with equal slack.
    const double theta = std::clamp(0.5 * (full + target_angle_p - target_angle_q), 0.0, full);

    const auto gp = model_angle(kappa, wp, opposite, wq);
    const double angle_p_base = gp.value_or(0.0);
    auto angle_toward_p = [&](double t) {
        const double da = model_side(kappa, wp, t * opposite, angle_p_base).value_or(0.0);
        return model_angle(kappa, wp, da, t * opposite).value_or(0.0);
    };

    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (angle_toward_p(mid) < theta ? lo : hi) = mid;
    }
    out.feasible = true;
    out.t = 0.5 * (lo + hi);
    const double da = model_side(kappa, wp, out.t * opposite, angle_p_base).value_or(0.0);
    out.angle_p = model_angle(kappa, wp, da, out.t * opposite).value_or(0.0);
    out.angle_q = model_angle(kappa, wq, da, (1.0 - out.t) * opposite).value_or(0.0);
    return out;
}

}  // namespace cbb
