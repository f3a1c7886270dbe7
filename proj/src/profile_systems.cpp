#include "profile_systems.hpp"

#include <cassert>
#include <limits>
#include <cmath>

#include "otg/tolerances.hpp"

namespace otg::detail {

namespace {

constexpr double kDivGuard = 1e-12;

using limit_tag::kAcc0;
using limit_tag::kAcc1;
using limit_tag::kVel;

Profile make_profile(const Frame& f, Pattern pat, unsigned limits,
                     const std::array<double, 7>& t, double jerk_mag) {
    Profile p;
    p.pattern = pat;
    p.direction = Direction::kUp;
    p.limits = limits;
    p.jerk = jerk_mag;
    p.t = t;
    p.finalize(f.x0);
    return p;
}

// Position step for polynomial chains: v t + a t^2/2 + jerk t^3/6.
Polynomial dp_step(const Polynomial& v, const Polynomial& a, const Polynomial& t, double jerk) {
    const Polynomial t2 = p_mul(t, t);
    Polynomial r = p_mul(v, t);
    r = p_add(r, p_scale(p_mul(a, t2), 0.5));
    r = p_add(r, p_scale(p_mul(t, t2), jerk / 6.0));
    return r;
}

YExpr ydp_step(const Conic& c, const YExpr& v, const YExpr& a, const YExpr& t, double jerk) {
    const YExpr t2 = y_mul(c, t, t);
    YExpr r = y_mul(c, v, t);
    r = y_add(r, y_scale(y_mul(c, a, t2), 0.5));
    r = y_add(r, y_scale(y_mul(c, t, t2), jerk / 6.0));
    return r;
}

// Dependent-variable candidates for one root of an eliminated conic system.
// Near profile-type boundaries the y-coefficient of the residual vanishes and
// -A/B degrades, so the conic's own solutions are emitted as well; the full
// profile validation (terminal-state match) filters wrong pairings.
int conic_back_substitute(const Conic& conic, const YExpr& residual, double x, double out[3]) {
    int n = 0;
    const double av = residual.a.eval(x);
    const double bv = residual.b.eval(x);
    if (std::abs(bv) > 1e-9 * std::max(1.0, std::abs(av))) {
        out[n++] = -av / bv;
    }
    const double disc = conic.b1 * conic.b1 + 4 * conic.a1.eval(x);
    if (disc >= 0) {
        const double s = std::sqrt(disc);
        out[n++] = (conic.b1 + s) / 2;
        out[n++] = (conic.b1 - s) / 2;
    }
    return n;
}

// Secant refinement of a scalar-parametrized residual. Polynomial roots of
// the reduced systems lose half their precision near merging profile types
// (close root pairs); a few secant steps on the exactly-integrated residual
// restore machine accuracy. Bounded work, no allocation.
template <typename F>
double secant_refine(double p0, F&& residual, int iters = 12) {
    double a = p0;
    double fa = residual(a);
    if (!std::isfinite(fa)) {
        return p0;
    }
    double best = a;
    double fbest = std::abs(fa);
    double b = p0 + 1e-7 * std::max(1.0, std::abs(p0));
    double fb = residual(b);
    for (int i = 0; i < iters; ++i) {
        if (!std::isfinite(fb)) {
            break;
        }
        if (std::abs(fb) < fbest) {
            best = b;
            fbest = std::abs(fb);
        }
        if (fb == fa || fbest == 0.0) {
            break;
        }
        const double c = b - fb * (b - a) / (fb - fa);
        if (!std::isfinite(c)) {
            break;
        }
        a = b;
        fa = fb;
        b = c;
        fb = residual(b);
        if (std::abs(b - a) <= 1e-16 * std::max(1.0, std::abs(b))) {
            if (std::isfinite(fb) && std::abs(fb) < fbest) {
                best = b;
                fbest = std::abs(fb);
            }
            break;
        }
    }
    return best;
}

// Two-dimensional Newton refinement over two free accelerations with the
// velocity and position residuals as targets (numerical Jacobian). Used by
// the conic rows, whose square-root parametrizations degrade exactly at the
// profile-type boundaries.
template <typename F>
void newton2_refine(double& p, double& q, F&& residuals, int iters = 10) {
    double rv, rp;
    residuals(p, q, rv, rp);
    if (!std::isfinite(rv) || !std::isfinite(rp)) {
        return;
    }
    double best_p = p, best_q = q;
    double best = std::abs(rv) + std::abs(rp);
    for (int i = 0; i < iters; ++i) {
        const double hp = 1e-7 * std::max(1.0, std::abs(p));
        const double hq = 1e-7 * std::max(1.0, std::abs(q));
        double rv_p, rp_p, rv_q, rp_q;
        residuals(p + hp, q, rv_p, rp_p);
        residuals(p, q + hq, rv_q, rp_q);
        const double a11 = (rv_p - rv) / hp, a12 = (rv_q - rv) / hq;
        const double a21 = (rp_p - rp) / hp, a22 = (rp_q - rp) / hq;
        const double det = a11 * a22 - a12 * a21;
        if (!std::isfinite(det) || std::abs(det) < 1e-300) {
            break;
        }
        double dp = (-rv * a22 + rp * a12) / det;
        double dq = (-rp * a11 + rv * a21) / det;
        const double cap = 0.5 * (1.0 + std::abs(p) + std::abs(q));
        const double norm = std::max(std::abs(dp), std::abs(dq));
        if (norm > cap) {
            dp *= cap / norm;
            dq *= cap / norm;
        }
        p += dp;
        q += dq;
        residuals(p, q, rv, rp);
        if (!std::isfinite(rv) || !std::isfinite(rp)) {
            break;
        }
        const double score = std::abs(rv) + std::abs(rp);
        if (score < best) {
            best = score;
            best_p = p;
            best_q = q;
        }
        if (score == 0.0 || norm <= 1e-16 * (1.0 + std::abs(p) + std::abs(q))) {
            break;
        }
    }
    p = best_p;
    q = best_q;
}

}  // namespace

// ---- polynomial calculus ---------------------------------------------------

Polynomial p_const(double c) {
    Polynomial p;
    p.c[0] = c;
    p.degree = 0;
    return p;
}

Polynomial p_x() {
    Polynomial p;
    p.c[1] = 1.0;
    p.degree = 1;
    return p;
}

Polynomial p_add(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.degree = std::max(a.degree, b.degree);
    for (int i = 0; i <= r.degree; ++i) {
        r.c[i] = (i <= a.degree ? a.c[i] : 0.0) + (i <= b.degree ? b.c[i] : 0.0);
    }
    return r;
}

Polynomial p_sub(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.degree = std::max(a.degree, b.degree);
    for (int i = 0; i <= r.degree; ++i) {
        r.c[i] = (i <= a.degree ? a.c[i] : 0.0) - (i <= b.degree ? b.c[i] : 0.0);
    }
    return r;
}

Polynomial p_mul(const Polynomial& a, const Polynomial& b) {
    assert(a.degree + b.degree <= roots::kMaxDegree);
    Polynomial r;
    r.degree = a.degree + b.degree;
    for (int i = 0; i <= a.degree; ++i) {
        for (int k = 0; k <= b.degree; ++k) {
            r.c[i + k] += a.c[i] * b.c[k];
        }
    }
    return r;
}

Polynomial p_scale(const Polynomial& a, double s) {
    Polynomial r = a;
    for (int i = 0; i <= r.degree; ++i) {
        r.c[i] *= s;
    }
    return r;
}

YExpr y_const(double c) { return YExpr{p_const(c), p_const(0)}; }
YExpr y_from(const Polynomial& p) { return YExpr{p, p_const(0)}; }
YExpr y_var() { return YExpr{p_const(0), p_const(1)}; }

YExpr y_add(const YExpr& p, const YExpr& q) { return YExpr{p_add(p.a, q.a), p_add(p.b, q.b)}; }
YExpr y_sub(const YExpr& p, const YExpr& q) { return YExpr{p_sub(p.a, q.a), p_sub(p.b, q.b)}; }
YExpr y_scale(const YExpr& p, double s) { return YExpr{p_scale(p.a, s), p_scale(p.b, s)}; }

YExpr y_mul(const Conic& c, const YExpr& p, const YExpr& q) {
    // (pa + y pb)(qa + y qb) with y^2 = a1 + b1 y.
    const Polynomial bb = p_mul(p.b, q.b);
    YExpr r;
    r.a = p_add(p_mul(p.a, q.a), p_mul(c.a1, bb));
    r.b = p_add(p_add(p_mul(p.a, q.b), p_mul(p.b, q.a)), p_scale(bb, c.b1));
    return r;
}

namespace {

Polynomial p_abs(const Polynomial& a) {
    Polynomial r = a;
    for (int i = 0; i <= r.degree; ++i) {
        r.c[i] = std::abs(r.c[i]);
    }
    return r;
}

// Zero out coefficients that sit below the roundoff floor of the expression
// that produced them (floor tracked via absolute-value arithmetic). The
// eliminations cancel their top coefficients structurally, and leftover junk
// there otherwise poisons the root isolation.
void strip_noise(Polynomial& p, const Polynomial& floor_poly) {
    constexpr double kNoise = 64 * 2.22e-16;
    for (int i = 0; i <= p.degree; ++i) {
        const double floor_i = i <= floor_poly.degree ? floor_poly.c[i] : 0.0;
        if (std::abs(p.c[i]) <= kNoise * floor_i) {
            p.c[i] = 0.0;
        }
    }
    while (p.degree > 0 && p.c[p.degree] == 0.0) {
        --p.degree;
    }
}

}  // namespace

Polynomial y_eliminate(const Conic& c, const YExpr& r) {
    // r.a + y r.b = 0 with y on the conic: a^2 + b1 a b - a1 b^2 = 0.
    const Polynomial ab = p_mul(r.a, r.b);
    Polynomial p = p_mul(r.a, r.a);
    p = p_add(p, p_scale(ab, c.b1));
    p = p_sub(p, p_mul(c.a1, p_mul(r.b, r.b)));

    const Polynomial aa = p_abs(r.a);
    const Polynomial bb = p_abs(r.b);
    Polynomial floor_poly = p_mul(aa, aa);
    floor_poly = p_add(floor_poly, p_scale(p_mul(aa, bb), std::abs(c.b1)));
    floor_poly = p_add(floor_poly, p_mul(p_abs(c.a1), p_mul(bb, bb)));
    strip_noise(p, floor_poly);
    return p;
}

UPoly u_const(double v) { return UPoly{{p_const(v), p_const(0), p_const(0)}}; }
UPoly u_from(const Polynomial& p) { return UPoly{{p, p_const(0), p_const(0)}}; }
UPoly u_linear(const Polynomial& p) { return UPoly{{p_const(0), p, p_const(0)}}; }

UPoly u_add(const UPoly& a, const UPoly& b) {
    UPoly r;
    for (int k = 0; k < 3; ++k) {
        r.c[k] = p_add(a.c[k], b.c[k]);
    }
    return r;
}

UPoly u_sub(const UPoly& a, const UPoly& b) {
    UPoly r;
    for (int k = 0; k < 3; ++k) {
        r.c[k] = p_sub(a.c[k], b.c[k]);
    }
    return r;
}

UPoly u_mul(const UPoly& a, const UPoly& b) {
    UPoly r;
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            if (i + k > 2) {
                // Chains in this file never produce u-degrees above two.
                assert(a.c[i].max_abs_coeff() == 0.0 || b.c[k].max_abs_coeff() == 0.0);
                continue;
            }
            r.c[i + k] = p_add(r.c[i + k], p_mul(a.c[i], b.c[k]));
        }
    }
    return r;
}

UPoly u_scale(const UPoly& a, double s) {
    UPoly r;
    for (int k = 0; k < 3; ++k) {
        r.c[k] = p_scale(a.c[k], s);
    }
    return r;
}

Polynomial u_substitute(const UPoly& p, double n, const Polynomial& d) {
    const Polynomial d2 = p_mul(d, d);
    Polynomial r = p_mul(p.c[0], d2);
    r = p_add(r, p_scale(p_mul(p.c[1], d), n));
    r = p_add(r, p_scale(p.c[2], n * n));

    const Polynomial da = p_abs(d);
    Polynomial floor_poly = p_mul(p_abs(p.c[0]), p_mul(da, da));
    floor_poly = p_add(floor_poly, p_scale(p_mul(p_abs(p.c[1]), da), std::abs(n)));
    floor_poly = p_add(floor_poly, p_scale(p_abs(p.c[2]), n * n));
    strip_noise(r, floor_poly);
    return r;
}

// ---- mirroring -------------------------------------------------------------

KinematicState mirror_state(const KinematicState& x) { return {-x.p, -x.v, -x.a}; }

Limits mirror_limits(const Limits& l) {
    Limits m;
    m.v_min = -l.v_max;
    m.v_max = -l.v_min;
    m.a_min = -l.a_max;
    m.a_max = -l.a_min;
    m.j_max = l.j_max;
    return m;
}

Profile mirror_profile(Profile p, const KinematicState& original_x0) {
    p.direction = p.direction == Direction::kUp ? Direction::kDown : Direction::kUp;
    p.finalize(original_x0);
    return p;
}

// ---- step 1 ----------------------------------------------------------------

void s1_vel(const Frame& f, bool acc0, bool acc1, Candidates& out) {
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;

    double t1, t2, t3;
    if (acc0) {
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        t1 = (l.a_max - a0) / j;
        t2 = (l.v_max - v0) / l.a_max + (a0 * a0 - 2 * l.a_max * l.a_max) / (2 * j * l.a_max);
        t3 = l.a_max / j;
    } else {
        const double rad = j * (l.v_max - v0) + a0 * a0 / 2;
        if (rad < 0) {
            return;
        }
        const double a1 = std::sqrt(rad);
        t1 = (a1 - a0) / j;
        t2 = 0;
        t3 = a1 / j;
    }

    double t5, t6, t7;
    if (acc1) {
        if (std::abs(l.a_min) < kDivGuard) {
            return;
        }
        t5 = -l.a_min / j;
        t6 = (vf - l.v_max) / l.a_min + (2 * l.a_min * l.a_min - af * af) / (2 * j * l.a_min);
        t7 = (af - l.a_min) / j;
    } else {
        const double rad = af * af / 2 + j * (l.v_max - vf);
        if (rad < 0) {
            return;
        }
        const double a5 = -std::sqrt(rad);
        t5 = -a5 / j;
        t6 = 0;
        t7 = (af - a5) / j;
    }

    const unsigned mask = kVel | (acc0 ? kAcc0 : 0u) | (acc1 ? kAcc1 : 0u);
    Profile p = make_profile(f, Pattern::kUDDU, mask, {t1, t2, t3, 0, t5, t6, t7}, j);
    if (std::abs(l.v_max) < kDivGuard) {
        out.push(p);  // no usable cruise; only exact-distance cases survive validation
        return;
    }
    p.t[3] = (f.xf.p - p.states[7].p) / l.v_max;
    p.finalize(f.x0);
    out.push(p);
}

void s1_vel_low(const Frame& f, bool acc0, bool acc1, Candidates& out) {
    // Supplementary extremal family: an UP-pattern (UDUD) profile whose
    // velocity plateau sits at the LOWER bound. It arises when the initial
    // acceleration is strongly negative (typically right after a
    // margin-stopped brake): recovering it at +j already sinks the velocity
    // to v_min, the profile cruises there, and then pulls away upward.
    // These rows only exist for starts whose full-jerk recovery already
    // reaches the lower velocity bound (margin-stopped brake handoffs);
    // elsewhere they would inject spurious set members.
    {
        const double settle = f.x0.a > 0 ? f.x0.v + f.x0.a * f.x0.a / (2 * f.jerk)
                                         : f.x0.v - f.x0.a * f.x0.a / (2 * f.jerk);
        const double slack = 1e-9 * std::max(1.0, std::abs(f.limits.v_min));
        if (f.x0.v >= f.limits.v_min + slack && settle >= f.limits.v_min + slack) {
            return;
        }
    }
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;

    double t1, t2, t3;
    if (acc0) {
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        t1 = (l.a_max - a0) / j;
        t2 = (l.v_min - v0) / l.a_max + (a0 * a0 - 2 * l.a_max * l.a_max) / (2 * j * l.a_max);
        t3 = l.a_max / j;
    } else {
        const double rad = j * (l.v_min - v0) + a0 * a0 / 2;
        if (rad < 0) {
            return;
        }
        const double a1 = std::sqrt(rad);
        t1 = (a1 - a0) / j;
        t2 = 0;
        t3 = a1 / j;
    }

    double t5, t6, t7;
    if (acc1) {
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        t5 = l.a_max / j;
        t6 = (vf - l.v_min) / l.a_max - (2 * l.a_max * l.a_max - af * af) / (2 * j * l.a_max);
        t7 = (l.a_max - af) / j;
    } else {
        const double rad = j * (vf - l.v_min) + af * af / 2;
        if (rad < 0) {
            return;
        }
        const double a5 = std::sqrt(rad);
        t5 = a5 / j;
        t6 = 0;
        t7 = (a5 - af) / j;
    }

    const unsigned mask = kVel | (acc0 ? kAcc0 : 0u) | (acc1 ? kAcc1 : 0u);
    Profile p = make_profile(f, Pattern::kUDUD, mask, {t1, t2, t3, 0, t5, t6, t7}, j);
    if (std::abs(l.v_min) < kDivGuard) {
        out.push(p);
        return;
    }
    p.t[3] = (f.xf.p - p.states[7].p) / l.v_min;
    p.finalize(f.x0);
    out.push(p);
}

void s1_vel_zero(const Frame& f, bool acc0, bool acc1, Candidates& out) {
    // Supplementary extremal family: the t4 -> 0 boundary of the free-plateau
    // UDUD profiles (four active ramps, acceleration crossing zero between
    // them). These are the missing boundary profiles of blocked intervals
    // whose bounding profile carries no saturated limit.
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;
    const double dv = vf - v0;
    const double dp = f.xf.p - f.x0.p;

    if (acc0 && acc1) {
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        const double t1 = (l.a_max - a0) / j;
        const double t3 = l.a_max / j;
        const double t5 = l.a_max / j;
        const double t7 = (l.a_max - af) / j;
        const double rv = dv - (2 * l.a_max * l.a_max - a0 * a0) / (2 * j) -
                          (2 * l.a_max * l.a_max - af * af) / (2 * j);
        // t2 + t6 = rv / a_max; the position equation picks the split.
        const Polynomial w = p_x();
        const Polynomial t2 = p_sub(p_const(rv / l.a_max), w);
        const Polynomial v1 = p_const(v0 + (l.a_max * l.a_max - a0 * a0) / (2 * j));
        Polynomial pos = p_const(v0 * t1 + a0 * t1 * t1 / 2 + j * t1 * t1 * t1 / 6);
        pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
        const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
        pos = p_add(pos, dp_step(v2, p_const(l.a_max), p_const(t3), -j));
        const Polynomial v3 = p_add(v2, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, dp_step(v3, p_const(0.0), p_const(t5), j));
        const Polynomial v5 = p_add(v3, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, dp_step(v5, p_const(l.a_max), w, 0.0));
        const Polynomial v6 = p_add(v5, p_scale(w, l.a_max));
        pos = p_add(pos, dp_step(v6, p_const(l.a_max), p_const(t7), -j));
        auto build = [&](double t6) {
            return make_profile(f, Pattern::kUDUD, kAcc0 | kVel | kAcc1,
                                {t1, t2.eval(t6), t3, 0, t5, t6, t7}, j);
        };
        const roots::RootSet rs = roots::solve_quadratic(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double t6 = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(t6));
        }
        return;
    }

    if (acc0 && !acc1) {
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        const double t1 = (l.a_max - a0) / j;
        const double t3 = l.a_max / j;
        const Polynomial e = p_x();
        const Polynomial e2 = p_mul(e, e);
        const double c0 = (dv - (2 * l.a_max * l.a_max - a0 * a0 - af * af) / (2 * j)) / l.a_max;
        const Polynomial t2 = p_add(p_const(c0), p_scale(e2, -1.0 / (j * l.a_max)));
        const Polynomial t5 = p_scale(e, 1.0 / j);
        const Polynomial t7 = p_scale(p_sub(e, p_const(af)), 1.0 / j);
        const Polynomial v1 = p_const(v0 + (l.a_max * l.a_max - a0 * a0) / (2 * j));
        Polynomial pos = p_const(v0 * t1 + a0 * t1 * t1 / 2 + j * t1 * t1 * t1 / 6);
        pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
        const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
        pos = p_add(pos, dp_step(v2, p_const(l.a_max), p_const(t3), -j));
        const Polynomial v3 = p_add(v2, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, dp_step(v3, p_const(0.0), t5, j));
        const Polynomial v5 = p_add(v3, p_scale(e2, 1.0 / (2 * j)));
        pos = p_add(pos, dp_step(v5, e, t7, -j));
        auto build = [&](double ev) {
            return make_profile(f, Pattern::kUDUD, kAcc0 | kVel,
                                {t1, t2.eval(ev), t3, 0, t5.eval(ev), 0, t7.eval(ev)}, j);
        };
        const roots::RootSet rs = roots::solve(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double ev = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(ev));
        }
        return;
    }

    if (!acc0 && acc1) {
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        const double t5 = l.a_max / j;
        const double t7 = (l.a_max - af) / j;
        const Polynomial y = p_x();
        const Polynomial y2 = p_mul(y, y);
        const double d0 = (dv + (a0 * a0 - 2 * l.a_max * l.a_max + af * af) / (2 * j)) / l.a_max;
        const Polynomial t6 = p_add(p_const(d0), p_scale(y2, -1.0 / (j * l.a_max)));
        const Polynomial t1 = p_scale(p_sub(y, p_const(a0)), 1.0 / j);
        const Polynomial t3 = p_scale(y, 1.0 / j);
        Polynomial pos = dp_step(p_const(v0), p_const(a0), t1, j);
        const Polynomial v1 = p_add(p_const(v0 - a0 * a0 / (2 * j)), p_scale(y2, 1.0 / (2 * j)));
        pos = p_add(pos, dp_step(v1, y, t3, -j));
        const Polynomial v3 = p_add(v1, p_scale(y2, 1.0 / (2 * j)));
        pos = p_add(pos, dp_step(v3, p_const(0.0), p_const(t5), j));
        const Polynomial v5 = p_add(v3, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, dp_step(v5, p_const(l.a_max), t6, 0.0));
        const Polynomial v6 = p_add(v5, p_scale(t6, l.a_max));
        pos = p_add(pos, dp_step(v6, p_const(l.a_max), p_const(t7), -j));
        auto build = [&](double yv) {
            return make_profile(f, Pattern::kUDUD, kVel | kAcc1,
                                {t1.eval(yv), 0, t3.eval(yv), 0, t5, t6.eval(yv), t7}, j);
        };
        const roots::RootSet rs = roots::solve(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double yv = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(yv));
        }
        return;
    }

    // No holds: first peak y, second peak e with e^2 = K - y^2; sextic.
    const double K = j * dv + (a0 * a0 + af * af) / 2;
    Conic conic;
    conic.a1 = p_sub(p_const(K), p_mul(p_x(), p_x()));
    conic.b1 = 0.0;
    const YExpr yp = y_from(p_x());
    const YExpr ep = y_var();
    const YExpr t1 = y_scale(y_sub(yp, y_const(a0)), 1.0 / j);
    const YExpr t3 = y_scale(yp, 1.0 / j);
    const YExpr t5 = y_scale(ep, 1.0 / j);
    const YExpr t7 = y_scale(y_sub(ep, y_const(af)), 1.0 / j);
    YExpr pos = ydp_step(conic, y_const(v0), y_const(a0), t1, j);
    const Polynomial v1p =
        p_add(p_const(v0 - a0 * a0 / (2 * j)), p_scale(p_mul(p_x(), p_x()), 1.0 / (2 * j)));
    pos = y_add(pos, ydp_step(conic, y_from(v1p), yp, t3, -j));
    const Polynomial v3p = p_add(v1p, p_scale(p_mul(p_x(), p_x()), 1.0 / (2 * j)));
    pos = y_add(pos, ydp_step(conic, y_from(v3p), y_const(0.0), t5, j));
    const Polynomial v5p =
        p_add(v3p, p_scale(p_sub(p_const(K), p_mul(p_x(), p_x())), 1.0 / (2 * j)));
    pos = y_add(pos, ydp_step(conic, y_from(v5p), ep, t7, -j));
    const YExpr residual = y_sub(pos, y_const(dp));
    Polynomial reduced = y_eliminate(conic, residual);
    const roots::RootSet rs = roots::solve(reduced);
    auto build = [&](double yv, double e) {
        return make_profile(f, Pattern::kUDUD, kVel,
                            {(yv - a0) / j, 0, yv / j, 0, e / j, 0, (e - af) / j}, j);
    };
    for (int i = 0; i < rs.count; ++i) {
        double es[3];
        const int ne = conic_back_substitute(conic, residual, rs.values[i], es);
        for (int k = 0; k < ne; ++k) {
            double yv = rs.values[i];
            double e = es[k];
            newton2_refine(yv, e, [&](double yq, double eq, double& rv, double& rp) {
                const Profile p = build(yq, eq);
                rv = p.states[7].v - f.xf.v;
                rp = p.states[7].p - f.xf.p;
            });
            out.push(build(yv, e));
        }
    }
}

void s1_acc0_acc1(const Frame& f, Candidates& out) {
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;
    if (std::abs(l.a_max) < kDivGuard) {
        return;
    }

    const double t1 = (l.a_max - a0) / j;
    const double t3 = (l.a_max - l.a_min) / j;
    const double t7 = (af - l.a_min) / j;
    const double rv = (vf - v0) -
                      ((l.a_max * l.a_max - a0 * a0) + (l.a_max * l.a_max - l.a_min * l.a_min) +
                       (af * af - l.a_min * l.a_min)) /
                          (2 * j);

    // Variable w = t6; t2 = (rv - a_min w)/a_max from the velocity equation.
    const Polynomial w = p_x();
    const Polynomial t2 = p_add(p_const(rv / l.a_max), p_scale(w, -l.a_min / l.a_max));

    const Polynomial v1 = p_const(v0 + (l.a_max * l.a_max - a0 * a0) / (2 * j));
    Polynomial pos = p_const(v0 * t1 + a0 * t1 * t1 / 2 + j * t1 * t1 * t1 / 6);
    pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
    const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
    pos = p_add(pos, dp_step(v2, p_const(l.a_max), p_const(t3), -j));
    const Polynomial v3 = p_add(v2, p_const((l.a_max * l.a_max - l.a_min * l.a_min) / (2 * j)));
    pos = p_add(pos, dp_step(v3, p_const(l.a_min), w, 0.0));
    const Polynomial v4 = p_add(v3, p_scale(w, l.a_min));
    pos = p_add(pos, dp_step(v4, p_const(l.a_min), p_const(t7), j));

    const Polynomial residual = p_sub(pos, p_const(f.xf.p - f.x0.p));

    auto build = [&](double t6) {
        return make_profile(f, Pattern::kUDDU, kAcc0 | kAcc1,
                            {t1, t2.eval(t6), t3, 0, 0, t6, t7}, j);
    };
    const roots::RootSet rs = roots::solve_quadratic(residual);
    for (int i = 0; i < rs.count; ++i) {
        const double t6 =
            secant_refine(rs.values[i], [&](double w6) { return build(w6).states[7].p - f.xf.p; });
        out.push(build(t6));
    }
}

void s1_acc0(const Frame& f, Candidates& out) {
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;
    if (std::abs(l.a_max) < kDivGuard) {
        return;
    }

    // Variable x = fused valley acceleration (a3 = a5); quartic.
    const double t1 = (l.a_max - a0) / j;
    const Polynomial x = p_x();
    const Polynomial x2 = p_mul(x, x);

    // t2 = [vf - v0 - (2 a_max^2 - a0^2 + af^2 - 2 x^2)/(2j)] / a_max
    const double c0 = (vf - v0 - (2 * l.a_max * l.a_max - a0 * a0 + af * af) / (2 * j)) / l.a_max;
    const Polynomial t2 = p_add(p_const(c0), p_scale(x2, 1.0 / (j * l.a_max)));

    const Polynomial t3 = p_scale(p_sub(p_const(l.a_max), x), 1.0 / j);
    const Polynomial t7 = p_scale(p_sub(p_const(af), x), 1.0 / j);

    const Polynomial v1 = p_const(v0 + (l.a_max * l.a_max - a0 * a0) / (2 * j));
    Polynomial pos = p_const(v0 * t1 + a0 * t1 * t1 / 2 + j * t1 * t1 * t1 / 6);
    pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
    const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
    pos = p_add(pos, dp_step(v2, p_const(l.a_max), t3, -j));
    const Polynomial v3 = p_add(v2, p_scale(p_sub(p_const(l.a_max * l.a_max), x2), 1.0 / (2 * j)));
    pos = p_add(pos, dp_step(v3, x, t7, j));

    const Polynomial residual = p_sub(pos, p_const(f.xf.p - f.x0.p));

    auto build = [&](double xv) {
        return make_profile(f, Pattern::kUDDU, kAcc0,
                            {t1, t2.eval(xv), t3.eval(xv), 0, 0, 0, t7.eval(xv)}, j);
    };
    const roots::RootSet rs = roots::solve(residual);
    for (int i = 0; i < rs.count; ++i) {
        const double xv =
            secant_refine(rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
        out.push(build(xv));
    }
}

void s1_acc1(const Frame& f, Candidates& out) {
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;
    if (std::abs(l.a_min) < kDivGuard) {
        return;
    }

    // Variable y = peak acceleration a1; quartic.
    const double t7 = (af - l.a_min) / j;
    const Polynomial y = p_x();
    const Polynomial y2 = p_mul(y, y);

    // t6 = [vf - v0 - (2 y^2 - a0^2 - 2 a_min^2 + af^2)/(2j)] / a_min
    const double d0 = (vf - v0 + (a0 * a0 + 2 * l.a_min * l.a_min - af * af) / (2 * j)) / l.a_min;
    const Polynomial t6 = p_add(p_const(d0), p_scale(y2, -1.0 / (j * l.a_min)));

    const Polynomial t1 = p_scale(p_sub(y, p_const(a0)), 1.0 / j);
    const Polynomial t3 = p_scale(p_sub(y, p_const(l.a_min)), 1.0 / j);

    Polynomial pos = dp_step(p_const(v0), p_const(a0), t1, j);
    const Polynomial v1 = p_add(p_const(v0 - a0 * a0 / (2 * j)), p_scale(y2, 1.0 / (2 * j)));
    pos = p_add(pos, dp_step(v1, y, t3, -j));
    const Polynomial v3 = p_add(v1, p_scale(p_sub(y2, p_const(l.a_min * l.a_min)), 1.0 / (2 * j)));
    pos = p_add(pos, dp_step(v3, p_const(l.a_min), t6, 0.0));
    const Polynomial v4 = p_add(v3, p_scale(t6, l.a_min));
    pos = p_add(pos, dp_step(v4, p_const(l.a_min), p_const(t7), j));

    const Polynomial residual = p_sub(pos, p_const(f.xf.p - f.x0.p));

    auto build = [&](double yv) {
        return make_profile(f, Pattern::kUDDU, kAcc1,
                            {t1.eval(yv), 0, t3.eval(yv), 0, 0, t6.eval(yv), t7}, j);
    };
    const roots::RootSet rs = roots::solve(residual);
    for (int i = 0; i < rs.count; ++i) {
        const double yv =
            secant_refine(rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
        out.push(build(yv));
    }
}

void s1_none(const Frame& f, Candidates& out) {
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;

    // Variable x = fused valley, dependent y = peak with y^2 = x^2 + K.
    const double K = j * (vf - v0) + (a0 * a0 - af * af) / 2;
    Conic conic;
    conic.a1 = p_add(p_mul(p_x(), p_x()), p_const(K));
    conic.b1 = 0.0;

    const YExpr x = y_from(p_x());
    const YExpr y = y_var();
    const YExpr t1 = y_scale(y_sub(y, y_const(a0)), 1.0 / j);
    const YExpr t3 = y_scale(y_sub(y, x), 1.0 / j);
    const YExpr t7 = y_scale(y_sub(y_const(af), x), 1.0 / j);

    YExpr pos = ydp_step(conic, y_const(v0), y_const(a0), t1, j);
    const Polynomial v1p =
        p_add(p_const(v0 + (K - a0 * a0) / (2 * j)), p_scale(p_mul(p_x(), p_x()), 1.0 / (2 * j)));
    const YExpr v1 = y_from(v1p);
    pos = y_add(pos, ydp_step(conic, v1, y, t3, -j));
    const YExpr v3 = y_from(p_add(v1p, p_const(K / (2 * j))));  // v1 + (y^2 - x^2)/(2j)
    pos = y_add(pos, ydp_step(conic, v3, x, t7, j));

    const YExpr residual = y_sub(pos, y_const(f.xf.p - f.x0.p));
    Polynomial reduced = y_eliminate(conic, residual);
    const roots::RootSet rs = roots::solve(reduced);

    auto build = [&](double yv, double xv) {
        return make_profile(f, Pattern::kUDDU, 0,
                            {(yv - a0) / j, 0, (yv - xv) / j, 0, 0, 0, (af - xv) / j}, j);
    };
    for (int i = 0; i < rs.count; ++i) {
        double ys[3];
        const int ny = conic_back_substitute(conic, residual, rs.values[i], ys);
        for (int k = 0; k < ny; ++k) {
            double yv = ys[k];
            double xv = rs.values[i];
            newton2_refine(yv, xv, [&](double yq, double xq, double& rv, double& rp) {
                const Profile p = build(yq, xq);
                rv = p.states[7].v - f.xf.v;
                rp = p.states[7].p - f.xf.p;
            });
            out.push(build(yv, xv));
        }
    }
}

void s1_all(const Frame& f, Candidates& out) {
    s1_vel(f, true, true, out);
    s1_vel(f, true, false, out);
    s1_vel(f, false, true, out);
    s1_vel(f, false, false, out);
    s1_vel_low(f, true, true, out);
    s1_vel_low(f, true, false, out);
    s1_vel_low(f, false, true, out);
    s1_vel_low(f, false, false, out);
    s1_vel_zero(f, true, true, out);
    s1_vel_zero(f, true, false, out);
    s1_vel_zero(f, false, true, out);
    s1_vel_zero(f, false, false, out);
    s1_acc0_acc1(f, out);
    s1_acc0(f, out);
    s1_acc1(f, out);
    s1_none(f, out);
}

// ---- step 2 ----------------------------------------------------------------

void s2_vel_uddu(const Frame& f, double T, bool acc0, bool acc1, Candidates& out) {
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;
    const double dv = vf - v0;
    const double dp = f.xf.p - f.x0.p;

    if (acc0 && acc1) {
        // All ramps fixed; unknowns t2, t4, t6. Quadratic in w = t6.
        if (std::abs(l.a_max) < kDivGuard || std::abs(l.a_min) < kDivGuard) {
            return;
        }
        const double t1 = (l.a_max - a0) / j;
        const double t3 = l.a_max / j;
        const double t5 = -l.a_min / j;
        const double t7 = (af - l.a_min) / j;
        const double rv = dv - (2 * l.a_max * l.a_max - a0 * a0) / (2 * j) -
                          (af * af - 2 * l.a_min * l.a_min) / (2 * j);
        const double rt = T - t1 - t3 - t5 - t7;

        const Polynomial w = p_x();
        const Polynomial t2 = p_add(p_const(rv / l.a_max), p_scale(w, -l.a_min / l.a_max));
        const Polynomial t4 = p_sub(p_sub(p_const(rt), t2), w);

        const Polynomial v1 = p_const(v0 + (l.a_max * l.a_max - a0 * a0) / (2 * j));
        Polynomial pos = p_const(v0 * t1 + a0 * t1 * t1 / 2 + j * t1 * t1 * t1 / 6);
        pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
        const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
        pos = p_add(pos, dp_step(v2, p_const(l.a_max), p_const(t3), -j));
        const Polynomial v3 = p_add(v2, p_const(l.a_max * l.a_max / (2 * j)));  // plateau
        pos = p_add(pos, p_mul(v3, t4));
        pos = p_add(pos, dp_step(v3, p_const(0.0), p_const(t5), -j));
        const Polynomial v5 = p_sub(v3, p_const(l.a_min * l.a_min / (2 * j)));
        pos = p_add(pos, dp_step(v5, p_const(l.a_min), w, 0.0));
        const Polynomial v6 = p_add(v5, p_scale(w, l.a_min));
        pos = p_add(pos, dp_step(v6, p_const(l.a_min), p_const(t7), j));

        auto build = [&](double t6) {
            return make_profile(f, Pattern::kUDDU, kAcc0 | kVel | kAcc1,
                                {t1, t2.eval(t6), t3, t4.eval(t6), t5, t6, t7}, j);
        };
        const roots::RootSet rs = roots::solve_quadratic(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double t6 = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(t6));
        }
        return;
    }

    if (acc0 && !acc1) {
        // Free valley x <= 0; quartic.
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        const double t1 = (l.a_max - a0) / j;
        const double t3 = l.a_max / j;
        const Polynomial x = p_x();
        const Polynomial x2 = p_mul(x, x);
        const double c0 = (dv - (2 * l.a_max * l.a_max - a0 * a0 + af * af) / (2 * j)) / l.a_max;
        const Polynomial t2 = p_add(p_const(c0), p_scale(x2, 1.0 / (j * l.a_max)));
        const Polynomial t5 = p_scale(x, -1.0 / j);
        const Polynomial t7 = p_scale(p_sub(p_const(af), x), 1.0 / j);
        Polynomial t4 = p_const(T - t1 - t3);
        t4 = p_sub(t4, t2);
        t4 = p_sub(t4, t5);
        t4 = p_sub(t4, t7);

        const Polynomial v1 = p_const(v0 + (l.a_max * l.a_max - a0 * a0) / (2 * j));
        Polynomial pos = p_const(v0 * t1 + a0 * t1 * t1 / 2 + j * t1 * t1 * t1 / 6);
        pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
        const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
        pos = p_add(pos, dp_step(v2, p_const(l.a_max), p_const(t3), -j));
        const Polynomial v3 = p_add(v2, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, p_mul(v3, t4));
        pos = p_add(pos, dp_step(v3, p_const(0.0), t5, -j));
        const Polynomial v5 = p_sub(v3, p_scale(x2, 1.0 / (2 * j)));
        pos = p_add(pos, dp_step(v5, x, t7, j));

        auto build = [&](double xv) {
            return make_profile(
                f, Pattern::kUDDU, kAcc0 | kVel,
                {t1, t2.eval(xv), t3, t4.eval(xv), t5.eval(xv), 0, t7.eval(xv)}, j);
        };
        const roots::RootSet rs = roots::solve(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double xv = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(xv));
        }
        return;
    }

    if (!acc0 && acc1) {
        // Free peak y >= 0; quartic.
        if (std::abs(l.a_min) < kDivGuard) {
            return;
        }
        const double t5 = -l.a_min / j;
        const double t7 = (af - l.a_min) / j;
        const Polynomial y = p_x();
        const Polynomial y2 = p_mul(y, y);
        const double d0 =
            (dv + (a0 * a0 + 2 * l.a_min * l.a_min - af * af) / (2 * j)) / l.a_min;
        const Polynomial t6 = p_add(p_const(d0), p_scale(y2, -1.0 / (j * l.a_min)));
        const Polynomial t1 = p_scale(p_sub(y, p_const(a0)), 1.0 / j);
        const Polynomial t3 = p_scale(y, 1.0 / j);
        Polynomial t4 = p_const(T - t5 - t7);
        t4 = p_sub(t4, t1);
        t4 = p_sub(t4, t3);
        t4 = p_sub(t4, t6);

        Polynomial pos = dp_step(p_const(v0), p_const(a0), t1, j);
        const Polynomial v1 = p_add(p_const(v0 - a0 * a0 / (2 * j)), p_scale(y2, 1.0 / (2 * j)));
        pos = p_add(pos, dp_step(v1, y, t3, -j));
        const Polynomial v3 = p_add(v1, p_scale(y2, 1.0 / (2 * j)));  // plateau
        pos = p_add(pos, p_mul(v3, t4));
        pos = p_add(pos, dp_step(v3, p_const(0.0), p_const(t5), -j));
        const Polynomial v5 = p_sub(v3, p_const(l.a_min * l.a_min / (2 * j)));
        pos = p_add(pos, dp_step(v5, p_const(l.a_min), t6, 0.0));
        const Polynomial v6 = p_add(v5, p_scale(t6, l.a_min));
        pos = p_add(pos, dp_step(v6, p_const(l.a_min), p_const(t7), j));

        auto build = [&](double yv) {
            return make_profile(
                f, Pattern::kUDDU, kVel | kAcc1,
                {t1.eval(yv), 0, t3.eval(yv), t4.eval(yv), t5, t6.eval(yv), t7}, j);
        };
        const roots::RootSet rs = roots::solve(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double yv = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(yv));
        }
        return;
    }

    // Neither hold: peak y free, valley x tied by x^2 = y^2 + K; sextic in y.
    const double K = (af * af - a0 * a0) / 2 - j * dv;
    Conic conic;
    conic.a1 = p_add(p_mul(p_x(), p_x()), p_const(K));
    conic.b1 = 0.0;

    const YExpr yp = y_from(p_x());  // peak (the polynomial variable)
    const YExpr xv = y_var();        // valley (dependent)
    const YExpr t1 = y_scale(y_sub(yp, y_const(a0)), 1.0 / j);
    const YExpr t3 = y_scale(yp, 1.0 / j);
    const YExpr t5 = y_scale(xv, -1.0 / j);
    const YExpr t7 = y_scale(y_sub(y_const(af), xv), 1.0 / j);
    YExpr t4 = y_const(T);
    t4 = y_sub(t4, t1);
    t4 = y_sub(t4, t3);
    t4 = y_sub(t4, t5);
    t4 = y_sub(t4, t7);

    YExpr pos = ydp_step(conic, y_const(v0), y_const(a0), t1, j);
    const Polynomial v1p =
        p_add(p_const(v0 - a0 * a0 / (2 * j)), p_scale(p_mul(p_x(), p_x()), 1.0 / (2 * j)));
    pos = y_add(pos, ydp_step(conic, y_from(v1p), yp, t3, -j));
    const Polynomial v3p = p_add(v1p, p_scale(p_mul(p_x(), p_x()), 1.0 / (2 * j)));  // plateau
    pos = y_add(pos, y_mul(conic, y_from(v3p), t4));
    pos = y_add(pos, ydp_step(conic, y_from(v3p), y_const(0.0), t5, -j));
    // v5 = v3 - x^2/(2j); x^2 reduces to y^2 + K.
    const Polynomial v5p =
        p_sub(v3p, p_scale(p_add(p_mul(p_x(), p_x()), p_const(K)), 1.0 / (2 * j)));
    pos = y_add(pos, ydp_step(conic, y_from(v5p), xv, t7, j));

    const YExpr residual = y_sub(pos, y_const(dp));
    Polynomial reduced = y_eliminate(conic, residual);
    const roots::RootSet rs = roots::solve(reduced);

    auto build = [&](double yv, double x) {
        const double tt1 = (yv - a0) / j;
        const double tt3 = yv / j;
        const double tt5 = -x / j;
        const double tt7 = (af - x) / j;
        const double tt4 = T - tt1 - tt3 - tt5 - tt7;
        return make_profile(f, Pattern::kUDDU, kVel, {tt1, 0, tt3, tt4, tt5, 0, tt7}, j);
    };
    for (int i = 0; i < rs.count; ++i) {
        double xs[3];
        const int nx = conic_back_substitute(conic, residual, rs.values[i], xs);
        for (int k = 0; k < nx; ++k) {
            double yv = rs.values[i];
            double x = xs[k];
            newton2_refine(yv, x, [&](double yq, double xq, double& rv, double& rp) {
                const Profile p = build(yq, xq);
                rv = p.states[7].v - f.xf.v;
                rp = p.states[7].p - f.xf.p;
            });
            out.push(build(yv, x));
        }
    }
}

void s2_vel_udud(const Frame& f, double T, bool acc0, bool acc1, Candidates& out) {
    const double j = f.jerk;
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;
    const double dv = vf - v0;
    const double dp = f.xf.p - f.x0.p;

    if (acc0 && acc1) {
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        const double t1 = (l.a_max - a0) / j;
        const double t3 = l.a_max / j;
        const double t5 = l.a_max / j;
        const double t7 = (l.a_max - af) / j;
        const double rv = dv - (2 * l.a_max * l.a_max - a0 * a0) / (2 * j) -
                          (2 * l.a_max * l.a_max - af * af) / (2 * j);
        const double rt = T - t1 - t3 - t5 - t7;

        // t2 + t6 = rv/a_max is fixed; t4 = rt - rv/a_max. Quadratic in w = t6.
        const Polynomial w = p_x();
        const Polynomial t2 = p_sub(p_const(rv / l.a_max), w);
        const double t4 = rt - rv / l.a_max;

        const Polynomial v1 = p_const(v0 + (l.a_max * l.a_max - a0 * a0) / (2 * j));
        Polynomial pos = p_const(v0 * t1 + a0 * t1 * t1 / 2 + j * t1 * t1 * t1 / 6);
        pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
        const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
        pos = p_add(pos, dp_step(v2, p_const(l.a_max), p_const(t3), -j));
        const Polynomial v3 = p_add(v2, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, p_scale(v3, t4));
        pos = p_add(pos, dp_step(v3, p_const(0.0), p_const(t5), j));
        const Polynomial v5 = p_add(v3, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, dp_step(v5, p_const(l.a_max), w, 0.0));
        const Polynomial v6 = p_add(v5, p_scale(w, l.a_max));
        pos = p_add(pos, dp_step(v6, p_const(l.a_max), p_const(t7), -j));

        auto build = [&](double t6) {
            return make_profile(f, Pattern::kUDUD, kAcc0 | kVel | kAcc1,
                                {t1, t2.eval(t6), t3, t4, t5, t6, t7}, j);
        };
        const roots::RootSet rs = roots::solve_quadratic(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double t6 = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(t6));
        }
        return;
    }

    if (acc0 && !acc1) {
        // Free second peak e >= 0; quartic.
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        const double t1 = (l.a_max - a0) / j;
        const double t3 = l.a_max / j;
        const Polynomial e = p_x();
        const Polynomial e2 = p_mul(e, e);
        const double c0 = (dv - (2 * l.a_max * l.a_max - a0 * a0 - af * af) / (2 * j)) / l.a_max;
        const Polynomial t2 = p_add(p_const(c0), p_scale(e2, -1.0 / (j * l.a_max)));
        const Polynomial t5 = p_scale(e, 1.0 / j);
        const Polynomial t7 = p_scale(p_sub(e, p_const(af)), 1.0 / j);
        Polynomial t4 = p_const(T - t1 - t3);
        t4 = p_sub(t4, t2);
        t4 = p_sub(t4, t5);
        t4 = p_sub(t4, t7);

        const Polynomial v1 = p_const(v0 + (l.a_max * l.a_max - a0 * a0) / (2 * j));
        Polynomial pos = p_const(v0 * t1 + a0 * t1 * t1 / 2 + j * t1 * t1 * t1 / 6);
        pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
        const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
        pos = p_add(pos, dp_step(v2, p_const(l.a_max), p_const(t3), -j));
        const Polynomial v3 = p_add(v2, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, p_mul(v3, t4));
        pos = p_add(pos, dp_step(v3, p_const(0.0), t5, j));
        const Polynomial v5 = p_add(v3, p_scale(e2, 1.0 / (2 * j)));
        pos = p_add(pos, dp_step(v5, e, t7, -j));

        auto build = [&](double ev) {
            return make_profile(
                f, Pattern::kUDUD, kAcc0 | kVel,
                {t1, t2.eval(ev), t3, t4.eval(ev), t5.eval(ev), 0, t7.eval(ev)}, j);
        };
        const roots::RootSet rs = roots::solve(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double ev = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(ev));
        }
        return;
    }

    if (!acc0 && acc1) {
        // Free first peak y; second fixed at a_max; quartic.
        if (std::abs(l.a_max) < kDivGuard) {
            return;
        }
        const double t5 = l.a_max / j;
        const double t7 = (l.a_max - af) / j;
        const Polynomial y = p_x();
        const Polynomial y2 = p_mul(y, y);
        const double d0 = (dv + (a0 * a0 - 2 * l.a_max * l.a_max + af * af) / (2 * j)) / l.a_max;
        const Polynomial t6 = p_add(p_const(d0), p_scale(y2, -1.0 / (j * l.a_max)));
        const Polynomial t1 = p_scale(p_sub(y, p_const(a0)), 1.0 / j);
        const Polynomial t3 = p_scale(y, 1.0 / j);
        Polynomial t4 = p_const(T - t5 - t7);
        t4 = p_sub(t4, t1);
        t4 = p_sub(t4, t3);
        t4 = p_sub(t4, t6);

        Polynomial pos = dp_step(p_const(v0), p_const(a0), t1, j);
        const Polynomial v1 = p_add(p_const(v0 - a0 * a0 / (2 * j)), p_scale(y2, 1.0 / (2 * j)));
        pos = p_add(pos, dp_step(v1, y, t3, -j));
        const Polynomial v3 = p_add(v1, p_scale(y2, 1.0 / (2 * j)));
        pos = p_add(pos, p_mul(v3, t4));
        pos = p_add(pos, dp_step(v3, p_const(0.0), p_const(t5), j));
        const Polynomial v5 = p_add(v3, p_const(l.a_max * l.a_max / (2 * j)));
        pos = p_add(pos, dp_step(v5, p_const(l.a_max), t6, 0.0));
        const Polynomial v6 = p_add(v5, p_scale(t6, l.a_max));
        pos = p_add(pos, dp_step(v6, p_const(l.a_max), p_const(t7), -j));

        auto build = [&](double yv) {
            return make_profile(
                f, Pattern::kUDUD, kVel | kAcc1,
                {t1.eval(yv), 0, t3.eval(yv), t4.eval(yv), t5, t6.eval(yv), t7}, j);
        };
        const roots::RootSet rs = roots::solve(p_sub(pos, p_const(dp)));
        for (int i = 0; i < rs.count; ++i) {
            const double yv = secant_refine(
                rs.values[i], [&](double q) { return build(q).states[7].p - f.xf.p; });
            out.push(build(yv));
        }
        return;
    }

    // Neither hold: first peak y free, second peak e with e^2 = K - y^2.
    const double K = j * dv + (a0 * a0 + af * af) / 2;
    Conic conic;
    conic.a1 = p_sub(p_const(K), p_mul(p_x(), p_x()));
    conic.b1 = 0.0;

    const YExpr yp = y_from(p_x());
    const YExpr ep = y_var();
    const YExpr t1 = y_scale(y_sub(yp, y_const(a0)), 1.0 / j);
    const YExpr t3 = y_scale(yp, 1.0 / j);
    const YExpr t5 = y_scale(ep, 1.0 / j);
    const YExpr t7 = y_scale(y_sub(ep, y_const(af)), 1.0 / j);
    YExpr t4 = y_const(T);
    t4 = y_sub(t4, t1);
    t4 = y_sub(t4, t3);
    t4 = y_sub(t4, t5);
    t4 = y_sub(t4, t7);

    YExpr pos = ydp_step(conic, y_const(v0), y_const(a0), t1, j);
    const Polynomial v1p =
        p_add(p_const(v0 - a0 * a0 / (2 * j)), p_scale(p_mul(p_x(), p_x()), 1.0 / (2 * j)));
    pos = y_add(pos, ydp_step(conic, y_from(v1p), yp, t3, -j));
    const Polynomial v3p = p_add(v1p, p_scale(p_mul(p_x(), p_x()), 1.0 / (2 * j)));
    pos = y_add(pos, y_mul(conic, y_from(v3p), t4));
    pos = y_add(pos, ydp_step(conic, y_from(v3p), y_const(0.0), t5, j));
    // v5 = v3 + e^2/(2j); e^2 reduces to K - y^2.
    const Polynomial v5p =
        p_add(v3p, p_scale(p_sub(p_const(K), p_mul(p_x(), p_x())), 1.0 / (2 * j)));
    pos = y_add(pos, ydp_step(conic, y_from(v5p), ep, t7, -j));

    const YExpr residual = y_sub(pos, y_const(dp));
    Polynomial reduced = y_eliminate(conic, residual);
    const roots::RootSet rs = roots::solve(reduced);

    auto build = [&](double yv, double e) {
        const double tt1 = (yv - a0) / j;
        const double tt3 = yv / j;
        const double tt5 = e / j;
        const double tt7 = (e - af) / j;
        const double tt4 = T - tt1 - tt3 - tt5 - tt7;
        return make_profile(f, Pattern::kUDUD, kVel, {tt1, 0, tt3, tt4, tt5, 0, tt7}, j);
    };
    for (int i = 0; i < rs.count; ++i) {
        double es[3];
        const int ne = conic_back_substitute(conic, residual, rs.values[i], es);
        for (int k = 0; k < ne; ++k) {
            double yv = rs.values[i];
            double e = es[k];
            newton2_refine(yv, e, [&](double yq, double eq, double& rv, double& rp) {
                const Profile p = build(yq, eq);
                rv = p.states[7].v - f.xf.v;
                rp = p.states[7].p - f.xf.p;
            });
            out.push(build(yv, e));
        }
    }
}

void s2_acc0_acc1(const Frame& f, double T, Candidates& out) {
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;
    const double dv = vf - v0;
    const double dp = f.xf.p - f.x0.p;

    // Variable u = 1/jerk; both hold durations are affine in u. Quadratic.
    const double s1 = l.a_max - a0;
    const double s3 = l.a_max - l.a_min;
    const double s7 = af - l.a_min;
    const double W = ((l.a_max * l.a_max - a0 * a0) + (l.a_max * l.a_max - l.a_min * l.a_min) +
                      (af * af - l.a_min * l.a_min)) /
                     2;
    const double L = s1 + s3 + s7;
    const double det = l.a_max - l.a_min;

    const Polynomial u = p_x();
    // a_max t2 + a_min t6 = dv - W u;  t2 + t6 = T - L u
    const Polynomial t2 =
        p_scale(p_add(p_const(dv - l.a_min * T), p_scale(u, l.a_min * L - W)), 1.0 / det);
    const Polynomial t6 =
        p_scale(p_add(p_const(l.a_max * T - dv), p_scale(u, W - l.a_max * L)), 1.0 / det);

    const Polynomial v1 = p_add(p_const(v0), p_scale(u, (l.a_max * l.a_max - a0 * a0) / 2));
    Polynomial pos =
        p_add(p_scale(u, v0 * s1), p_scale(p_mul(u, u), a0 * s1 * s1 / 2 + s1 * s1 * s1 / 6));
    pos = p_add(pos, dp_step(v1, p_const(l.a_max), t2, 0.0));
    const Polynomial v2 = p_add(v1, p_scale(t2, l.a_max));
    pos = p_add(pos, p_add(p_mul(v2, p_scale(u, s3)),
                           p_scale(p_mul(u, u), l.a_max * s3 * s3 / 2 - s3 * s3 * s3 / 6)));
    const Polynomial v3 = p_add(v2, p_scale(u, (l.a_max * l.a_max - l.a_min * l.a_min) / 2));
    pos = p_add(pos, dp_step(v3, p_const(l.a_min), t6, 0.0));
    const Polynomial v6 = p_add(v3, p_scale(t6, l.a_min));
    pos = p_add(pos, p_add(p_mul(v6, p_scale(u, s7)),
                           p_scale(p_mul(u, u), l.a_min * s7 * s7 / 2 + s7 * s7 * s7 / 6)));

    auto build = [&](double uv) {
        const double g = std::min(1.0 / uv, f.jerk);
        return make_profile(f, Pattern::kUDDU, kAcc0 | kAcc1,
                            {s1 * uv, t2.eval(uv), s3 * uv, 0, 0, t6.eval(uv), s7 * uv}, g);
    };
    const roots::RootSet rs = roots::solve_quadratic(p_sub(pos, p_const(dp)));
    for (int i = 0; i < rs.count; ++i) {
        double uv = rs.values[i];
        if (!(uv > 0) || 1.0 / uv > f.jerk * (1 + 1e-9)) {
            continue;
        }
        uv = secant_refine(uv, [&](double q) {
            if (!(q > 0)) {
                return std::numeric_limits<double>::quiet_NaN();
            }
            return build(q).states[7].p - f.xf.p;
        });
        if (!(uv > 0) || 1.0 / uv > f.jerk * (1 + 1e-9)) {
            continue;
        }
        out.push(build(uv));
    }
}

namespace {

// Shared scaffold for the single-hold jerk-reduction rows (ACC0 / ACC1).
void s2_single_hold(const Frame& f, double T, bool hold_at_max, Candidates& out) {
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const Limits& l = f.limits;
    const double dv = vf - v0;
    const double dp = f.xf.p - f.x0.p;
    const double ah = hold_at_max ? l.a_max : l.a_min;

    // u D(x) = N with N = dv - ah T and D quadratic.
    const double n = dv - ah * T;
    const double c2 = ah * (a0 - af) - (a0 * a0 - af * af) / 2;
    const double span_scale = std::max({1.0, std::abs(a0), std::abs(af), std::abs(ah)});
    if (std::abs(n) < 1e-14 * std::max(1.0, std::abs(dv) + std::abs(ah * T))) {
        return;  // u -> 0 (infinite jerk): no admissible solution in this row
    }
    Polynomial d;
    const Polynomial x = p_x();
    {
        const Polynomial xm = p_sub(x, p_const(ah));
        d = hold_at_max ? p_add(p_scale(p_mul(xm, xm), -1.0), p_const(c2))
                        : p_add(p_mul(xm, xm), p_const(c2));
    }

    // Chain in (u, x). With the ACC0 hold the sequence is
    //   ramp(a0 -> a_max), hold, ramp(a_max -> x), ramp(x -> af)
    // and with the ACC1 hold
    //   ramp(a0 -> x), ramp(x -> a_min), hold, ramp(a_min -> af).
    UPoly pos = u_const(0.0);
    UPoly v = u_const(v0);
    auto ramp = [&](const Polynomial& from, const Polynomial& to, double sign) {
        // Duration per unit u carries the jerk sign: t = s (to - from) u.
        const Polynomial span_t = p_scale(p_sub(to, from), sign);
        const UPoly t = u_linear(span_t);
        UPoly delta = u_mul(v, t);
        delta = u_add(delta, u_scale(u_mul(u_from(from), u_mul(t, t)), 0.5));
        // s g t^3/6 = (to - from)^3 u^2 / 6 (the sign cancels to the fourth power).
        const Polynomial span = p_sub(to, from);
        const Polynomial span3 = p_mul(span, p_mul(span, span));
        delta = u_add(delta, u_scale(UPoly{{p_const(0), p_const(0), span3}}, 1.0 / 6.0));
        pos = u_add(pos, delta);
        const Polynomial dv_ramp = p_scale(p_sub(p_mul(to, to), p_mul(from, from)), sign * 0.5);
        v = u_add(v, UPoly{{p_const(0), dv_ramp, p_const(0)}});
    };
    auto hold = [&](double acc, const UPoly& tau) {
        UPoly delta = u_mul(v, tau);
        delta = u_add(delta, u_scale(u_mul(tau, tau), acc / 2));
        pos = u_add(pos, delta);
        v = u_add(v, u_scale(tau, acc));
    };

    Polynomial ramp_sum;  // sum of ramp durations per unit u
    if (hold_at_max) {
        ramp_sum = p_add(p_const(2 * ah - a0 + af), p_scale(x, -2.0));
    } else {
        ramp_sum = p_add(p_const(af - a0 - 2 * ah), p_scale(x, 2.0));
    }
    const UPoly t_hold = u_sub(u_const(T), u_linear(ramp_sum));

    if (hold_at_max) {
        ramp(p_const(a0), p_const(ah), 1.0);
        hold(ah, t_hold);
        ramp(p_const(ah), x, -1.0);
        ramp(x, p_const(af), 1.0);
    } else {
        ramp(p_const(a0), x, 1.0);
        ramp(x, p_const(ah), -1.0);
        hold(ah, t_hold);
        ramp(p_const(ah), p_const(af), 1.0);
    }

    const UPoly residual = u_sub(pos, u_const(dp));
    Polynomial reduced = u_substitute(residual, n, d);
    const roots::RootSet rs = roots::solve(reduced);

    auto build = [&](double xv) {
        const double dvv = d.eval(xv);
        const double uv = n / dvv;
        const double g = std::min(1.0 / uv, f.jerk);
        const double th = T - ramp_sum.eval(xv) * uv;
        std::array<double, 7> t{};
        unsigned mask;
        if (hold_at_max) {
            t = {(ah - a0) * uv, th, (ah - xv) * uv, 0, 0, 0, (af - xv) * uv};
            mask = kAcc0;
        } else {
            t = {(xv - a0) * uv, 0, (xv - ah) * uv, 0, 0, th, (af - ah) * uv};
            mask = kAcc1;
        }
        return make_profile(f, Pattern::kUDDU, mask, t, g);
    };
    auto admissible = [&](double xv) {
        const double dvv = d.eval(xv);
        if (std::abs(dvv) < 1e-12 * span_scale * span_scale) {
            return false;
        }
        const double uv = n / dvv;
        return uv > 0 && 1.0 / uv <= f.jerk * (1 + 1e-9);
    };
    for (int i = 0; i < rs.count; ++i) {
        double xv = rs.values[i];
        if (!admissible(xv)) {
            continue;
        }
        xv = secant_refine(xv, [&](double q) {
            if (!admissible(q)) {
                return std::numeric_limits<double>::quiet_NaN();
            }
            return build(q).states[7].p - f.xf.p;
        });
        if (!admissible(xv)) {
            continue;
        }
        out.push(build(xv));
    }
}

}  // namespace

void s2_acc0(const Frame& f, double T, Candidates& out) { s2_single_hold(f, T, true, out); }
void s2_acc1(const Frame& f, double T, Candidates& out) { s2_single_hold(f, T, false, out); }

void s2_none(const Frame& f, double T, Candidates& out) {
    const double a0 = f.x0.a, v0 = f.x0.v;
    const double af = f.xf.a, vf = f.xf.v;
    const double dv = vf - v0;
    const double dp = f.xf.p - f.x0.p;
    if (!(T > kDivGuard)) {
        return;
    }

    // Variable x = valley, dependent y = peak on the conic
    //   y^2 = x^2 - (2 dv/T) x + (a0^2 - af^2)/2 - (dv/T)(a0 - af) + (2 dv/T) y
    // obtained by eliminating the jerk between the duration and velocity
    // equations; g T = 2y - 2x - a0 + af.
    const double b1 = 2 * dv / T;
    Conic conic;
    conic.a1 = p_add(p_sub(p_mul(p_x(), p_x()), p_scale(p_x(), b1)),
                     p_const((a0 * a0 - af * af) / 2 - (dv / T) * (a0 - af)));
    conic.b1 = b1;

    const YExpr x = y_from(p_x());
    const YExpr y = y_var();
    const YExpr g =
        y_scale(y_sub(y_sub(y_scale(y, 2.0), y_scale(x, 2.0)), y_const(a0 - af)), 1.0 / T);

    // W1 = g v1 = g v0 + (y^2 - a0^2)/2.
    const Polynomial y2_a = conic.a1;  // y^2 = a1 + b1 y
    YExpr w1 = y_mul(conic, g, y_const(v0));
    w1 = y_add(w1, y_scale(YExpr{p_sub(y2_a, p_const(a0 * a0)), p_const(b1)}, 0.5));

    // Position residual times g^2.
    const YExpr ya0 = y_sub(y, y_const(a0));
    const YExpr yx = y_sub(y, x);
    const YExpr afx = y_sub(y_const(af), x);

    YExpr r = y_mul(conic, y_mul(conic, g, y_const(v0)), ya0);
    r = y_add(r, y_scale(y_mul(conic, ya0, ya0), a0 / 2));
    r = y_add(r, y_scale(y_mul(conic, ya0, y_mul(conic, ya0, ya0)), 1.0 / 6));

    r = y_add(r, y_mul(conic, w1, yx));
    r = y_add(r, y_scale(y_mul(conic, y, y_mul(conic, yx, yx)), 0.5));
    r = y_sub(r, y_scale(y_mul(conic, yx, y_mul(conic, yx, yx)), 1.0 / 6));

    YExpr w3 = y_add(w1, y_scale(YExpr{p_sub(y2_a, p_mul(p_x(), p_x())), p_const(b1)}, 0.5));
    r = y_add(r, y_mul(conic, w3, afx));
    r = y_add(r, y_scale(y_mul(conic, x, y_mul(conic, afx, afx)), 0.5));
    r = y_add(r, y_scale(y_mul(conic, afx, y_mul(conic, afx, afx)), 1.0 / 6));

    r = y_sub(r, y_scale(y_mul(conic, g, g), dp));

    Polynomial reduced = y_eliminate(conic, r);
    const roots::RootSet rs = roots::solve(reduced);

    auto build = [&](double yv, double xv) {
        const double gv = (2 * yv - 2 * xv - a0 + af) / T;
        const double gg = std::min(gv, f.jerk);
        return make_profile(f, Pattern::kUDDU, 0,
                            {(yv - a0) / gg, 0, (yv - xv) / gg, 0, 0, 0, (af - xv) / gg}, gg);
    };
    auto admissible = [&](double yv, double xv) {
        const double gv = (2 * yv - 2 * xv - a0 + af) / T;
        return std::isfinite(gv) && gv > 0 && gv <= f.jerk * (1 + 1e-9);
    };
    for (int i = 0; i < rs.count; ++i) {
        double ys[3];
        const int ny = conic_back_substitute(conic, r, rs.values[i], ys);
        for (int k = 0; k < ny; ++k) {
            double yv = ys[k];
            double xv = rs.values[i];
            if (!admissible(yv, xv)) {
                continue;
            }
            newton2_refine(yv, xv, [&](double yq, double xq, double& rv, double& rp) {
                if (!admissible(yq, xq)) {
                    rv = std::numeric_limits<double>::quiet_NaN();
                    rp = rv;
                    return;
                }
                const Profile p = build(yq, xq);
                rv = p.states[7].v - f.xf.v;
                rp = p.states[7].p - f.xf.p;
            });
            if (!admissible(yv, xv)) {
                continue;
            }
            out.push(build(yv, xv));
        }
    }
}

}  // namespace otg::detail
