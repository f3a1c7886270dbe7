#include "otg/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otg::roots {

namespace {

constexpr double kTiny = 1e-300;

double relative_merge_tol(const Polynomial& p, double tol) {
    // Scale the merge tolerance with the root bound so widely scaled
    // polynomials merge consistently with unit-scale ones.
    const double bound = std::max(1.0, p.root_bound());
    return tol * bound;
}

// Guarded Newton polish: steps are only kept while the residual decreases.
double polish(const Polynomial& p, double x, int steps, int& iters) {
    double f, df;
    p.eval_with_derivative(x, f, df);
    for (int i = 0; i < steps; ++i) {
        if (std::abs(df) < kTiny) {
            break;
        }
        const double next = x - f / df;
        if (!std::isfinite(next) || next == x) {
            break;
        }
        double fn, dfn;
        p.eval_with_derivative(next, fn, dfn);
        if (std::abs(fn) >= std::abs(f)) {
            break;
        }
        ++iters;
        x = next;
        f = fn;
        df = dfn;
    }
    return x;
}

}  // namespace

Polynomial Polynomial::from(std::initializer_list<double> ascending) {
    Polynomial p;
    int i = 0;
    for (double v : ascending) {
        p.c[i++] = v;
    }
    p.degree = i > 0 ? i - 1 : 0;
    p.normalize();
    return p;
}

double Polynomial::eval(double x) const {
    double r = c[degree];
    for (int i = degree - 1; i >= 0; --i) {
        r = r * x + c[i];
    }
    return r;
}

void Polynomial::eval_with_derivative(double x, double& value, double& derivative) const {
    double r = c[degree];
    double d = 0.0;
    for (int i = degree - 1; i >= 0; --i) {
        d = d * x + r;
        r = r * x + c[i];
    }
    value = r;
    derivative = d;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    if (degree == 0) {
        d.c[0] = 0.0;
        d.degree = 0;
        return d;
    }
    for (int i = 1; i <= degree; ++i) {
        d.c[i - 1] = c[i] * i;
    }
    d.degree = degree - 1;
    return d;
}

void Polynomial::normalize(double rel_eps) {
    const double scale = max_abs_coeff();
    const double cut = scale * rel_eps;
    while (degree > 0 && std::abs(c[degree]) <= cut) {
        c[degree] = 0.0;
        --degree;
    }
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (int i = 0; i <= degree; ++i) {
        m = std::max(m, std::abs(c[i]));
    }
    return m;
}

double Polynomial::root_bound() const {
    if (degree == 0 || std::abs(c[degree]) < kTiny) {
        return 0.0;
    }
    double m = 0.0;
    for (int i = 0; i < degree; ++i) {
        m = std::max(m, std::abs(c[i] / c[degree]));
    }
    return 1.0 + m;
}

void RootSet::insert(double r, int iters) {
    if (count < kMaxDegree) {
        values[count] = r;
        iterations[count] = iters;
        ++count;
    }
}

void RootSet::finish(double tol) {
    for (int i = 1; i < count; ++i) {
        double v = values[i];
        int it = iterations[i];
        int k = i - 1;
        while (k >= 0 && values[k] > v) {
            values[k + 1] = values[k];
            iterations[k + 1] = iterations[k];
            --k;
        }
        values[k + 1] = v;
        iterations[k + 1] = it;
    }
    int out = 0;
    for (int i = 0; i < count; ++i) {
        if (out == 0 || values[i] - values[out - 1] > tol) {
            values[out] = values[i];
            iterations[out] = iterations[i];
            ++out;
        }
    }
    count = out;
}

RootSet solve_linear(const Polynomial& p) {
    RootSet rs;
    if (std::abs(p.c[1]) < kTiny || p.degree < 1) {
        return rs;  // constant polynomial: no isolated roots reported
    }
    rs.insert(-p.c[0] / p.c[1]);
    return rs;
}

RootSet solve_quadratic(const Polynomial& p) {
    if (p.degree < 2 || std::abs(p.c[2]) < kTiny) {
        Polynomial q = p;
        q.degree = std::min(q.degree, 1);
        q.normalize();
        return solve_linear(q);
    }
    const double a = p.c[2], b = p.c[1], c0 = p.c[0];
    RootSet rs;
    const double disc = b * b - 4 * a * c0;
    if (disc < 0) {
        return rs;
    }
    if (disc == 0) {
        rs.insert(-b / (2 * a));
        return rs;
    }
    // Stable form: compute the larger-magnitude root first.
    const double s = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0 ? s : -s));
    const double r1 = q / a;
    const double r2 = std::abs(q) > kTiny ? c0 / q : -b / a - r1;
    rs.insert(r1);
    rs.insert(r2);
    rs.finish(relative_merge_tol(p, kMergeTol));
    return rs;
}

RootSet solve_cubic(const Polynomial& p) {
    if (p.degree < 3 || std::abs(p.c[3]) < kTiny ||
        std::abs(p.c[3]) < 1e-14 * p.max_abs_coeff()) {
        Polynomial q = p;
        q.degree = std::min(q.degree, 2);
        q.normalize();
        return solve_quadratic(q);
    }
    const double a = p.c[2] / p.c[3];
    const double b = p.c[1] / p.c[3];
    const double c0 = p.c[0] / p.c[3];

    // Depressed cubic t^3 + pt + q with x = t - a/3.
    const double shift = a / 3.0;
    const double pp = b - a * a / 3.0;
    const double qq = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c0;
    const double disc = qq * qq / 4.0 + pp * pp * pp / 27.0;

    RootSet rs;
    if (disc > 0) {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-qq / 2.0 + s);
        const double v = std::cbrt(-qq / 2.0 - s);
        rs.insert(u + v - shift);
    } else if (disc == 0) {
        if (qq == 0) {
            rs.insert(-shift);
        } else {
            const double u = std::cbrt(-qq / 2.0);
            rs.insert(2 * u - shift);
            rs.insert(-u - shift);
        }
    } else {
        const double r = std::sqrt(-pp * pp * pp / 27.0);
        const double phi = std::acos(std::clamp(-qq / (2.0 * r), -1.0, 1.0));
        const double m = 2.0 * std::sqrt(-pp / 3.0);
        for (int k = 0; k < 3; ++k) {
            rs.insert(m * std::cos((phi + 2.0 * M_PI * k) / 3.0) - shift);
        }
    }
    for (int i = 0; i < rs.count; ++i) {
        int iters = 0;
        rs.values[i] = polish(p, rs.values[i], 2, iters);
        rs.iterations[i] = iters;
    }
    rs.finish(relative_merge_tol(p, kMergeTol));
    return rs;
}

RootSet solve_quartic(const Polynomial& p) {
    if (p.degree < 4 || std::abs(p.c[4]) < kTiny ||
        std::abs(p.c[4]) < 1e-14 * p.max_abs_coeff()) {
        Polynomial q = p;
        q.degree = std::min(q.degree, 3);
        q.normalize();
        return solve_cubic(q);
    }
    const double a3 = p.c[3] / p.c[4];
    const double a2 = p.c[2] / p.c[4];
    const double a1 = p.c[1] / p.c[4];
    const double a0 = p.c[0] / p.c[4];

    // Resolvent cubic: u^3 - a2 u^2 + (a1 a3 - 4 a0) u - (a1^2 + a0 a3^2 - 4 a0 a2) = 0.
    const Polynomial resolvent =
        Polynomial::from({-(a1 * a1 + a0 * a3 * a3 - 4.0 * a0 * a2), a1 * a3 - 4.0 * a0, -a2, 1.0});
    const RootSet cu = solve_cubic(resolvent);

    RootSet rs;
    // Pick the resolvent root giving the most stable factorization into two
    // quadratics x^2 + (a3/2 +- s) x + (u/2 -+ t).
    for (int i = cu.count - 1; i >= 0; --i) {
        const double u = cu.values[i];
        double s2 = a3 * a3 / 4.0 + u - a2;
        double t2 = u * u / 4.0 - a0;
        if (s2 < 0 && s2 > -1e-10 * std::max(1.0, std::abs(a2))) {
            s2 = 0;
        }
        if (t2 < 0 && t2 > -1e-10 * std::max(1.0, std::abs(a0))) {
            t2 = 0;
        }
        if (s2 < 0 || t2 < 0) {
            continue;
        }
        double s = std::sqrt(s2);
        double t = std::sqrt(t2);
        if ((s * t) * (a3 * u / 2.0 - a1) < 0) {
            t = -t;
        }
        const RootSet q1 = solve_quadratic(Polynomial::from({u / 2.0 + t, a3 / 2.0 + s, 1.0}));
        const RootSet q2 = solve_quadratic(Polynomial::from({u / 2.0 - t, a3 / 2.0 - s, 1.0}));
        for (int k = 0; k < q1.count; ++k) {
            rs.insert(q1.values[k]);
        }
        for (int k = 0; k < q2.count; ++k) {
            rs.insert(q2.values[k]);
        }
        break;
    }
    for (int i = 0; i < rs.count; ++i) {
        int iters = 0;
        rs.values[i] = polish(p, rs.values[i], 2, iters);
        rs.iterations[i] = iters;
    }
    rs.finish(relative_merge_tol(p, kMergeTol));
    return rs;
}

NewtonResult safe_newton(const Polynomial& p, double lo, double hi, double tol, int max_iter) {
    NewtonResult res;
    double flo = p.eval(lo);
    double fhi = p.eval(hi);
    if (flo == 0.0) {
        res.root = lo;
        res.converged = true;
        return res;
    }
    if (fhi == 0.0) {
        res.root = hi;
        res.converged = true;
        return res;
    }
    if ((flo > 0) == (fhi > 0)) {
        // No sign change: report the midpoint unconverged.
        res.root = 0.5 * (lo + hi);
        return res;
    }

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        double f, df;
        p.eval_with_derivative(x, f, df);
        // Converged when |f| sinks below the local evaluation noise floor
        // (sum |c_i||x|^i * eps): the residual cannot be resolved further.
        double noise = 0.0;
        double xp = 1.0;
        for (int i = 0; i <= p.degree; ++i) {
            noise += std::abs(p.c[i]) * xp;
            xp *= std::abs(x);
        }
        if (std::abs(f) <= 4e-16 * noise) {
            res.root = x;
            res.converged = true;
            return res;
        }
        if ((f > 0) == (flo > 0)) {
            lo = x;
            flo = f;
        } else {
            hi = x;
        }
        double next;
        if (std::abs(df) > kTiny) {
            next = x - f / df;
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);  // bisection fallback
            }
        } else {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= tol * std::max(1.0, std::abs(x))) {
            res.root = next;
            res.converged = true;
            res.iterations = it + 1;
            return res;
        }
        x = next;
    }
    res.root = x;
    res.converged = false;
    return res;
}

namespace {

// Roots of a polynomial of degree <= 4 via the closed forms, as the base of
// the isolation recursion.
RootSet solve_closed_form(const Polynomial& p) {
    switch (p.degree) {
        case 0:
            return RootSet{};
        case 1:
            return solve_linear(p);
        case 2:
            return solve_quadratic(p);
        case 3:
            return solve_cubic(p);
        default:
            return solve_quartic(p);
    }
}

// Real roots of p ordered ascending, any degree (recursive).
RootSet solve_any(const Polynomial& p);

BracketList isolate_with_extrema(const Polynomial& p, const RootSet& extrema) {
    BracketList out;
    const double bound = p.root_bound();
    // Candidate breakpoints: -bound, extrema..., +bound.
    std::array<double, kMaxDegree + 2> pts{};
    int n = 0;
    pts[n++] = -bound;
    for (int i = 0; i < extrema.count; ++i) {
        if (extrema.values[i] > -bound && extrema.values[i] < bound) {
            pts[n++] = extrema.values[i];
        }
    }
    pts[n++] = bound;
    for (int i = 0; i + 1 < n; ++i) {
        const double a = pts[i], b = pts[i + 1];
        const double fa = p.eval(a), fb = p.eval(b);
        if (fa == 0.0) {
            // Exact root at a breakpoint: emit a degenerate bracket.
            if (out.count < kMaxDegree) {
                out.items[out.count++] = Bracket{a, a};
            }
            continue;
        }
        if ((fa > 0) != (fb > 0)) {
            if (out.count < kMaxDegree) {
                out.items[out.count++] = Bracket{a, b};
            }
        }
    }
    // Right endpoint root.
    if (n > 0 && p.eval(pts[n - 1]) == 0.0 && out.count < kMaxDegree) {
        out.items[out.count++] = Bracket{pts[n - 1], pts[n - 1]};
    }
    return out;
}

RootSet solve_any(const Polynomial& p) {
    Polynomial q = p;
    q.normalize(1e-14);
    if (q.degree <= 4) {
        return solve_closed_form(q);
    }
    const Polynomial d = q.derivative();
    const RootSet extrema = solve_any(d);
    const BracketList brackets = isolate_with_extrema(q, extrema);
    RootSet rs;
    for (int i = 0; i < brackets.count; ++i) {
        const Bracket& b = brackets.items[i];
        if (b.lo == b.hi) {
            rs.insert(b.lo, 0);
            continue;
        }
        const NewtonResult nr = safe_newton(q, b.lo, b.hi);
        rs.insert(nr.root, nr.iterations);
    }
    rs.finish(relative_merge_tol(q, kMergeTol));
    return rs;
}

// Fujiwara bound on the magnitude of all (complex) roots; by Gauss-Lucas it
// also bounds every root of every derivative.
double fujiwara_bound(const Polynomial& p) {
    if (p.degree < 1 || std::abs(p.c[p.degree]) < kTiny) {
        return 1.0;
    }
    double m = 0.0;
    for (int i = 0; i < p.degree; ++i) {
        double ratio = std::abs(p.c[i] / p.c[p.degree]);
        if (i == 0) {
            ratio /= 2;
        }
        m = std::max(m, std::pow(ratio, 1.0 / (p.degree - i)));
    }
    return 2 * m;
}

// Substitute x = s xi so the isolation runs over |xi| <= 1: balances wildly
// scaled coefficients arising from the profile-system eliminations.
RootSet solve_with_scaling(const Polynomial& p) {
    Polynomial q = p;
    q.normalize(1e-14);
    if (q.degree <= 1) {
        return solve_closed_form(q);
    }
    const double s = std::max(fujiwara_bound(q), 1e-30);
    Polynomial scaled = q;
    double pw = 1.0;
    for (int i = 0; i <= q.degree; ++i) {
        scaled.c[i] = q.c[i] * pw;
        pw *= s;
    }
    const double norm = scaled.max_abs_coeff();
    if (norm > 0) {
        for (int i = 0; i <= scaled.degree; ++i) {
            scaled.c[i] /= norm;
        }
    }
    scaled.normalize(1e-14);
    RootSet rs = scaled.degree <= 4 ? solve_closed_form(scaled) : solve_any(scaled);
    for (int i = 0; i < rs.count; ++i) {
        double r = rs.values[i] * s;
        // A few Newton steps in original coordinates recover the scaling loss.
        int iters = rs.iterations[i];
        r = polish(q, r, 3, iters);
        rs.values[i] = r;
        rs.iterations[i] = iters;
    }
    rs.finish(relative_merge_tol(q, kMergeTol));
    return rs;
}

}  // namespace

BracketList isolate_roots(const Polynomial& p) {
    Polynomial q = p;
    q.normalize(1e-14);
    if (q.degree <= 4) {
        // Not the intended use, but keep it total: brackets around the
        // closed-form roots.
        BracketList out;
        const RootSet rs = solve_closed_form(q);
        for (int i = 0; i < rs.count; ++i) {
            out.items[out.count++] = Bracket{rs.values[i], rs.values[i]};
        }
        return out;
    }
    const RootSet extrema = solve_any(q.derivative());
    return isolate_with_extrema(q, extrema);
}

RootSet solve(const Polynomial& p) {
    return solve_with_scaling(p);
}

}  // namespace otg::roots
