#pragma once

#include <array>
#include <cstddef>

namespace otg::roots {

inline constexpr int kMaxDegree = 8;
inline constexpr int kMaxIterations = 64;
inline constexpr double kStepTol = 1e-14;
inline constexpr double kMergeTol = 1e-10;

/// Dense real polynomial, coefficients in ascending order:
/// c[0] + c[1] x + ... + c[degree] x^degree. The leading coefficient is kept
/// non-zero by normalize().
struct Polynomial {
    std::array<double, kMaxDegree + 1> c{};
    int degree = 0;

    static Polynomial from(std::initializer_list<double> ascending);

    double eval(double x) const;
    /// Evaluates p(x) and p'(x) in one Horner pass.
    void eval_with_derivative(double x, double& value, double& derivative) const;
    Polynomial derivative() const;
    /// Drop (near-)zero leading coefficients; degree may shrink.
    void normalize(double rel_eps = 0.0);
    /// Upper bound on |root| for all real roots (Cauchy bound).
    double root_bound() const;
    double max_abs_coeff() const;
};

/// Sorted distinct real roots plus the refinement iterations each one took.
struct RootSet {
    std::array<double, kMaxDegree> values{};
    std::array<int, kMaxDegree> iterations{};
    int count = 0;

    void insert(double r, int iters = 0);
    /// Sort ascending and merge roots closer than tol.
    void finish(double tol = kMergeTol);
};

/// Interval known to contain exactly one real root (sign change bracket).
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct BracketList {
    std::array<Bracket, kMaxDegree> items{};
    int count = 0;
};

struct NewtonResult {
    double root = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Closed-form solvers. Degenerate leading coefficients delegate to the
/// next-lower-degree solver. Complex pairs are omitted; near-double real
/// roots are merged.
RootSet solve_linear(const Polynomial& p);
RootSet solve_quadratic(const Polynomial& p);
RootSet solve_cubic(const Polynomial& p);
RootSet solve_quartic(const Polynomial& p);

/// Bracketed Newton iteration with bisection fallback. pre: p has opposite
/// signs at the bracket ends. Terminates in at most max_iter iterations;
/// if the tolerance was not met by then, converged = false and the best
/// estimate is returned (the caller decides).
NewtonResult safe_newton(const Polynomial& p, double lo, double hi, double tol = kStepTol,
                         int max_iter = kMaxIterations);

/// Disjoint intervals each containing exactly one real root, for degree >= 5.
/// Works by recursively isolating the roots of the derivative (analytic
/// closed forms once the degree drops to four) and bracketing sign changes
/// between neighbouring extrema, bounded by the Cauchy root bound.
BracketList isolate_roots(const Polynomial& p);

/// All real roots of a polynomial of any degree up to kMaxDegree: closed
/// forms through degree 4, isolation + safe Newton above that.
RootSet solve(const Polynomial& p);

}  // namespace otg::roots
