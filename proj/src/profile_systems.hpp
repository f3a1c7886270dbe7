#pragma once

// Internal: reductions of the profile-type condition systems to univariate
// polynomials, plus the closed-form rows. Everything here works in the UP
// frame; callers mirror inputs/outputs for the DOWN direction.
// The derivations live in docs/derivations.md.

#include <array>

#include "otg/profile.hpp"
#include "otg/roots.hpp"
#include "otg/types.hpp"

namespace otg::detail {

using roots::Polynomial;

// ---- small polynomial calculus -------------------------------------------

Polynomial p_const(double c);
Polynomial p_x();
Polynomial p_add(const Polynomial& a, const Polynomial& b);
Polynomial p_sub(const Polynomial& a, const Polynomial& b);
Polynomial p_mul(const Polynomial& a, const Polynomial& b);
Polynomial p_scale(const Polynomial& a, double s);

// Expression a(x) + y b(x) reduced by the conic y^2 = a1(x) + b1 y.
struct Conic {
    Polynomial a1;
    double b1 = 0.0;
};

struct YExpr {
    Polynomial a;
    Polynomial b;
};

YExpr y_const(double c);
YExpr y_from(const Polynomial& p);
YExpr y_var();  // the dependent variable y itself
YExpr y_add(const YExpr& p, const YExpr& q);
YExpr y_sub(const YExpr& p, const YExpr& q);
YExpr y_scale(const YExpr& p, double s);
YExpr y_mul(const Conic& c, const YExpr& p, const YExpr& q);

// Eliminate y from residual = 0: P(x) = a^2 + b1 a b - a1 b^2. The squaring
// cancels leading terms structurally; the returned polynomial has
// coefficients below its roundoff floor (tracked with absolute-value
// arithmetic) zeroed out.
Polynomial y_eliminate(const Conic& c, const YExpr& residual);

// Bivariate polynomial in (u, x) with u-degree <= 2: c[k](x) u^k.
struct UPoly {
    std::array<Polynomial, 3> c{p_const(0), p_const(0), p_const(0)};
};

UPoly u_const(double v);
UPoly u_from(const Polynomial& p);        // u-degree 0
UPoly u_linear(const Polynomial& p);      // p(x) * u
UPoly u_add(const UPoly& a, const UPoly& b);
UPoly u_sub(const UPoly& a, const UPoly& b);
UPoly u_mul(const UPoly& a, const UPoly& b);  // asserts result stays <= u^2
UPoly u_scale(const UPoly& a, double s);

// Substitute u = n / d(x) and clear d^2: P(x) = sum c[k] n^k d^(2-k),
// with sub-roundoff coefficients zeroed as in y_eliminate.
Polynomial u_substitute(const UPoly& p, double n, const Polynomial& d);

// ---- profile-system solving ----------------------------------------------

struct Frame {
    KinematicState x0;
    KinematicState xf;
    Limits limits;
    double jerk = 0.0;  // fixed jerk magnitude (j_max)
};

struct Candidates {
    std::array<Profile, 64> items{};
    int count = 0;
    void push(const Profile& p) {
        if (count < static_cast<int>(items.size())) {
            items[count++] = p;
        }
    }
};

// Step-1 rows (UP frame, jerk = j_max). Raw candidates; validation is the
// caller's job.
void s1_vel(const Frame& f, bool acc0, bool acc1, Candidates& out);
void s1_vel_low(const Frame& f, bool acc0, bool acc1, Candidates& out);
void s1_vel_zero(const Frame& f, bool acc0, bool acc1, Candidates& out);
void s1_acc0_acc1(const Frame& f, Candidates& out);
void s1_acc0(const Frame& f, Candidates& out);
void s1_acc1(const Frame& f, Candidates& out);
void s1_none(const Frame& f, Candidates& out);
void s1_all(const Frame& f, Candidates& out);

// Step-2 rows (UP frame, target profile duration T).
void s2_vel_uddu(const Frame& f, double T, bool acc0, bool acc1, Candidates& out);
void s2_vel_udud(const Frame& f, double T, bool acc0, bool acc1, Candidates& out);
void s2_acc0_acc1(const Frame& f, double T, Candidates& out);
void s2_acc0(const Frame& f, double T, Candidates& out);
void s2_acc1(const Frame& f, double T, Candidates& out);
void s2_none(const Frame& f, double T, Candidates& out);

// Mirror helpers: solving the DOWN direction = solving UP on mirrored inputs.
KinematicState mirror_state(const KinematicState& x);
Limits mirror_limits(const Limits& l);
Profile mirror_profile(Profile p, const KinematicState& original_x0);

}  // namespace otg::detail
