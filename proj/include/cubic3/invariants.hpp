#pragma once

#include <optional>
#include <set>
#include <vector>

#include "cubic3/form.hpp"
#include "cubic3/numeric.hpp"
#include "cubic3/point.hpp"

namespace cubic3 {

/// Classical degree-4 / degree-6 invariants of a ternary cubic, normalized so
/// that F = a*x^3 + x^2*(b*y + c*z) + d*y^3 + z^3 has S = dbc and
/// T = 27a^2d^2 + 4b^3d + 4c^3d^2.  Delta = T^2 - 64 S^3.
struct TernaryInvariants {
    Int S;
    Int T;
    Int Delta;
};

/// Discriminant of a binary cubic p*x^3 + q*x^2*y + r*x*y^2 + s*y^3 in the
/// classical content-1 normalization.
inline Int binary_discriminant(const CubicForm& f) {
    if (f.nvars() != 2)
        throw DomainError("WrongArity", "binary discriminant needs exactly 2 variables");
    Int p = f.icoeff(0, 0, 0), q = f.icoeff(0, 0, 1), r = f.icoeff(0, 1, 1),
        s = f.icoeff(1, 1, 1);
    return q * q * r * r - 4 * p * r * r * r - 4 * q * q * q * s + 18 * p * q * r * s -
           27 * p * p * s * s;
}

inline TernaryInvariants aronhold_ST(const CubicForm& f) {
    if (f.nvars() != 3)
        throw DomainError("WrongArity", "Aronhold invariants need exactly 3 variables");
    if (!f.integral())
        throw DomainError("NonIntegralForm", "Aronhold invariants need integer coefficients");
    // coefficient order: c003, c012, c021, c030, c102, c111, c120, c201, c210, c300
    // where c_abc is the expanded coefficient of x^a y^b z^c
    Int k[10] = {f.icoeff(2, 2, 2), f.icoeff(1, 2, 2), f.icoeff(1, 1, 2), f.icoeff(1, 1, 1),
                 f.icoeff(0, 2, 2), f.icoeff(0, 1, 2), f.icoeff(0, 1, 1), f.icoeff(0, 0, 2),
                 f.icoeff(0, 0, 1), f.icoeff(0, 0, 0)};

    // S = S_num / 144
    Int S_num =
        k[5] * k[5] * k[5] * k[5]
      + -8 * k[4] * k[5] * k[5] * k[6]
      + 16 * k[4] * k[4] * k[6] * k[6]
      + 24 * k[3] * k[4] * k[5] * k[7]
      + -48 * k[3] * k[4] * k[4] * k[8]
      + -8 * k[2] * k[5] * k[5] * k[7]
      + -16 * k[2] * k[4] * k[6] * k[7]
      + 24 * k[2] * k[4] * k[5] * k[8]
      + 16 * k[2] * k[2] * k[7] * k[7]
      + -48 * k[2] * k[2] * k[4] * k[9]
      + 24 * k[1] * k[5] * k[6] * k[7]
      + -8 * k[1] * k[5] * k[5] * k[8]
      + -16 * k[1] * k[4] * k[6] * k[8]
      + -48 * k[1] * k[3] * k[7] * k[7]
      + 144 * k[1] * k[3] * k[4] * k[9]
      + -16 * k[1] * k[2] * k[7] * k[8]
      + 24 * k[1] * k[2] * k[5] * k[9]
      + 16 * k[1] * k[1] * k[8] * k[8]
      + -48 * k[1] * k[1] * k[6] * k[9]
      + -48 * k[0] * k[6] * k[6] * k[7]
      + 24 * k[0] * k[5] * k[6] * k[8]
      + 144 * k[0] * k[3] * k[7] * k[8]
      + -216 * k[0] * k[3] * k[5] * k[9]
      + -48 * k[0] * k[2] * k[8] * k[8]
      + 144 * k[0] * k[2] * k[6] * k[9];

    // T = T_num / 216
    Int T_num =
        -1 * k[5] * k[5] * k[5] * k[5] * k[5] * k[5]
      + 12 * k[4] * k[5] * k[5] * k[5] * k[5] * k[6]
      + -48 * k[4] * k[4] * k[5] * k[5] * k[6] * k[6]
      + 64 * k[4] * k[4] * k[4] * k[6] * k[6] * k[6]
      + -36 * k[3] * k[4] * k[5] * k[5] * k[5] * k[7]
      + 144 * k[3] * k[4] * k[4] * k[5] * k[6] * k[7]
      + 72 * k[3] * k[4] * k[4] * k[5] * k[5] * k[8]
      + -288 * k[3] * k[4] * k[4] * k[4] * k[6] * k[8]
      + -216 * k[3] * k[3] * k[4] * k[4] * k[7] * k[7]
      + 864 * k[3] * k[3] * k[4] * k[4] * k[4] * k[9]
      + 12 * k[2] * k[5] * k[5] * k[5] * k[5] * k[7]
      + -24 * k[2] * k[4] * k[5] * k[5] * k[6] * k[7]
      + -36 * k[2] * k[4] * k[5] * k[5] * k[5] * k[8]
      + -96 * k[2] * k[4] * k[4] * k[6] * k[6] * k[7]
      + 144 * k[2] * k[4] * k[4] * k[5] * k[6] * k[8]
      + 144 * k[2] * k[3] * k[4] * k[5] * k[7] * k[7]
      + 144 * k[2] * k[3] * k[4] * k[4] * k[7] * k[8]
      + -864 * k[2] * k[3] * k[4] * k[4] * k[5] * k[9]
      + -48 * k[2] * k[2] * k[5] * k[5] * k[7] * k[7]
      + -96 * k[2] * k[2] * k[4] * k[6] * k[7] * k[7]
      + 144 * k[2] * k[2] * k[4] * k[5] * k[7] * k[8]
      + 72 * k[2] * k[2] * k[4] * k[5] * k[5] * k[9]
      + -216 * k[2] * k[2] * k[4] * k[4] * k[8] * k[8]
      + 576 * k[2] * k[2] * k[4] * k[4] * k[6] * k[9]
      + 64 * k[2] * k[2] * k[2] * k[7] * k[7] * k[7]
      + -288 * k[2] * k[2] * k[2] * k[4] * k[7] * k[9]
      + -36 * k[1] * k[5] * k[5] * k[5] * k[6] * k[7]
      + 12 * k[1] * k[5] * k[5] * k[5] * k[5] * k[8]
      + 144 * k[1] * k[4] * k[5] * k[6] * k[6] * k[7]
      + -24 * k[1] * k[4] * k[5] * k[5] * k[6] * k[8]
      + -96 * k[1] * k[4] * k[4] * k[6] * k[6] * k[8]
      + 72 * k[1] * k[3] * k[5] * k[5] * k[7] * k[7]
      + 144 * k[1] * k[3] * k[4] * k[6] * k[7] * k[7]
      + -720 * k[1] * k[3] * k[4] * k[5] * k[7] * k[8]
      + 648 * k[1] * k[3] * k[4] * k[5] * k[5] * k[9]
      + 576 * k[1] * k[3] * k[4] * k[4] * k[8] * k[8]
      + -864 * k[1] * k[3] * k[4] * k[4] * k[6] * k[9]
      + 144 * k[1] * k[2] * k[5] * k[6] * k[7] * k[7]
      + -24 * k[1] * k[2] * k[5] * k[5] * k[7] * k[8]
      + -36 * k[1] * k[2] * k[5] * k[5] * k[5] * k[9]
      + -48 * k[1] * k[2] * k[4] * k[6] * k[7] * k[8]
      + 144 * k[1] * k[2] * k[4] * k[5] * k[8] * k[8]
      + -720 * k[1] * k[2] * k[4] * k[5] * k[6] * k[9]
      + -288 * k[1] * k[2] * k[3] * k[7] * k[7] * k[7]
      + 1296 * k[1] * k[2] * k[3] * k[4] * k[7] * k[9]
      + -96 * k[1] * k[2] * k[2] * k[7] * k[7] * k[8]
      + 144 * k[1] * k[2] * k[2] * k[5] * k[7] * k[9]
      + 144 * k[1] * k[2] * k[2] * k[4] * k[8] * k[9]
      + -216 * k[1] * k[1] * k[6] * k[6] * k[7] * k[7]
      + 144 * k[1] * k[1] * k[5] * k[6] * k[7] * k[8]
      + -48 * k[1] * k[1] * k[5] * k[5] * k[8] * k[8]
      + 72 * k[1] * k[1] * k[5] * k[5] * k[6] * k[9]
      + -96 * k[1] * k[1] * k[4] * k[6] * k[8] * k[8]
      + 576 * k[1] * k[1] * k[4] * k[6] * k[6] * k[9]
      + 576 * k[1] * k[1] * k[3] * k[7] * k[7] * k[8]
      + -864 * k[1] * k[1] * k[3] * k[5] * k[7] * k[9]
      + -864 * k[1] * k[1] * k[3] * k[4] * k[8] * k[9]
      + -96 * k[1] * k[1] * k[2] * k[7] * k[8] * k[8]
      + 144 * k[1] * k[1] * k[2] * k[6] * k[7] * k[9]
      + 144 * k[1] * k[1] * k[2] * k[5] * k[8] * k[9]
      + -216 * k[1] * k[1] * k[2] * k[2] * k[9] * k[9]
      + 64 * k[1] * k[1] * k[1] * k[8] * k[8] * k[8]
      + -288 * k[1] * k[1] * k[1] * k[6] * k[8] * k[9]
      + 864 * k[1] * k[1] * k[1] * k[3] * k[9] * k[9]
      + 72 * k[0] * k[5] * k[5] * k[6] * k[6] * k[7]
      + -36 * k[0] * k[5] * k[5] * k[5] * k[6] * k[8]
      + -288 * k[0] * k[4] * k[6] * k[6] * k[6] * k[7]
      + 144 * k[0] * k[4] * k[5] * k[6] * k[6] * k[8]
      + -864 * k[0] * k[3] * k[5] * k[6] * k[7] * k[7]
      + 648 * k[0] * k[3] * k[5] * k[5] * k[7] * k[8]
      + -540 * k[0] * k[3] * k[5] * k[5] * k[5] * k[9]
      + 1296 * k[0] * k[3] * k[4] * k[6] * k[7] * k[8]
      + -864 * k[0] * k[3] * k[4] * k[5] * k[8] * k[8]
      + 1296 * k[0] * k[3] * k[4] * k[5] * k[6] * k[9]
      + 864 * k[0] * k[3] * k[3] * k[7] * k[7] * k[7]
      + -3888 * k[0] * k[3] * k[3] * k[4] * k[7] * k[9]
      + 576 * k[0] * k[2] * k[6] * k[6] * k[7] * k[7]
      + -720 * k[0] * k[2] * k[5] * k[6] * k[7] * k[8]
      + 72 * k[0] * k[2] * k[5] * k[5] * k[8] * k[8]
      + 648 * k[0] * k[2] * k[5] * k[5] * k[6] * k[9]
      + 144 * k[0] * k[2] * k[4] * k[6] * k[8] * k[8]
      + -864 * k[0] * k[2] * k[4] * k[6] * k[6] * k[9]
      + -864 * k[0] * k[2] * k[3] * k[7] * k[7] * k[8]
      + 1296 * k[0] * k[2] * k[3] * k[5] * k[7] * k[9]
      + 1296 * k[0] * k[2] * k[3] * k[4] * k[8] * k[9]
      + 576 * k[0] * k[2] * k[2] * k[7] * k[8] * k[8]
      + -864 * k[0] * k[2] * k[2] * k[6] * k[7] * k[9]
      + -864 * k[0] * k[2] * k[2] * k[5] * k[8] * k[9]
      + 864 * k[0] * k[2] * k[2] * k[2] * k[9] * k[9]
      + 144 * k[0] * k[1] * k[6] * k[6] * k[7] * k[8]
      + 144 * k[0] * k[1] * k[5] * k[6] * k[8] * k[8]
      + -864 * k[0] * k[1] * k[5] * k[6] * k[6] * k[9]
      + -864 * k[0] * k[1] * k[3] * k[7] * k[8] * k[8]
      + 1296 * k[0] * k[1] * k[3] * k[6] * k[7] * k[9]
      + 1296 * k[0] * k[1] * k[3] * k[5] * k[8] * k[9]
      + -288 * k[0] * k[1] * k[2] * k[8] * k[8] * k[8]
      + 1296 * k[0] * k[1] * k[2] * k[6] * k[8] * k[9]
      + -3888 * k[0] * k[1] * k[2] * k[3] * k[9] * k[9]
      + -216 * k[0] * k[0] * k[6] * k[6] * k[8] * k[8]
      + 864 * k[0] * k[0] * k[6] * k[6] * k[6] * k[9]
      + 864 * k[0] * k[0] * k[3] * k[8] * k[8] * k[8]
      + -3888 * k[0] * k[0] * k[3] * k[6] * k[8] * k[9]
      + 5832 * k[0] * k[0] * k[3] * k[3] * k[9] * k[9];

    TernaryInvariants inv;
    if (!divides(144, S_num) || !divides(216, T_num))
        throw DomainError("NonIntegralInvariant",
                          "S or T is not an integer for this form in the chosen normalization");
    inv.S = exact_div(S_num, 144);
    inv.T = exact_div(T_num, 216);
    inv.Delta = inv.T * inv.T - 64 * inv.S * inv.S * inv.S;
    return inv;
}

inline Int ternary_discriminant(const CubicForm& f) { return aronhold_ST(f).Delta; }

struct DivisibilityVerdict {
    enum Kind { Divides, DoesNotDivide, Unsupported } kind;
    Int delta_G = 0;
    Int delta_F = 0;
    std::optional<Int> quotient;
    bool both_zero = false;  // Divides with undefined quotient
};

/// Divisibility check: for F = a*x0^3 + x0^2*(sum b_i x_i) + G(x_1..x_n), does
/// the discriminant of G divide the discriminant of F?  Supported for binary
/// G inside ternary F (the only case where both discriminants are computed).
inline DivisibilityVerdict discriminant_divides(const CubicForm& g, const CubicForm& f) {
    // shape check: no monomial x0*xi*xj with i,j >= 1
    for (const auto& [m, c] : f.terms())
        if (m[0] == 0 && m[1] >= 1)
            throw DomainError("ShapeViolation",
                              "form has a monomial x0*xi*xj with i,j >= 1; not in reduced shape");
    DivisibilityVerdict v;
    if (!(g.nvars() == 2 && f.nvars() == 3)) {
        v.kind = DivisibilityVerdict::Unsupported;
        return v;
    }
    // G must be the x_1..x_n part of F
    for (const auto& [m, c] : g.terms())
        if (f.coeff(m[0] + 1, m[1] + 1, m[2] + 1) != c)
            throw DomainError("ShapeViolation", "G does not match the tail of F");
    for (const auto& [m, c] : f.terms())
        if (m[0] >= 1 && g.coeff(m[0] - 1, m[1] - 1, m[2] - 1) != c)
            throw DomainError("ShapeViolation", "G does not match the tail of F");
    v.delta_G = binary_discriminant(g);
    v.delta_F = ternary_discriminant(f);
    if (v.delta_G == 0) {
        if (v.delta_F == 0) {
            v.kind = DivisibilityVerdict::Divides;
            v.both_zero = true;
        } else {
            v.kind = DivisibilityVerdict::DoesNotDivide;
        }
        return v;
    }
    if (divides(v.delta_G, v.delta_F)) {
        v.kind = DivisibilityVerdict::Divides;
        v.quotient = exact_div(v.delta_F, v.delta_G);
    } else {
        v.kind = DivisibilityVerdict::DoesNotDivide;
    }
    return v;
}

/// All projective points with coordinates bounded by `box` where F and its
/// gradient vanish.  A nonempty result certifies Delta_F = 0 (when defined).
inline std::vector<PointProj> singular_point_search(const CubicForm& f, long box) {
    if (box < 1) throw DomainError("BadBound", "search box must be >= 1");
    int n = f.nvars();
    std::set<PointProj> found;
    std::vector<Int> p(n, Int(-box));
    while (true) {
        bool all_zero = true;
        for (const Int& c : p)
            if (c != 0) {
                all_zero = false;
                break;
            }
        if (!all_zero && evaluate(f, p) == 0) {
            bool grad_zero = true;
            for (const Rat& g : gradient(f, p))
                if (g != 0) {
                    grad_zero = false;
                    break;
                }
            if (grad_zero) found.insert(PointProj(p));
        }
        int i = 0;
        while (i < n && p[i] == box) p[i++] = -box;
        if (i == n) break;
        p[i] += 1;
    }
    return {found.begin(), found.end()};
}

}  // namespace cubic3
