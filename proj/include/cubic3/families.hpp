#pragma once

#include <vector>

#include "cubic3/form.hpp"
#include "cubic3/invariants.hpp"
#include "cubic3/matrix.hpp"
#include "cubic3/numeric.hpp"

namespace cubic3 {

struct PellSolution {
    Int s;
    Int t;  // s^2 - 3 t^2 = 1
};

/// First `count` nonnegative solutions of s^2 - 3 t^2 = 1, starting from
/// (1, 0) and iterating the fundamental-unit recurrence (s,t) -> (2s+3t, s+2t).
inline std::vector<PellSolution> pell_solutions(int count) {
    if (count < 1) throw DomainError("BadCount", "need at least one solution");
    std::vector<PellSolution> out;
    Int s = 1, t = 0;
    for (int i = 0; i < count; ++i) {
        if (s * s - 3 * t * t != 1)
            throw DomainError("InternalCheck", "Pell recurrence produced a non-solution");
        out.push_back({s, t});
        Int ns = 2 * s + 3 * t, nt = s + 2 * t;
        s = ns;
        t = nt;
    }
    return out;
}

struct PellFamilyEntry {
    PellSolution sol;
    IntMat M;  // in SL(3,Z)
    Int A, B;  // act(M, F) = A x^3 + B x^2 y + x^2 z - 3 y^2 z
};

/// The family of inequivalent reduced presentations of
/// F = a x^3 + b x^2 y + x^2 z - 3 y^2 z: one matrix per Pell solution
/// (alpha, beta), each verified by determinant and by exact expansion.
inline std::vector<PellFamilyEntry> pell_family(const Int& a, const Int& b, int count) {
    CubicForm f(3);
    if (a != 0) f.add(0, 0, 0, Rat(a));
    if (b != 0) f.add(0, 0, 1, Rat(b));
    f.add(0, 0, 2, Rat(1));
    f.add(1, 1, 2, Rat(-3));
    std::vector<PellFamilyEntry> out;
    for (const auto& sol : pell_solutions(count)) {
        const Int &al = sol.s, &be = sol.t;
        IntMat m(3, 3);
        m(0, 0) = al;
        m(0, 1) = 3 * be;
        m(1, 0) = be;
        m(1, 1) = al;
        m(2, 0) = be * (3 * b * be * be + 9 * a * al * be + 2 * b * al * al);
        m(2, 1) = 3 * be * be * (3 * a * be + b * al);
        m(2, 2) = 1;
        if (det(m) != 1)
            throw DomainError("InternalCheck", "Pell matrix is not in SL(3,Z)");
        Int A = 3 * b * al * al * be + 3 * b * be * be * be + a * al * al * al +
                9 * a * al * be * be;
        Int B = 9 * a * be * be * be + 9 * b * al * be * be + 9 * a * al * al * be +
                b * al * al * al;
        CubicForm expect(3);
        if (A != 0) expect.add(0, 0, 0, Rat(A));
        if (B != 0) expect.add(0, 0, 1, Rat(B));
        expect.add(0, 0, 2, Rat(1));
        expect.add(1, 1, 2, Rat(-3));
        if (act(m, f) != expect)
            throw DomainError("InternalCheck",
                              "Pell matrix action does not match the closed-form target");
        out.push_back({sol, m, A, B});
    }
    return out;
}

/// Staged data of the double blow-up of projective 3-space along a line and
/// then a conic: the first stage's cubic in the (L1, L2) = (H, H - E) basis,
/// the second stage's printed target form, and its discriminant/node data.
struct BlowupP3Fixture {
    CubicForm stage1_HE;     // cubic from (H, E) intersection numbers
    CubicForm stage1;        // restriction to (L1, L2): y^3 + 3 y^2 z
    CubicForm stage2;        // x^3 - 3(y+z) x^2 + y^3 + 3 y^2 z
    Int stage2_a;            // template inputs reproducing stage2
    std::vector<Int> stage2_b;
    Int delta;               // ternary discriminant of stage2 (= 0)
    std::vector<PointProj> nodes;  // singular points of stage2 in box 3
};

inline BlowupP3Fixture example_blowup_p3() {
    BlowupP3Fixture fx;
    // intersection numbers on the (H, E) basis: H^3 = 1, H^2 E = 0,
    // H E^2 = -1, E^3 = -2
    fx.stage1_HE = build_from_intersections(
        2, {{{0, 0, 0}, Int(1)}, {{0, 0, 1}, Int(0)}, {{0, 1, 1}, Int(-1)}, {{1, 1, 1}, Int(-2)}});
    fx.stage1 = restrict_form(fx.stage1_HE, {{Int(1), Int(0)}, {Int(1), Int(-1)}});
    CubicForm expect1(2);
    expect1.add(0, 0, 0, Rat(1));
    expect1.add(0, 0, 1, Rat(3));
    if (fx.stage1 != expect1)
        throw DomainError("InternalCheck", "stage-1 form is not y^3 + 3 y^2 z");
    fx.stage2 = CubicForm(3);
    fx.stage2.add(0, 0, 0, Rat(1));
    fx.stage2.add(0, 0, 1, Rat(-3));
    fx.stage2.add(0, 0, 2, Rat(-3));
    fx.stage2.add(1, 1, 1, Rat(1));
    fx.stage2.add(1, 1, 2, Rat(3));
    fx.stage2_a = 1;
    fx.stage2_b = {Int(-1), Int(-1)};
    // template check: a x0^3 + 3 x0^2 (b1 x1 + b2 x2) + stage1(x1, x2)
    CubicForm assembled(3);
    assembled.add(0, 0, 0, Rat(fx.stage2_a));
    assembled.add(0, 0, 1, Rat(3 * fx.stage2_b[0]));
    assembled.add(0, 0, 2, Rat(3 * fx.stage2_b[1]));
    for (const auto& [m, c] : fx.stage1.terms()) assembled.add(m[0] + 1, m[1] + 1, m[2] + 1, c);
    if (assembled != fx.stage2)
        throw DomainError("InternalCheck", "template inputs do not reproduce the stage-2 form");
    fx.delta = ternary_discriminant(fx.stage2);
    if (fx.delta != 0)
        throw DomainError("InternalCheck", "stage-2 discriminant is nonzero");
    fx.nodes = singular_point_search(fx.stage2, 3);
    if (fx.nodes.size() != 1)
        throw DomainError("InternalCheck", "stage-2 form should have a unique nodal witness");
    return fx;
}

}  // namespace cubic3
