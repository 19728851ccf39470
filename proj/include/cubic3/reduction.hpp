#pragma once

#include <algorithm>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "cubic3/form.hpp"
#include "cubic3/invariants.hpp"
#include "cubic3/matrix.hpp"
#include "cubic3/numeric.hpp"
#include "cubic3/point.hpp"

namespace cubic3 {

/// Normal shape a*x0^3 + x0^2 * sum_i B[i] x_{i+1} + G(x_1..x_n); B stores the
/// raw x0^2*x_i coefficients.
struct ReducedTriple {
    Int a;
    std::vector<Int> B;
    CubicForm G;

    bool operator==(const ReducedTriple& o) const { return a == o.a && B == o.B && G == o.G; }
    bool operator<(const ReducedTriple& o) const {
        if (a != o.a) return a < o.a;
        if (B != o.B) return B < o.B;
        return G < o.G;
    }
};

inline CubicForm reassemble(const ReducedTriple& t) {
    int n = t.G.nvars();
    if (t.B.size() != static_cast<std::size_t>(n))
        throw DomainError("DimensionMismatch", "B length does not match G arity");
    CubicForm f(n + 1);
    if (t.a != 0) f.add(0, 0, 0, Rat(t.a));
    for (int i = 0; i < n; ++i)
        if (t.B[i] != 0) f.add(0, 0, i + 1, Rat(t.B[i]));
    for (const auto& [m, c] : t.G.terms()) f.add(m[0] + 1, m[1] + 1, m[2] + 1, c);
    return f;
}

/// Reads off the triple when F already has the reduced shape in the current
/// coordinates (no monomial x0*xi*xj with i,j >= 1); no basis search.
inline std::optional<ReducedTriple> detect_reduced(const CubicForm& f) {
    if (f.nvars() < 2)
        throw DomainError("BadArity", "reduced triples need at least 2 variables");
    for (const auto& [m, c] : f.terms())
        if (m[0] == 0 && m[1] >= 1) return std::nullopt;
    int n = f.nvars() - 1;
    ReducedTriple t{to_int(f.coeff(0, 0, 0)), std::vector<Int>(n), CubicForm(n)};
    for (int i = 0; i < n; ++i) t.B[i] = to_int(f.coeff(0, 0, i + 1));
    for (const auto& [m, c] : f.terms())
        if (m[0] >= 1) t.G.add(m[0] - 1, m[1] - 1, m[2] - 1, c);
    return t;
}

// --- bounded unimodular enumeration ----------------------------------------

/// Call fn for every n x n integer matrix with entries in [-radius, radius]
/// and determinant 1.  Exhaustive odometer; meant for small n and radius.
inline void for_each_unimodular(int n, long radius, const std::function<void(const IntMat&)>& fn) {
    std::vector<long> e(n * n, -radius);
    IntMat m(n, n);
    while (true) {
        for (int i = 0; i < n * n; ++i) m(i / n, i % n) = e[i];
        if (det(m) == 1) fn(m);
        int i = 0;
        while (i < n * n && e[i] == radius) e[i++] = -radius;
        if (i == n * n) return;
        ++e[i];
    }
}

// --- equivalence of reduced triples ----------------------------------------

struct EquivalenceVerdict {
    enum Kind { Equivalent, DefinitelyNot, NotFoundWithinRadius } kind;
    std::optional<IntMat> witness;  // M with diag(1,M) . reassemble(t1) = reassemble(t2)
    std::string reason;
    long radius = 0;
};

inline IntMat block_diag1(const IntMat& m) {
    IntMat t(m.rows() + 1, m.cols() + 1);
    t(0, 0) = 1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(i + 1, j + 1) = m(i, j);
    return t;
}

inline EquivalenceVerdict triples_equivalent(const ReducedTriple& t1, const ReducedTriple& t2,
                                             long radius) {
    if (t1.B.size() != t2.B.size() || t1.G.nvars() != t2.G.nvars())
        throw DomainError("DimensionMismatch", "triples have different arity");
    if (radius < 1) throw DomainError("BadBound", "search radius must be >= 1");
    int n = t1.G.nvars();
    EquivalenceVerdict v;
    v.radius = radius;
    if (t1.a != t2.a) {
        v.kind = EquivalenceVerdict::DefinitelyNot;
        v.reason = "a-components differ: " + t1.a.get_str() + " vs " + t2.a.get_str();
        return v;
    }
    Int cb1 = 0, cb2 = 0;
    for (const Int& b : t1.B) cb1 = gcd(cb1, b);
    for (const Int& b : t2.B) cb2 = gcd(cb2, b);
    if (cb1 != cb2) {
        v.kind = EquivalenceVerdict::DefinitelyNot;
        v.reason = "content of B differs";
        return v;
    }
    if (n == 2 && t1.G.integral() && t2.G.integral()) {
        if (binary_discriminant(t1.G) != binary_discriminant(t2.G)) {
            v.kind = EquivalenceVerdict::DefinitelyNot;
            v.reason = "discriminant of G differs";
            return v;
        }
    } else if (n == 3 && t1.G.integral() && t2.G.integral()) {
        try {
            if (ternary_discriminant(t1.G) != ternary_discriminant(t2.G)) {
                v.kind = EquivalenceVerdict::DefinitelyNot;
                v.reason = "discriminant of G differs";
                return v;
            }
        } catch (const DomainError&) {
            // invariant not integral in this normalization; skip the filter
        }
    }
    if (n == 1) {
        // SL(1,Z) = {1}: equivalence is equality
        if (t1 == t2) {
            v.kind = EquivalenceVerdict::Equivalent;
            v.witness = IntMat::identity(1);
        } else {
            v.kind = EquivalenceVerdict::DefinitelyNot;
            v.reason = "SL(1,Z) is trivial and the triples differ";
        }
        return v;
    }
    CubicForm f1 = reassemble(t1), f2 = reassemble(t2);
    std::optional<IntMat> witness;
    for_each_unimodular(n, radius, [&](const IntMat& m) {
        if (witness) return;
        if (act(block_diag1(m), f1) == f2) witness = m;
    });
    if (witness) {
        v.kind = EquivalenceVerdict::Equivalent;
        v.witness = witness;
    } else {
        v.kind = EquivalenceVerdict::NotFoundWithinRadius;
    }
    return v;
}

// --- low-rank Hessian probe -------------------------------------------------

struct RankedPoint {
    PointProj point;
    std::size_t rank;
    Int value;
};

/// Rational-point probe of the loci {rk H_F <= max_rank}: every primitive
/// point with coordinates bounded by `box`, in lexicographic order.
inline std::vector<RankedPoint> low_rank_points(const CubicForm& f, std::size_t max_rank,
                                                long box) {
    if (box < 1) throw DomainError("BadBound", "search box must be >= 1");
    if (max_rank > static_cast<std::size_t>(f.nvars()))
        throw DomainError("BadBound", "max_rank exceeds variable count");
    int n = f.nvars();
    std::set<PointProj> seen;
    std::vector<RankedPoint> out;
    std::vector<Int> p(n, Int(-box));
    while (true) {
        bool nonzero = false;
        for (const Int& c : p)
            if (c != 0) nonzero = true;
        if (nonzero) {
            PointProj pp(p);
            if (seen.insert(pp).second && hessian_rank(f, pp) <= max_rank)
                out.push_back({pp, hessian_rank(f, pp), to_int(evaluate(f, pp.coords()))});
        }
        int i = 0;
        while (i < n && p[i] == box) p[i++] = -box;
        if (i == n) break;
        p[i] += 1;
    }
    std::sort(out.begin(), out.end(),
              [](const RankedPoint& a, const RankedPoint& b) { return a.point < b.point; });
    return out;
}

// --- binary triple enumeration (and its brute-force oracle) -----------------

struct BinaryTriple {
    Int a, b, c;
    bool operator==(const BinaryTriple& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const BinaryTriple& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

struct BinaryTripleHit {
    BinaryTriple triple;
    std::vector<IntMat> witnesses;  // each T in SL(2,Z), T.F reduced
};

namespace detail {

/// transformed coefficients of F = a x^3 + b x^2 y + c y^3 under (T.F)(v) = F(Tv)
inline std::array<Int, 4> binary_transform(const Int& a, const Int& b, const Int& c,
                                           const Int& t00, const Int& t01, const Int& t10,
                                           const Int& t11) {
    Int na = a * t00 * t00 * t00 + b * t00 * t00 * t10 + c * t10 * t10 * t10;
    Int nb = 3 * a * t00 * t00 * t01 + b * (2 * t00 * t01 * t10 + t00 * t00 * t11) +
             3 * c * t10 * t10 * t11;
    Int nr = 3 * a * t00 * t01 * t01 + b * (t01 * t01 * t10 + 2 * t00 * t01 * t11) +
             3 * c * t10 * t11 * t11;
    Int nc = a * t01 * t01 * t01 + b * t01 * t01 * t11 + c * t11 * t11 * t11;
    return {na, nb, nr, nc};
}

/// Triples come in (t, -t) pairs since (-T).F is the negation of T.F and -T
/// stays in SL(2,Z); canonicalize to the representative with c > 0 (then
/// b > 0, then a > 0), adjusting the witness to -T alongside.
inline void canonicalize_sign(BinaryTriple& t, IntMat& m) {
    bool flip;
    if (t.c != 0)
        flip = t.c < 0;
    else if (t.b != 0)
        flip = t.b < 0;
    else
        flip = t.a < 0;
    if (flip) {
        t.a = -t.a;
        t.b = -t.b;
        t.c = -t.c;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) m(i, j) = -m(i, j);
    }
}

inline void insert_hit(std::vector<BinaryTripleHit>& hits, const BinaryTriple& t,
                       const IntMat& m) {
    for (auto& h : hits)
        if (h.triple == t) {
            h.witnesses.push_back(m);
            return;
        }
    hits.push_back({t, {m}});
}

inline void sort_hits(std::vector<BinaryTripleHit>& hits) {
    auto mat_less = [](const IntMat& x, const IntMat& y) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                if (x(i, j) != y(i, j)) return x(i, j) < y(i, j);
        return false;
    };
    for (auto& h : hits) std::sort(h.witnesses.begin(), h.witnesses.end(), mat_less);
    std::sort(hits.begin(), hits.end(),
              [](const BinaryTripleHit& x, const BinaryTripleHit& y) { return x.triple < y.triple; });
}

}  // namespace detail

/// Brute-force oracle: sweep every T in SL(2,Z) with |entries| <= bound and
/// keep those with (T.F) reduced (no x*y^2 monomial).
inline std::vector<BinaryTripleHit> brute_binary_triples(const Int& a, const Int& b, const Int& c,
                                                         long bound) {
    if (c == 0) throw DomainError("ZeroC", "the input triple must have c != 0");
    if (bound < 1) throw DomainError("BadBound", "bound must be >= 1");
    std::vector<BinaryTripleHit> hits;
    for (long t00 = -bound; t00 <= bound; ++t00)
        for (long t01 = -bound; t01 <= bound; ++t01)
            for (long t10 = -bound; t10 <= bound; ++t10) {
                // det = t00 t11 - t01 t10 = 1 pins t11 when t00 != 0
                for (long t11 = -bound; t11 <= bound; ++t11) {
                    if (t00 * t11 - t01 * t10 != 1) continue;
                    auto co = detail::binary_transform(a, b, c, Int(t00), Int(t01), Int(t10),
                                                       Int(t11));
                    if (co[2] != 0) continue;
                    IntMat m(2, 2, {Int(t00), Int(t01), Int(t10), Int(t11)});
                    BinaryTriple tr{co[0], co[1], co[3]};
                    detail::canonicalize_sign(tr, m);
                    detail::insert_hit(hits, tr, m);
                }
            }
    detail::sort_hits(hits);
    return hits;
}

/// Reduced triples of F = a x^3 + b x^2 y + c y^3 reachable by T in SL(2,Z)
/// with |entries| <= bound, via the linear-system characterization: for each
/// candidate second column (t01, t11), the no-x*y^2 condition together with
/// det T = 1 is a 2x2 linear system in (t00, t10) with determinant
/// 3 F(t01, t11).  When Delta_F != 0, F(t01, t11) must divide Delta_F.
inline std::vector<BinaryTripleHit> enumerate_binary_triples(const Int& a, const Int& b,
                                                             const Int& c, long bound) {
    if (c == 0) throw DomainError("ZeroC", "the input triple must have c != 0");
    if (bound < 1) throw DomainError("BadBound", "bound must be >= 1");
    CubicForm f(2);
    if (a != 0) f.add(0, 0, 0, Rat(a));
    if (b != 0) f.add(0, 0, 1, Rat(b));
    f.add(1, 1, 1, Rat(c));
    Int delta = binary_discriminant(f);
    std::vector<BinaryTripleHit> hits;
    auto consider = [&](const Int& t00, const Int& t01, const Int& t10, const Int& t11) {
        if (abs(t00) > bound || abs(t10) > bound) return;
        if (t00 * t11 - t01 * t10 != 1) return;
        auto co = detail::binary_transform(a, b, c, t00, t01, t10, t11);
        if (co[2] != 0)
            throw DomainError("InternalCheck", "solved matrix does not reduce the form");
        IntMat m(2, 2, {t00, t01, t10, t11});
        BinaryTriple tr{co[0], co[1], co[3]};
        detail::canonicalize_sign(tr, m);
        detail::insert_hit(hits, tr, m);
    };
    for (long l01 = -bound; l01 <= bound; ++l01)
        for (long l11 = -bound; l11 <= bound; ++l11) {
            Int t01(l01), t11(l11);
            Int cp = a * t01 * t01 * t01 + b * t01 * t01 * t11 + c * t11 * t11 * t11;
            Int P = 3 * a * t01 * t01 + 2 * b * t01 * t11;  // coefficient of t00
            Int Q = b * t01 * t01 + 3 * c * t11 * t11;      // coefficient of t10
            if (cp != 0) {
                if (delta != 0 && !divides(cp, delta)) continue;  // divisor filter
                Int d = 3 * cp;  // system determinant
                if (!divides(d, Q) || !divides(d, -P)) continue;
                consider(exact_div(Q, d), t01, exact_div(-P, d), t11);
            } else {
                // singular system: solvable only when the reduction condition
                // is identically satisfied, then t00, t10 run over a det-1 line
                if (l01 == 0 && l11 == 0) continue;
                if (P != 0 || Q != 0) continue;
                Int g, u, v;
                mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), t11.get_mpz_t(),
                           t01.get_mpz_t());
                if (g != 1) continue;  // t11 t00 - t01 t10 = 1 unsolvable
                // particular (t00, t10) = (u, -v); general + k (t01, t11)
                for (long k = -3 * bound; k <= 3 * bound; ++k)
                    consider(u + k * t01, t01, -v + k * t11, t11);
            }
        }
    detail::sort_hits(hits);
    return hits;
}

// --- reduced-form search over SL(n+1, Z) ------------------------------------

struct FoundTriple {
    ReducedTriple triple;
    IntMat T;  // columns (c0 | c1 | ... ), T.F = reassemble(triple)
};

namespace detail {

inline bool mat_less(const IntMat& x, const IntMat& y) {
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (x(i, j) != y(i, j)) return x(i, j) < y(i, j);
    return false;
}

inline std::array<Int, 3> cross3(const std::vector<Int>& a, const std::vector<Int>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// all integer vectors m1 v1 + m2 v2 with sup-norm <= r (v1, v2 independent
/// columns of a 3x2 matrix), as coefficient pairs
inline std::vector<std::pair<long, long>> lattice_points_in_box(const IntMat& v, long r) {
    int pi = -1, pj = -1;
    Int d = 0;
    for (int i = 0; i < 3 && pi < 0; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Int dd = v(i, 0) * v(j, 1) - v(j, 0) * v(i, 1);
            if (dd != 0) {
                pi = i;
                pj = j;
                d = dd;
                break;
            }
        }
    if (pi < 0) throw DomainError("InternalCheck", "dependent lattice basis");
    Int ad = abs(d);
    auto bound_for = [&](int col_other) {
        Int num = Int(r) * (abs(v(pi, col_other)) + abs(v(pj, col_other)));
        Int q = num / ad + 1;
        return q.get_si();
    };
    long c1 = bound_for(1), c2 = bound_for(0);
    std::vector<std::pair<long, long>> out;
    for (long m1 = -c1; m1 <= c1; ++m1)
        for (long m2 = -c2; m2 <= c2; ++m2) {
            bool ok = true;
            for (int i = 0; i < 3; ++i)
                if (abs(Int(m1) * v(i, 0) + Int(m2) * v(i, 1)) > r) {
                    ok = false;
                    break;
                }
            if (ok) out.emplace_back(m1, m2);
        }
    return out;
}

/// rational linear forms u (primitive integer, canonical sign) with
/// u-perp totally isotropic for the symmetric matrix m (rank 1 or 2)
inline std::vector<std::vector<Int>> isotropic_plane_normals(const IntMat& m) {
    auto canon = [](std::vector<Int> u) {
        Int g = 0;
        for (const Int& x : u) g = gcd(g, x);
        for (Int& x : u) x = exact_div(x, g);
        for (const Int& x : u) {
            if (x == 0) continue;
            if (x < 0)
                for (Int& y : u) y = -y;
            break;
        }
        return u;
    };
    std::size_t rk = rank(m);
    std::vector<std::vector<Int>> normals;
    if (rk == 1) {
        // m = +-(u u^T)/s: any nonzero row is proportional to u
        for (int i = 0; i < 3; ++i) {
            std::vector<Int> row = {m(i, 0), m(i, 1), m(i, 2)};
            if (row[0] != 0 || row[1] != 0 || row[2] != 0) {
                normals.push_back(canon(row));
                break;
            }
        }
        return normals;
    }
    if (rk != 2) return normals;
    // kernel direction z; complete with two standard basis vectors
    IntMat kern = integer_kernel(m);
    std::vector<Int> z = kern.column(0);
    std::vector<std::vector<Int>> basis;
    for (int i = 0; i < 3 && basis.size() < 2; ++i) {
        std::vector<Int> e(3, 0);
        e[i] = 1;
        IntMat test(3, basis.size() + 2);
        for (int r2 = 0; r2 < 3; ++r2) test(r2, 0) = z[r2];
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (int r2 = 0; r2 < 3; ++r2) test(r2, b + 1) = basis[b][r2];
        for (int r2 = 0; r2 < 3; ++r2) test(r2, basis.size() + 1) = e[r2];
        if (rank(test) == basis.size() + 2) basis.push_back(e);
    }
    const auto& e = basis[0];
    const auto& f2 = basis[1];
    auto bil = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
        Int s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += x[i] * m(i, j) * y[j];
        return s;
    };
    Int al = bil(e, e), be = 2 * bil(e, f2), ga = bil(f2, f2);
    Int disc = be * be - 4 * al * ga;
    auto sq = exact_sqrt(disc);
    if (!sq) return normals;  // irrational factors: no rational isotropic plane
    // factor roots of al s^2 + be s t + ga t^2 as linear forms A s + B t
    std::vector<std::pair<Int, Int>> factors;
    if (al != 0) {
        factors.emplace_back(2 * al, be - *sq);
        factors.emplace_back(2 * al, be + *sq);
    } else if (ga != 0) {
        factors.emplace_back(be - *sq, 2 * ga);
        factors.emplace_back(be + *sq, 2 * ga);
    } else {
        factors.emplace_back(Int(1), Int(0));  // s
        factors.emplace_back(Int(0), Int(1));  // t
    }
    for (const auto& [A, B] : factors) {
        if (A == 0 && B == 0) continue;
        // u with u.e = A, u.f2 = B, u.z = 0
        RatMat cols(3, 3);
        for (int i = 0; i < 3; ++i) {
            cols(i, 0) = e[i];
            cols(i, 1) = f2[i];
            cols(i, 2) = z[i];
        }
        RatMat inv = inverse(cols);
        std::vector<Rat> u(3);
        for (int j = 0; j < 3; ++j) u[j] = Rat(A) * inv(0, j) + Rat(B) * inv(1, j);
        Int den = 1;
        for (const Rat& x : u) den = lcm(den, Int(x.get_den()));
        std::vector<Int> ui(3);
        for (int j = 0; j < 3; ++j) ui[j] = to_int(u[j] * den);
        normals.push_back(canon(ui));
    }
    if (normals.size() == 2 && normals[0] == normals[1]) normals.pop_back();
    return normals;
}

}  // namespace detail

/// Exhaustive fallback: every T in SL(n,Z) with entries <= radius such that
/// T.F is reduced.
inline std::vector<FoundTriple> brute_search_reduced(const CubicForm& f, long radius) {
    std::vector<FoundTriple> out;
    for_each_unimodular(f.nvars(), radius, [&](const IntMat& t) {
        CubicForm g = act(t, f);
        auto tr = detect_reduced(g);
        if (tr) out.push_back({*tr, t});
    });
    return out;
}

/// All reduced triples of a ternary F reachable within the entry bound, found
/// without sweeping all of SL(3,Z): T.F is reduced iff the second and third
/// columns of T span a totally isotropic plane of the Hessian at the first
/// column, so candidate planes come from factoring that rank <= 2 quadric.
inline std::vector<FoundTriple> search_reduced_triples(const CubicForm& f, long radius,
                                                       int threads = 1) {
    if (radius < 1) throw DomainError("BadBound", "search radius must be >= 1");
    if (f.nvars() != 3) return brute_search_reduced(f, radius);
    if (threads < 1) threads = 1;

    auto process_c0 = [&](const std::vector<Int>& c0, std::vector<FoundTriple>& out) {
        IntMat h = to_integral(hessian(f, c0));
        std::size_t rk = rank(h);
        if (rk == 3) return;
        if (rk == 0) {
            // isotropy is vacuous; sweep second columns and solve the det
            // condition cross(c0, c1) . c2 = 1 for the third
            for (long a1 = -radius; a1 <= radius; ++a1)
                for (long b1 = -radius; b1 <= radius; ++b1)
                    for (long c1v = -radius; c1v <= radius; ++c1v) {
                        std::vector<Int> c1 = {Int(a1), Int(b1), Int(c1v)};
                        auto g = detail::cross3(c0, c1);
                        Int gg = gcd(gcd(g[0], g[1]), g[2]);
                        if (gg != 1) continue;
                        // particular solution of g . x = 1
                        Int g01, u0, u1;
                        mpz_gcdext(g01.get_mpz_t(), u0.get_mpz_t(), u1.get_mpz_t(),
                                   g[0].get_mpz_t(), g[1].get_mpz_t());
                        Int gt, w01, w2;
                        mpz_gcdext(gt.get_mpz_t(), w01.get_mpz_t(), w2.get_mpz_t(),
                                   g01.get_mpz_t(), g[2].get_mpz_t());
                        std::vector<Int> x0 = {u0 * w01, u1 * w01, w2};
                        IntMat gm(1, 3);
                        for (int i = 0; i < 3; ++i) gm(0, i) = g[i];
                        IntMat kern = integer_kernel(gm);  // 3x2
                        // reduce the particular solution against the kernel lattice
                        {
                            RatMat sys(3, 2);
                            for (int i = 0; i < 3; ++i)
                                for (int j = 0; j < 2; ++j) sys(i, j) = kern(i, j);
                            // least-effort size reduction: round rational coords
                            // of x0 in the kernel basis using two pivot rows
                            int pi = -1, pj = -1;
                            Int dd = 0;
                            for (int i = 0; i < 3 && pi < 0; ++i)
                                for (int j = i + 1; j < 3; ++j) {
                                    Int v2 = kern(i, 0) * kern(j, 1) - kern(j, 0) * kern(i, 1);
                                    if (v2 != 0) {
                                        pi = i;
                                        pj = j;
                                        dd = v2;
                                        break;
                                    }
                                }
                            Rat m1 = Rat(kern(pj, 1) * x0[pi] - kern(pi, 1) * x0[pj]) / dd;
                            Rat m2 = Rat(-kern(pj, 0) * x0[pi] + kern(pi, 0) * x0[pj]) / dd;
                            auto round_rat = [](const Rat& q) {
                                Int fl;
                                mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(),
                                           q.get_den().get_mpz_t());
                                return (q - fl >= Rat(1, 2)) ? fl + 1 : fl;
                            };
                            Int r1 = round_rat(m1), r2 = round_rat(m2);
                            for (int i = 0; i < 3; ++i)
                                x0[i] -= r1 * kern(i, 0) + r2 * kern(i, 1);
                        }
                        Int off = 0;
                        for (int i = 0; i < 3; ++i) off = std::max(off, abs(x0[i]));
                        long slack = radius + off.get_si();
                        for (auto [m1, m2] : detail::lattice_points_in_box(kern, slack)) {
                            std::vector<Int> c2(3);
                            bool in_box = true;
                            for (int i = 0; i < 3; ++i) {
                                c2[i] = x0[i] + Int(m1) * kern(i, 0) + Int(m2) * kern(i, 1);
                                if (abs(c2[i]) > radius) in_box = false;
                            }
                            if (!in_box) continue;
                            IntMat t(3, 3);
                            for (int i = 0; i < 3; ++i) {
                                t(i, 0) = c0[i];
                                t(i, 1) = c1[i];
                                t(i, 2) = c2[i];
                            }
                            if (det(t) != 1) continue;
                            auto tr = detect_reduced(act(t, f));
                            if (tr) out.push_back({*tr, t});
                        }
                    }
            return;
        }
        for (const auto& u : detail::isotropic_plane_normals(h)) {
            Int dot = 0;
            for (int i = 0; i < 3; ++i) dot += u[i] * c0[i];
            if (abs(dot) != 1) continue;  // no unimodular completion possible
            IntMat um(1, 3);
            for (int i = 0; i < 3; ++i) um(0, i) = u[i];
            IntMat lat = integer_kernel(um);  // basis of the isotropic plane lattice
            auto pts = detail::lattice_points_in_box(lat, radius);
            for (auto [m1, m2] : pts)
                for (auto [n1, n2] : pts) {
                    if (m1 * n2 - m2 * n1 == 0) continue;
                    IntMat t(3, 3);
                    for (int i = 0; i < 3; ++i) {
                        t(i, 0) = c0[i];
                        t(i, 1) = Int(m1) * lat(i, 0) + Int(m2) * lat(i, 1);
                        t(i, 2) = Int(n1) * lat(i, 0) + Int(n2) * lat(i, 1);
                    }
                    if (det(t) != 1) continue;
                    auto tr = detect_reduced(act(t, f));
                    if (!tr)
                        throw DomainError("InternalCheck",
                                          "isotropic completion did not reduce the form");
                    out.push_back({*tr, t});
                }
        }
    };

    std::vector<std::vector<FoundTriple>> partial(threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w]() {
            std::vector<Int> c0(3);
            for (long x = -radius; x <= radius; ++x) {
                if (((x + radius) % threads) != w) continue;
                for (long y = -radius; y <= radius; ++y)
                    for (long z = -radius; z <= radius; ++z) {
                        if (x == 0 && y == 0 && z == 0) continue;
                        c0 = {Int(x), Int(y), Int(z)};
                        process_c0(c0, partial[w]);
                    }
            }
        });
    for (auto& th : pool) th.join();

    std::vector<FoundTriple> out;
    for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end(), [](const FoundTriple& a, const FoundTriple& b) {
        if (!(a.triple == b.triple)) return a.triple < b.triple;
        return detail::mat_less(a.T, b.T);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const FoundTriple& a, const FoundTriple& b) {
                              return a.triple == b.triple && !detail::mat_less(a.T, b.T) &&
                                     !detail::mat_less(b.T, a.T);
                          }),
              out.end());
    return out;
}

/// Lower estimate of the supremum of |a| over reduced triples:
/// max over the triples reachable within the entry bound; 0 when none.
/// Monotone nondecreasing in radius.
inline Int estimate_S(const CubicForm& f, long radius, int threads = 1) {
    Int best = 0;
    for (const auto& ft : search_reduced_triples(f, radius, threads))
        best = std::max(best, abs(ft.triple.a));
    return best;
}

// --- line normalization ------------------------------------------------------

struct LineNormalization {
    RatMat T;
    CubicForm Fprime;
};

/// For F = a x0^3 + x0^2 (b x1 + c x2) + G with b != 0 and the line
/// {x2 = ... = xn = 0} inside the rank <= 2 locus, produce the det-1 rational
/// change x1 <- x1 - (c/b) x2 putting F in the shape
/// a x0^3 + b x0^2 x1 + c1 x1^3 + R(x2..xn).
inline LineNormalization normalize_line(const CubicForm& f) {
    int nv = f.nvars();
    if (nv < 3) throw DomainError("BadArity", "line normalization needs at least 3 variables");
    for (const auto& [m, c] : f.terms())
        if (m[0] == 0 && m[1] >= 1)
            throw DomainError("ShapeViolation", "form has a monomial x0*xi*xj with i,j >= 1");
    for (int j = 3; j < nv; ++j)
        if (f.coeff(0, 0, j) != 0)
            throw DomainError("ShapeViolation", "x0^2 part involves a variable beyond x2");
    Rat b = f.coeff(0, 0, 1), c = f.coeff(0, 0, 2);
    if (b == 0) throw DomainError("ZeroB", "the x0^2*x1 coefficient must be nonzero");
    // rank check on the line (s : t : 0 : ... : 0)
    std::vector<std::pair<long, long>> samples = {{1, 0}, {0, 1}, {1, 1}, {1, -1},
                                                  {2, 1},  {1, 2}, {3, 1}, {1, 3}};
    int needed = nv + 1;
    int used = 0;
    for (const auto& [s, t] : samples) {
        if (used == needed) break;
        std::vector<Int> p(nv, 0);
        p[0] = s;
        p[1] = t;
        if (rank(hessian(f, p)) > 2)
            throw DomainError("LineNotInV",
                              "Hessian rank exceeds 2 on the line {x2 = ... = xn = 0}");
        ++used;
    }
    RatMat t = RatMat::identity(nv);
    t(1, 2) = -c / b;
    CubicForm fp = act(t, f);
    // residual checks: the result must be a x0^3 + b x0^2 x1 + c1 x1^3 + R(x2..)
    for (const auto& [m, cc] : fp.terms()) {
        if (m[0] == 0 && m[1] == 0 && m[2] >= 2)
            throw DomainError("ResidualLinearPart", "x0^2 part not reduced to x1 alone");
        if (m[0] == 0 && m[1] >= 1)
            throw DomainError("ResidualQuadraticPart", "monomial x0*xi*xj survived");
        if (m[0] == 1 && !(m[1] == 1 && m[2] == 1))
            throw DomainError("ResidualQuadraticPart",
                              "x1 mixes with the remaining variables");
    }
    return {t, fp};
}

// --- point-contraction extraction -------------------------------------------

struct PointContraction {
    Int a;
    CubicForm F_X;
    IntMat T;  // columns (alpha | lattice basis)
};

/// Split F along a rank <= 1 point alpha: a = F(alpha), F_X the restriction to
/// the exact integer kernel of grad F(alpha), assembled basis with
/// 0 < |det T| <= |a|^n.  The radius parameter is accepted for interface
/// symmetry with the bounded searches; the kernel computation is exact.
inline PointContraction point_contraction_extract(const CubicForm& f, const PointProj& alpha,
                                                  long /*radius*/ = 0) {
    int nv = f.nvars();
    if (hessian_rank(f, alpha) > 1)
        throw DomainError("RankTooHigh", "alpha must have Hessian rank at most 1");
    const auto& av = alpha.coords();
    Int a = to_int(evaluate(f, av));
    if (a == 0)
        throw DomainError("ZeroSelfIntersection",
                          "F(alpha) = 0: determinant bound needs |a| > 0");
    IntMat grad(1, nv);
    for (int i = 0; i < nv; ++i) {
        std::vector<Int> e(nv, 0);
        e[i] = 1;
        grad(0, i) = to_int(3 * polarization(f, av, av, e));
    }
    IntMat lat = integer_kernel(grad);  // nv x (nv-1)
    // mixed-term verification: phi(alpha, v, w) = 0 on all basis pairs
    for (std::size_t i = 0; i < lat.cols(); ++i)
        for (std::size_t j = i; j < lat.cols(); ++j)
            if (polarization(f, av, lat.column(i), lat.column(j)) != 0)
                throw DomainError("MixedTermsPresent",
                                  "phi(alpha, v, w) != 0: not a point-contraction geometry");
    std::vector<std::vector<Int>> basis;
    for (std::size_t j = 0; j < lat.cols(); ++j) basis.push_back(lat.column(j));
    CubicForm fx = restrict_form(f, basis);
    IntMat t(nv, nv);
    for (int i = 0; i < nv; ++i) {
        t(i, 0) = av[i];
        for (std::size_t j = 0; j < lat.cols(); ++j) t(i, j + 1) = lat(i, j);
    }
    Int dt = abs(det(t));
    Int bound = 1;
    for (int i = 0; i < nv - 1; ++i) bound *= abs(a);
    if (dt == 0 || dt > bound)
        throw DomainError("DeterminantBoundViolated",
                          "|det T| = " + dt.get_str() + " outside (0, |a|^n]");
    return {a, fx, t};
}

}  // namespace cubic3
