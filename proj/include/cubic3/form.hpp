#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cubic3/matrix.hpp"
#include "cubic3/numeric.hpp"
#include "cubic3/point.hpp"

namespace cubic3 {

/// Monomial of degree 3: sorted variable-index triple (i <= j <= k),
/// representing x_i * x_j * x_k.
using Mono = std::array<int, 3>;

inline Mono make_mono(int i, int j, int k) {
    Mono m{i, j, k};
    std::sort(m.begin(), m.end());
    return m;
}

/// Homogeneous degree-3 polynomial with exact coefficients.  Coefficients are
/// stored as rationals; forms arising from integer data stay integral and
/// `integral()` reports whether every coefficient has denominator 1 (an action
/// by a rational matrix may legitimately produce a non-integral result).
///
/// The stored coefficient is the expanded one: 2*x^2*y stores 2 at (0,0,1).
class CubicForm {
public:
    explicit CubicForm(int nvars = 1) : nvars_(nvars) {
        if (nvars < 1) throw DomainError("BadArity", "a cubic form needs at least one variable");
    }

    int nvars() const { return nvars_; }
    const std::map<Mono, Rat>& terms() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    void add(int i, int j, int k, const Rat& coeff) {
        Mono m = make_mono(i, j, k);
        if (m[0] < 0 || m[2] >= nvars_)
            throw DomainError("BadIndex", "monomial index out of range");
        Rat& slot = c_[m];
        slot += coeff;
        if (slot == 0) c_.erase(m);
    }

    Rat coeff(int i, int j, int k) const {
        auto it = c_.find(make_mono(i, j, k));
        return it == c_.end() ? Rat(0) : it->second;
    }

    bool integral() const {
        for (const auto& [m, v] : c_)
            if (!is_integral(v)) return false;
        return true;
    }

    /// Integer coefficient; throws NonIntegralValue on a rational one.
    Int icoeff(int i, int j, int k) const { return to_int(coeff(i, j, k)); }

    bool operator==(const CubicForm& o) const { return nvars_ == o.nvars_ && c_ == o.c_; }
    bool operator!=(const CubicForm& o) const { return !(*this == o); }
    bool operator<(const CubicForm& o) const {
        if (nvars_ != o.nvars_) return nvars_ < o.nvars_;
        return std::lexicographical_compare(
            c_.begin(), c_.end(), o.c_.begin(), o.c_.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return a.second < b.second;
            });
    }

private:
    int nvars_;
    std::map<Mono, Rat> c_;
};

// --- evaluation ------------------------------------------------------------

template <typename T>
Rat evaluate(const CubicForm& f, const std::vector<T>& p) {
    if (p.size() != static_cast<std::size_t>(f.nvars()))
        throw DomainError("DimensionMismatch", "point length does not match variable count");
    Rat v = 0;
    for (const auto& [m, c] : f.terms()) v += c * p[m[0]] * p[m[1]] * p[m[2]];
    return v;
}

template <typename T>
std::vector<Rat> gradient(const CubicForm& f, const std::vector<T>& p) {
    if (p.size() != static_cast<std::size_t>(f.nvars()))
        throw DomainError("DimensionMismatch", "point length does not match variable count");
    std::vector<Rat> g(f.nvars(), Rat(0));
    for (const auto& [m, c] : f.terms())
        for (int pos = 0; pos < 3; ++pos)
            g[m[pos]] += c * p[m[(pos + 1) % 3]] * p[m[(pos + 2) % 3]];
    return g;
}

template <typename T>
RatMat hessian(const CubicForm& f, const std::vector<T>& p) {
    if (p.size() != static_cast<std::size_t>(f.nvars()))
        throw DomainError("DimensionMismatch", "point length does not match variable count");
    RatMat h(f.nvars(), f.nvars());
    for (const auto& [m, c] : f.terms())
        for (int p1 = 0; p1 < 3; ++p1)
            for (int p2 = 0; p2 < 3; ++p2) {
                if (p1 == p2) continue;
                int rest = 3 - p1 - p2;
                h(m[p1], m[p2]) += c * p[m[rest]];
            }
    return h;
}

/// Polarization: the symmetric trilinear form with phi(x,x,x) = F(x).
/// Satisfies grad_i F(p) = 3 phi(p,p,e_i) and H_ij(p) = 6 phi(p,e_i,e_j).
template <typename T>
Rat polarization(const CubicForm& f, const std::vector<T>& u, const std::vector<T>& v,
                 const std::vector<T>& w) {
    std::size_t n = f.nvars();
    if (u.size() != n || v.size() != n || w.size() != n)
        throw DomainError("DimensionMismatch", "polarization argument length mismatch");
    Rat total = 0;
    for (const auto& [m, c] : f.terms()) {
        Mono perm = m;
        Rat sum = 0;
        int count = 0;
        do {
            sum += Rat(u[perm[0]]) * v[perm[1]] * w[perm[2]];
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        total += c * sum / count;
    }
    return total;
}

struct EvalResult {
    Int value;
    std::vector<Int> gradient;
    IntMat hessian;
};

/// Value, gradient and Hessian at an integer point of an integral form.
inline EvalResult evaluate_all(const CubicForm& f, const std::vector<Int>& p) {
    EvalResult r;
    r.value = to_int(evaluate(f, p));
    for (const Rat& g : gradient(f, p)) r.gradient.push_back(to_int(g));
    r.hessian = to_integral(hessian(f, p));
    return r;
}

inline std::size_t hessian_rank(const CubicForm& f, const PointProj& p) {
    return rank(hessian(f, p.coords()));
}

// --- substitution / action / restriction -----------------------------------

/// Substitute x_i <- sum_j M(i,j) y_j; M is nvars x m, result has m variables.
inline CubicForm substitute(const CubicForm& f, const RatMat& m) {
    if (m.rows() != static_cast<std::size_t>(f.nvars()))
        throw DomainError("DimensionMismatch", "substitution matrix row count mismatch");
    if (m.cols() < 1) throw DomainError("BadArity", "substitution into zero variables");
    CubicForm g(static_cast<int>(m.cols()));
    std::size_t nc = m.cols();
    for (const auto& [mono, c] : f.terms())
        for (std::size_t a = 0; a < nc; ++a) {
            Rat ca = c * m(mono[0], a);
            if (ca == 0) continue;
            for (std::size_t b = 0; b < nc; ++b) {
                Rat cab = ca * m(mono[1], b);
                if (cab == 0) continue;
                for (std::size_t d = 0; d < nc; ++d) {
                    Rat cabd = cab * m(mono[2], d);
                    if (cabd != 0)
                        g.add(static_cast<int>(a), static_cast<int>(b), static_cast<int>(d), cabd);
                }
            }
        }
    return g;
}

/// Basis-change action (T.F)(x) = F(T x).  Composition: T1.(T2.F) = (T2 T1).F.
inline CubicForm act(const RatMat& t, const CubicForm& f) {
    if (!t.square() || t.rows() != static_cast<std::size_t>(f.nvars()))
        throw DomainError("DimensionMismatch", "action matrix must be square of matching size");
    return substitute(f, t);
}

inline CubicForm act(const IntMat& t, const CubicForm& f) { return act(to_rational(t), f); }

/// Restriction of F to the span of `basis`: substitute x = sum_i y_i basis_i.
inline CubicForm restrict_form(const CubicForm& f, const std::vector<std::vector<Int>>& basis) {
    if (basis.empty()) throw DomainError("BadArity", "restriction to an empty basis");
    IntMat m(f.nvars(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (basis[j].size() != static_cast<std::size_t>(f.nvars()))
            throw DomainError("DimensionMismatch", "basis vector length mismatch");
        for (std::size_t i = 0; i < basis[j].size(); ++i) m(i, j) = basis[j][i];
    }
    if (rank(m) != basis.size())
        throw DomainError("DependentBasis", "restriction basis is linearly dependent");
    return substitute(f, to_rational(m));
}

inline Int content(const CubicForm& f) {
    if (!f.integral())
        throw DomainError("NonIntegralForm", "content requires integer coefficients");
    Int g = 0;
    for (const auto& [m, c] : f.terms()) g = gcd(g, c.get_num());
    return g;
}

/// F = sum over I of binom(3,I) phi(h^I) x^I from symmetric triple
/// intersection numbers.  Keys may come in any index order; conflicting values
/// for the same unordered triple are rejected.
inline CubicForm build_from_intersections(int n, const std::map<std::array<int, 3>, Int>& phi) {
    std::map<Mono, Int> sym;
    for (const auto& [idx, v] : phi) {
        Mono m = make_mono(idx[0], idx[1], idx[2]);
        if (m[0] < 0 || m[2] >= n)
            throw DomainError("BadIndex", "intersection index out of range");
        auto [it, inserted] = sym.emplace(m, v);
        if (!inserted && it->second != v)
            throw DomainError("AsymmetricInput", "conflicting values for a symmetric triple");
    }
    CubicForm f(n);
    for (const auto& [m, v] : sym) {
        int mult = (m[0] == m[2]) ? 1 : (m[0] == m[1] || m[1] == m[2]) ? 3 : 6;
        if (v != 0) f.add(m[0], m[1], m[2], Rat(mult * v));
    }
    return f;
}

// --- nondegeneracy ---------------------------------------------------------

struct NondegeneracyResult {
    enum Kind { Nondegenerate, Degenerate, ProbablyDegenerate } kind;
    std::optional<std::vector<Int>> witness;  // point with det H_F != 0
    int samples = 0;
    std::string note;
};

namespace detail {

/// det H_F as a polynomial, expanded by the Leibniz formula over the linear
/// forms H_ij(x).  Feasible for small n only.
inline bool symbolic_det_hessian_is_zero(const CubicForm& f) {
    int n = f.nvars();
    // linear form of entry (i,j): lin[i][j][t] = coefficient of x_t
    std::vector<std::vector<std::vector<Rat>>> lin(
        n, std::vector<std::vector<Rat>>(n, std::vector<Rat>(n, Rat(0))));
    for (const auto& [m, c] : f.terms())
        for (int p1 = 0; p1 < 3; ++p1)
            for (int p2 = 0; p2 < 3; ++p2) {
                if (p1 == p2) continue;
                lin[m[p1]][m[p2]][m[3 - p1 - p2]] += c;
            }
    std::map<std::vector<int>, Rat> det;  // key: sorted variable multiset
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
        int sign = 1;
        {
            std::vector<int> q = perm;
            for (int i = 0; i < n; ++i)
                while (q[i] != i) {
                    std::swap(q[i], q[q[i]]);
                    sign = -sign;
                }
        }
        std::map<std::vector<int>, Rat> prod;
        prod[{}] = Rat(sign);
        for (int row = 0; row < n; ++row) {
            std::map<std::vector<int>, Rat> next;
            for (const auto& [key, v] : prod)
                for (int t = 0; t < n; ++t) {
                    const Rat& l = lin[row][perm[row]][t];
                    if (l == 0) continue;
                    std::vector<int> nk = key;
                    nk.insert(std::upper_bound(nk.begin(), nk.end(), t), t);
                    next[nk] += v * l;
                }
            prod = std::move(next);
            if (prod.empty()) break;
        }
        for (const auto& [key, v] : prod) {
            Rat& slot = det[key];
            slot += v;
            if (slot == 0) det.erase(key);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det.empty();
}

}  // namespace detail

/// Decide whether det H_F is not identically zero.  Exact (symbolic) for
/// nvars <= 6; otherwise sampled with the given budget, where only a
/// Nondegenerate verdict is a certificate.
inline NondegeneracyResult is_nondegenerate(const CubicForm& f, int sample_budget = 64) {
    NondegeneracyResult r;
    int n = f.nvars();
    if (n <= 6) {
        if (detail::symbolic_det_hessian_is_zero(f)) {
            r.kind = NondegeneracyResult::Degenerate;
            r.note = "det H_F expands to the zero polynomial";
            return r;
        }
        // det H_F has degree <= n in each variable, so it cannot vanish on
        // the full grid {-3..3}^n once n <= 6; scan it for a witness.
        std::vector<Int> p(n, Int(-3));
        while (true) {
            ++r.samples;
            if (det(hessian(f, p)) != 0) {
                r.kind = NondegeneracyResult::Nondegenerate;
                r.witness = p;
                return r;
            }
            int i = 0;
            while (i < n && p[i] == 3) p[i++] = -3;
            if (i == n) break;
            p[i] += 1;
        }
        // unreachable for a nonzero determinant polynomial
        r.kind = NondegeneracyResult::ProbablyDegenerate;
        r.note = "symbolic determinant nonzero but no grid witness found";
        return r;
    }
    std::mt19937_64 rng(0x5eedc3b1c);
    std::uniform_int_distribution<long> dist(-1000000, 1000000);
    for (int s = 0; s < sample_budget; ++s) {
        std::vector<Int> p(n);
        for (int i = 0; i < n; ++i) p[i] = Int(dist(rng));
        ++r.samples;
        if (det(hessian(f, p)) != 0) {
            r.kind = NondegeneracyResult::Nondegenerate;
            r.witness = p;
            return r;
        }
    }
    r.kind = NondegeneracyResult::ProbablyDegenerate;
    r.note = "all sampled Hessian determinants vanished";
    return r;
}

}  // namespace cubic3
