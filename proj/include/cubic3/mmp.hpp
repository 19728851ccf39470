#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "cubic3/form.hpp"
#include "cubic3/numeric.hpp"
#include "cubic3/parse.hpp"
#include "cubic3/reduction.hpp"

namespace cubic3 {

/// Multiset of singular-point indices r >= 2; Xi is their sum and e the exact
/// rational correction term of the Riemann-Roch formula.
class Basket {
public:
    Basket() = default;
    explicit Basket(std::vector<long> indices) : idx_(std::move(indices)) {
        for (long r : idx_)
            if (r < 2) throw DomainError("BadBasket", "basket indices must be >= 2");
        std::sort(idx_.begin(), idx_.end());
    }

    const std::vector<long>& indices() const { return idx_; }

    Int Xi() const {
        Int s = 0;
        for (long r : idx_) s += r;
        return s;
    }

    Rat e() const {
        Rat s = 0;
        for (long r : idx_) s += Rat(r) - Rat(1, r);
        return s;
    }

    /// lcm of the indices (1 for the empty basket)
    Int index_lcm() const {
        Int l = 1;
        for (long r : idx_) l = lcm(l, Int(r));
        return l;
    }

    bool operator==(const Basket& o) const { return idx_ == o.idx_; }

private:
    std::vector<long> idx_;
};

struct BasketStats {
    Int Xi;
    Rat e;
    bool index_check;  // every r divides 4 * Xi
};

inline BasketStats basket_stats(const Basket& b) {
    BasketStats s{b.Xi(), b.e(), true};
    for (long r : b.indices())
        if (!divides(Int(r), 4 * s.Xi)) s.index_check = false;
    return s;
}

/// chi(O) = (-K.c2 + e) / 24, exactly.
inline Rat chi_riemann_roch(const Rat& K_dot_c2, const Basket& basket) {
    return (-K_dot_c2 + basket.e()) / 24;
}

struct BoundsReport {
    Int volume_bound;  // 6 b2 + 36 b3
    Int point_bound;   // 2^10 b2^2
    Int curve_bound;   // 2 S + 6 (b3 + 1)
    bool bmy_ok;       // K3 <= 3 K.c2
    Int xi_cap;        // 2 b2
};

inline BoundsReport topological_bounds(long b2, long b3, const Int& S, const Rat& K3,
                                       const Rat& K_dot_c2) {
    if (b2 < 0 || b3 < 0 || S < 0)
        throw DomainError("BadBound", "b2, b3 and S must be nonnegative");
    BoundsReport r;
    r.volume_bound = 6 * Int(b2) + 36 * Int(b3);
    r.point_bound = 1024 * Int(b2) * Int(b2);
    r.curve_bound = 2 * S + 6 * (Int(b3) + 1);
    r.bmy_ok = K3 <= 3 * K_dot_c2;
    r.xi_cap = 2 * Int(b2);
    return r;
}

struct ContractionRecord {
    std::string kind;
    Rat delta_K3;
    std::vector<std::string> checks;    // satisfied bound checks
    std::vector<std::string> warnings;  // soft violations
};

/// Topology ledger of a terminal threefold along a chain of blow-ups and
/// divisorial contractions: Betti numbers, Ib3, K^3, the cubic form of the
/// intersection ring, and the basket of singularity indices.
struct ThreefoldState {
    long b2 = 1;
    long b3 = 0;
    long Ib3 = 0;
    Rat K3;
    CubicForm F{1};
    Basket basket;
    std::vector<ContractionRecord> history;

    void validate() const {
        if (b2 < 1 || b3 < 0 || Ib3 < 0)
            throw DomainError("BadState", "Betti data out of range");
        if (F.nvars() != static_cast<int>(b2))
            throw DomainError("BadState", "cubic form arity does not match b2");
    }
};

/// Blow up a smooth curve of genus g with exceptional divisor E:
/// b2 + 1, b3 + 2g, Ib3 + 2g, K3 + (-2 E^3 + 6 - 6g), and the cubic gains
/// x0 with F' = E3 x0^3 + 3 x0^2 sum_i (-betaC_i) x_{i+1} + F.
inline ThreefoldState blowup_curve(const ThreefoldState& s, long g, const Int& E3,
                                   const std::vector<Int>& beta_dot_C) {
    s.validate();
    if (g < 0) throw DomainError("BadGenus", "genus must be nonnegative");
    if (beta_dot_C.size() != static_cast<std::size_t>(s.b2))
        throw DomainError("DimensionMismatch", "beta.C vector length must equal b2");
    ThreefoldState n = s;
    n.b2 += 1;
    n.b3 += 2 * g;
    n.Ib3 += 2 * g;
    Rat delta = Rat(-2 * E3 + 6 - 6 * Int(g));
    n.K3 = s.K3 + delta;
    CubicForm f(static_cast<int>(n.b2));
    if (E3 != 0) f.add(0, 0, 0, Rat(E3));
    for (long i = 0; i < s.b2; ++i)
        if (beta_dot_C[i] != 0) f.add(0, 0, static_cast<int>(i) + 1, Rat(-3 * beta_dot_C[i]));
    for (const auto& [m, c] : s.F.terms()) f.add(m[0] + 1, m[1] + 1, m[2] + 1, c);
    n.F = f;
    n.history.push_back({"blowup-curve", delta, {}, {}});
    return n;
}

/// Contract a divisor to a point with discrepancy a > 0: K3 - a^3 E^3, b2 - 1.
/// Requires the cubic to be in the split shape E3 x0^3 + F_X(x1..xn) already
/// (rotate the basis first); checks 0 < a E^3 <= 4 (hard) and E^3 >= 1/R with
/// R the basket index lcm (warning), and the K^3 drop against 2^10 b2^2.
inline ThreefoldState contract_to_point(const ThreefoldState& s, const Rat& a, const Rat& E3) {
    s.validate();
    if (a <= 0) throw DomainError("BadDiscrepancy", "discrepancy a must be positive");
    if (s.b2 < 2) throw DomainError("BadState", "cannot contract below b2 = 1");
    Rat aE3 = a * E3;
    if (!(aE3 > 0 && aE3 <= 4))
        throw DomainError("BoundViolated", "a E^3 = " + aE3.get_str() + " outside (0, 4]");
    auto tr = detect_reduced(s.F);
    if (!tr)
        throw DomainError("ShapeViolation",
                          "cubic form is not in reduced shape in the current basis");
    for (const Int& b : tr->B)
        if (b != 0)
            throw DomainError("ShapeViolation",
                              "cubic form has x0^2-mixed terms; not a point contraction");
    ContractionRecord rec{"contract-point", -(a * a * a * E3), {}, {}};
    rec.checks.push_back("0 < a E^3 <= 4");
    Int R = s.basket.index_lcm();
    if (E3 < Rat(1) / R)
        rec.warnings.push_back("E^3 < 1/R for the stored basket");
    else
        rec.checks.push_back("E^3 >= 1/R");
    Rat drop = a * a * a * E3;
    if (drop > 1024 * Int(s.b2) * Int(s.b2))
        throw DomainError("BoundViolated", "K^3 drop exceeds 2^10 b2^2");
    rec.checks.push_back("K^3 drop <= 2^10 b2^2");
    ThreefoldState n = s;
    n.b2 -= 1;
    n.K3 = s.K3 - drop;
    n.F = tr->G;
    n.history.push_back(rec);
    return n;
}

/// Inverse of blowup_curve: peel off x0 from the reduced cubic (its B part
/// must be divisible by 3, as every genuine blow-up form is), restore the
/// Betti numbers and K^3, and compare the K^3 jump against the curve bound
/// 2 S + 6 (b3(Y) + 1) using the bounded estimate of S (warning on failure,
/// since the estimate is only a lower bound).
inline ThreefoldState contract_to_curve(const ThreefoldState& s, long g,
                                        long s_search_radius = 3) {
    s.validate();
    if (s.b2 < 2) throw DomainError("BadState", "cannot contract below b2 = 1");
    if (g < 0) throw DomainError("BadGenus", "genus must be nonnegative");
    if (s.b3 - 2 * g < 0) throw DomainError("BadState", "b3 - 2g would be negative");
    auto tr = detect_reduced(s.F);
    if (!tr)
        throw DomainError("ShapeViolation",
                          "cubic form is not in reduced shape in the current basis");
    for (const Int& b : tr->B)
        if (!divides(Int(3), b))
            throw DomainError("ShapeViolation",
                              "x0^2 coefficients not divisible by 3; not a curve blow-up form");
    Rat delta = -Rat(-2 * tr->a + 6 - 6 * Int(g));
    ContractionRecord rec{"contract-curve", delta, {}, {}};
    Int S = estimate_S(s.F, s_search_radius);
    Rat bound = Rat(2 * S + 6 * (Int(s.b3) + 1));
    if (abs(delta) <= bound)
        rec.checks.push_back("|delta K^3| <= 2 S + 6 (b3 + 1)");
    else
        rec.warnings.push_back("|delta K^3| exceeds 2 S_est + 6 (b3 + 1); S_est is a lower bound");
    ThreefoldState n = s;
    n.b2 -= 1;
    n.b3 -= 2 * g;
    n.Ib3 -= 2 * g;
    n.K3 = s.K3 + delta;
    n.F = tr->G;
    n.history.push_back(rec);
    return n;
}

// --- scenario replay ---------------------------------------------------------

/// Line-oriented scenario format:
///   init b2=<int> b3=<int> Ib3=<int> K3=<rat> F=<form> [basket=<csv>]
///   blowup-curve g=<int> E3=<int> betaC=<csv>
///   contract-point a=<rat> E3=<rat>
///   contract-curve g=<int>
///   assert K3=<rat>
/// Blank lines and lines starting with # are skipped.
struct ScenarioResult {
    ThreefoldState state;
    std::vector<std::string> log;  // one line per executed command / check
};

namespace detail {

inline std::map<std::string, std::string> parse_kv(std::istringstream& in) {
    std::map<std::string, std::string> kv;
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw DomainError("ScenarioSyntax", "expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

inline std::string need(const std::map<std::string, std::string>& kv, const std::string& k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw DomainError("ScenarioSyntax", "missing key '" + k + "'");
    return it->second;
}

inline std::vector<Int> parse_csv_ints(const std::string& s) {
    std::vector<Int> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = s.find(',', start);
        out.push_back(Int(s.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

inline ScenarioResult run_scenario(const std::string& text) {
    ScenarioResult res;
    bool initialized = false;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        std::istringstream in(line);
        std::string cmd;
        if (!(in >> cmd) || cmd[0] == '#') continue;
        try {
            if (cmd == "init") {
                auto kv = detail::parse_kv(in);
                ThreefoldState s;
                s.b2 = std::stol(detail::need(kv, "b2"));
                s.b3 = std::stol(detail::need(kv, "b3"));
                s.Ib3 = std::stol(detail::need(kv, "Ib3"));
                s.K3 = parse_rational(detail::need(kv, "K3"));
                s.F = parse_form(detail::need(kv, "F"));
                if (kv.count("basket")) {
                    std::vector<long> idx;
                    for (const Int& r : detail::parse_csv_ints(kv.at("basket")))
                        idx.push_back(r.get_si());
                    s.basket = Basket(idx);
                }
                s.validate();
                res.state = s;
                initialized = true;
                res.log.push_back("init ok: b2=" + std::to_string(s.b2));
                continue;
            }
            if (!initialized)
                throw DomainError("ScenarioSyntax", "first command must be init");
            if (cmd == "blowup-curve") {
                auto kv = detail::parse_kv(in);
                res.state = blowup_curve(res.state, std::stol(detail::need(kv, "g")),
                                         Int(detail::need(kv, "E3")),
                                         detail::parse_csv_ints(detail::need(kv, "betaC")));
            } else if (cmd == "contract-point") {
                auto kv = detail::parse_kv(in);
                res.state = contract_to_point(res.state, parse_rational(detail::need(kv, "a")),
                                              parse_rational(detail::need(kv, "E3")));
            } else if (cmd == "contract-curve") {
                auto kv = detail::parse_kv(in);
                res.state = contract_to_curve(res.state, std::stol(detail::need(kv, "g")));
            } else if (cmd == "assert") {
                auto kv = detail::parse_kv(in);
                Rat want = parse_rational(detail::need(kv, "K3"));
                if (res.state.K3 != want)
                    throw DomainError("AssertionFailed", "K3 = " + res.state.K3.get_str() +
                                                             ", expected " + want.get_str());
                res.log.push_back("assert K3=" + want.get_str() + " ok");
                continue;
            } else {
                throw DomainError("ScenarioSyntax", "unknown command '" + cmd + "'");
            }
            const auto& rec = res.state.history.back();
            std::string entry = cmd + ": delta_K3=" + rec.delta_K3.get_str();
            for (const auto& c : rec.checks) entry += "; check ok: " + c;
            for (const auto& w : rec.warnings) entry += "; WARNING: " + w;
            res.log.push_back(entry);
        } catch (const DomainError& e) {
            throw DomainError(e.code(),
                              "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!initialized) throw DomainError("ScenarioSyntax", "scenario has no init line");
    return res;
}

}  // namespace cubic3
