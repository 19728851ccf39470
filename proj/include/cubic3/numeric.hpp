#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubic3 {

using Int = mpz_class;
using Rat = mpq_class;

/// Domain error (bad precondition, malformed input, ...).  CLI maps these to
/// exit code 1 and a machine-readable code string.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int abs(const Int& a) { return a < 0 ? Int(-a) : a; }
inline Rat abs(const Rat& a) { return a < 0 ? Rat(-a) : a; }

/// Exact square root of a nonnegative integer, if it is a perfect square.
inline std::optional<Int> exact_sqrt(const Int& a) {
    if (a < 0) return std::nullopt;
    if (mpz_perfect_square_p(a.get_mpz_t()) == 0) return std::nullopt;
    Int r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline bool divides(const Int& d, const Int& a) {
    if (d == 0) return a == 0;
    return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

/// Exact quotient; caller must know d | a.
inline Int exact_div(const Int& a, const Int& d) {
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    return q;
}

inline bool is_integral(const Rat& q) { return q.get_den() == 1; }

inline Int to_int(const Rat& q) {
    if (!is_integral(q))
        throw DomainError("NonIntegralValue", "expected an integer, got " + q.get_str());
    return q.get_num();
}

inline Rat parse_rational(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0)
        throw DomainError("BadRational", "cannot parse rational '" + s + "'");
    q.canonicalize();
    return q;
}

/// All positive divisors of |n|, n != 0.
inline std::vector<Int> positive_divisors(const Int& n) {
    Int a = abs(n);
    if (a == 0) throw DomainError("ZeroDivisors", "divisors of zero requested");
    std::vector<Int> small, large;
    for (Int d = 1; d * d <= a; ++d) {
        if (divides(d, a)) {
            small.push_back(d);
            Int q = a / d;
            if (q != d) large.push_back(q);
        }
    }
    for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
    return small;
}

}  // namespace cubic3
