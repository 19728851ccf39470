#pragma once

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "cubic3/form.hpp"
#include "cubic3/numeric.hpp"

namespace cubic3 {

namespace detail {

struct FormParser {
    const std::string& s;
    std::size_t pos = 0;
    bool alias_seen = false;
    bool indexed_seen = false;

    explicit FormParser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw DomainError("ParseError", msg + " at position " + std::to_string(pos));
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos == s.size();
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    Int parse_uint() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        return Int(s.substr(start, pos - start));
    }

    /// variable -> index; x0..x9 or aliases x,y,z,w (mapping to x0..x3)
    int parse_var() {
        skip_ws();
        char c = pos < s.size() ? s[pos] : '\0';
        if (c == 'x' && pos + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[pos + 1]))) {
            pos += 2;
            if (alias_seen)
                throw DomainError("MixedVariableStyles", "cannot mix x,y,z,w with x0..x9");
            indexed_seen = true;
            return s[pos - 1] - '0';
        }
        int idx;
        switch (c) {
            case 'x': idx = 0; break;
            case 'y': idx = 1; break;
            case 'z': idx = 2; break;
            case 'w': idx = 3; break;
            default: fail("expected a variable");
        }
        ++pos;
        if (indexed_seen)
            throw DomainError("MixedVariableStyles", "cannot mix x,y,z,w with x0..x9");
        alias_seen = true;
        return idx;
    }

    struct Term {
        Int coeff;
        std::vector<std::pair<int, int>> powers;  // (variable, exponent)
    };

    Term parse_term() {
        Term t;
        t.coeff = 1;
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            t.coeff = parse_uint();
            have_coeff = true;
        }
        bool expect_factor = !have_coeff;
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos;
                expect_factor = true;
                continue;
            }
            bool at_var = (c == 'x' || c == 'y' || c == 'z' || c == 'w');
            if (!at_var) {
                if (expect_factor && !(have_coeff && t.powers.empty()))
                    fail("expected a variable factor");
                break;
            }
            // bare juxtaposition like "3x" is tolerated on input
            int var = parse_var();
            int exp = 1;
            if (peek() == '^') {
                ++pos;
                Int e = parse_uint();
                if (e < 1 || e > 3) fail("exponent must be 1, 2 or 3");
                exp = static_cast<int>(e.get_si());
            }
            t.powers.emplace_back(var, exp);
            expect_factor = false;
        }
        return t;
    }
};

}  // namespace detail

/// Parse the polynomial grammar into a canonical sparse cubic form.
inline CubicForm parse_form(const std::string& text) {
    detail::FormParser p(text);
    if (p.eof()) p.fail("empty input");
    std::vector<std::pair<Int, detail::FormParser::Term>> terms;  // (sign, term)
    Int sign = 1;
    if (p.peek() == '+' || p.peek() == '-') {
        sign = (p.peek() == '-') ? -1 : 1;
        ++p.pos;
    }
    while (true) {
        auto t = p.parse_term();
        terms.emplace_back(sign, t);
        if (p.eof()) break;
        char c = p.peek();
        if (c != '+' && c != '-') p.fail("expected + or -");
        sign = (c == '-') ? -1 : 1;
        ++p.pos;
    }

    // the zero form is written as the single literal "0"
    if (terms.size() == 1 && terms[0].second.powers.empty() && terms[0].second.coeff == 0)
        return CubicForm(1);

    int maxvar = -1;
    for (const auto& [sg, t] : terms)
        for (const auto& [v, e] : t.powers) maxvar = std::max(maxvar, v);
    if (maxvar < 0)
        throw DomainError("NonHomogeneousDegree3", "constant term in a cubic form");
    CubicForm f(maxvar + 1);
    for (const auto& [sg, t] : terms) {
        std::vector<int> idx;
        for (const auto& [v, e] : t.powers)
            for (int r = 0; r < e; ++r) idx.push_back(v);
        if (idx.size() != 3)
            throw DomainError("NonHomogeneousDegree3",
                              "term of degree " + std::to_string(idx.size()) +
                                  " in a cubic form");
        if (t.coeff != 0) f.add(idx[0], idx[1], idx[2], Rat(sg * t.coeff));
    }
    return f;
}

/// Canonical text: graded-lex monomial order, explicit signs, aliases x,y,z,w
/// when the form has at most 4 variables.
inline std::string format_form(const CubicForm& f) {
    if (f.is_zero()) return "0";
    bool aliases = f.nvars() <= 4;
    auto var_name = [&](int i) -> std::string {
        if (aliases) return std::string(1, "xyzw"[i]);
        return "x" + std::to_string(i);
    };
    std::string out;
    for (const auto& [m, c] : f.terms()) {
        Rat a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string monostr;
        int i = 0;
        while (i < 3) {
            int j = i;
            while (j < 3 && m[j] == m[i]) ++j;
            if (!monostr.empty()) monostr += "*";
            monostr += var_name(m[i]);
            if (j - i > 1) monostr += "^" + std::to_string(j - i);
            i = j;
        }
        if (a != 1)
            out += a.get_str() + "*" + monostr;
        else
            out += monostr;
    }
    return out;
}

}  // namespace cubic3
