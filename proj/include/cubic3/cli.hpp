#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubic3/families.hpp"
#include "cubic3/form.hpp"
#include "cubic3/invariants.hpp"
#include "cubic3/mmp.hpp"
#include "cubic3/parse.hpp"
#include "cubic3/point.hpp"
#include "cubic3/reduction.hpp"

namespace cubic3::cli {

using json = nlohmann::ordered_json;

// Arbitrary-precision values are rendered as decimal strings so the JSON
// stays byte-stable and never loses precision to doubles.
inline std::string js(const Int& v) { return v.get_str(); }
inline std::string js(const Rat& v) { return v.get_str(); }

inline json jmat(const IntMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(js(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline json jmat(const RatMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(js(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<Int> parse_int_csv(const std::string& s) {
    std::vector<Int> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string tok = s.substr(start, comma - start);
        if (tok.empty()) throw DomainError("BadVector", "empty entry in '" + s + "'");
        out.push_back(Int(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw DomainError("BadVector", "empty vector");
    return out;
}

inline RatMat parse_matrix_csv(const std::string& s, std::size_t dim) {
    std::vector<Rat> entries;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        entries.push_back(parse_rational(s.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (entries.size() != dim * dim)
        throw DomainError("MatrixShape", "expected " + std::to_string(dim * dim) +
                                             " matrix entries, got " +
                                             std::to_string(entries.size()));
    RatMat m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = entries[i * dim + j];
    return m;
}

struct Ctx {
    bool json_out = false;
    int threads = 1;
    std::string op;
    json result;
    std::vector<std::string> warnings;
    std::string input_echo;
    std::string plain;  // plain-text rendering
};

inline void emit(const Ctx& c, std::ostream& out) {
    if (c.json_out) {
        json doc;
        doc["op"] = c.op;
        doc["input"] = c.input_echo;
        doc["result"] = c.result;
        doc["warnings"] = c.warnings;
        out << doc.dump(2) << "\n";
    } else {
        out << c.plain;
        for (const auto& w : c.warnings) out << "warning: " << w << "\n";
    }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact arithmetic for integral cubic forms and threefold ledgers"};
    app.require_subcommand(1);
    Ctx ctx;
    app.add_flag("--json", ctx.json_out, "emit JSON instead of plain text");
    app.add_option("--threads", ctx.threads, "worker threads for bounded searches");

    std::string form_text, form2_text, point_csv, matrix_csv, file_arg, fixture_name;
    long radius = 2, box = 5, bound = 20;
    long b2 = 1, b3 = 0, genus = 0;
    std::size_t max_rank = 1;
    std::string a_str = "0", b_str = "0", c_str = "1", s_str = "0", k3_str = "0", kc2_str = "0";
    int count = 1;
    bool use_oracle = false;

    auto* inv = app.add_subcommand("invariants", "discriminants and S,T of a form");
    inv->add_option("form", form_text)->required();

    auto* rk = app.add_subcommand("rank", "Hessian rank at a projective point");
    rk->add_option("form", form_text)->required();
    rk->add_option("--point", point_csv)->required();

    auto* actc = app.add_subcommand("act", "basis-change action T.F(x) = F(Tx)");
    actc->add_option("form", form_text)->required();
    actc->add_option("--matrix", matrix_csv, "row-major entries, rationals allowed")->required();

    auto* red = app.add_subcommand("reduce", "read off the reduced triple, or search for them");
    red->add_option("form", form_text)->required();
    long search_radius = 0;
    red->add_option("--search", search_radius, "also search SL(n,Z) up to this entry bound");

    auto* eq = app.add_subcommand("equiv", "equivalence of two reduced forms");
    eq->add_option("form1", form_text)->required();
    eq->add_option("form2", form2_text)->required();
    eq->add_option("--radius", radius);

    auto* enb = app.add_subcommand("enumerate-binary", "reduced triples of a x^3 + b x^2 y + c y^3");
    enb->add_option("--a", a_str)->required();
    enb->add_option("--b", b_str)->required();
    enb->add_option("--c", c_str)->required();
    enb->add_option("--bound", bound);
    enb->add_flag("--oracle", use_oracle, "use the brute-force sweep instead");

    auto* lr = app.add_subcommand("lowrank", "points with Hessian rank <= max-rank");
    lr->add_option("form", form_text)->required();
    lr->add_option("--max-rank", max_rank);
    lr->add_option("--box", box);

    auto* nl = app.add_subcommand("normalize-line", "line normalization of a reduced ternary-plus form");
    nl->add_option("form", form_text)->required();

    auto* es = app.add_subcommand("estimate-s", "lower estimate of sup |a| over reduced triples");
    es->add_option("form", form_text)->required();
    es->add_option("--radius", radius);

    auto* ep = app.add_subcommand("extract-point", "point-contraction split along a rank <= 1 point");
    ep->add_option("form", form_text)->required();
    ep->add_option("--point", point_csv)->required();

    auto* pl = app.add_subcommand("pell", "Pell-solution family of reduced presentations");
    pl->add_option("--a", a_str);
    pl->add_option("--b", b_str);
    pl->add_option("--count", count);

    auto* fx = app.add_subcommand("fixtures", "built-in worked examples");
    fx->add_option("name", fixture_name)->required();

    auto* sim = app.add_subcommand("simulate", "replay a threefold scenario file");
    sim->add_option("file", file_arg)->required();

    auto* bd = app.add_subcommand("bounds", "topological bound report");
    bd->add_option("--b2", b2)->required();
    bd->add_option("--b3", b3)->required();
    bd->add_option("--S", s_str);
    bd->add_option("--K3", k3_str);
    bd->add_option("--Kc2", kc2_str);

    // global flags (--json, --threads) may appear after the subcommand name
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (const char* envt = std::getenv("CUBIC3_THREADS")) ctx.threads = std::atoi(envt);
    if (ctx.threads < 1) ctx.threads = 1;

    try {
        std::ostringstream plain;
        if (inv->parsed()) {
            ctx.op = "invariants";
            CubicForm f = parse_form(form_text);
            ctx.input_echo = format_form(f);
            if (f.nvars() == 2) {
                Int d = binary_discriminant(f);
                ctx.result["delta_binary"] = js(d);
                plain << "delta = " << d << "\n";
            } else if (f.nvars() == 3) {
                auto st = aronhold_ST(f);
                ctx.result["S"] = js(st.S);
                ctx.result["T"] = js(st.T);
                ctx.result["Delta"] = js(st.Delta);
                plain << "S = " << st.S << "\nT = " << st.T << "\nDelta = " << st.Delta << "\n";
            } else {
                throw DomainError("WrongArity",
                                  "invariants are implemented for 2 and 3 variables");
            }
            ctx.result["content"] = js(content(f));
        } else if (rk->parsed()) {
            ctx.op = "rank";
            CubicForm f = parse_form(form_text);
            ctx.input_echo = format_form(f);
            PointProj p(parse_int_csv(point_csv));
            auto r = hessian_rank(f, p);
            ctx.result["point"] = p.str();
            ctx.result["rank"] = r;
            plain << r << "\n";
        } else if (actc->parsed()) {
            ctx.op = "act";
            CubicForm f = parse_form(form_text);
            ctx.input_echo = format_form(f);
            RatMat t = parse_matrix_csv(matrix_csv, f.nvars());
            CubicForm g = act(t, f);
            ctx.result["form"] = format_form(g);
            ctx.result["integral"] = g.integral();
            if (!g.integral()) ctx.warnings.push_back("result has rational coefficients");
            plain << format_form(g) << "\n";
        } else if (red->parsed()) {
            ctx.op = "reduce";
            CubicForm f = parse_form(form_text);
            ctx.input_echo = format_form(f);
            auto tr = detect_reduced(f);
            if (tr) {
                json jt;
                jt["a"] = js(tr->a);
                json jb = json::array();
                for (const Int& b : tr->B) jb.push_back(js(b));
                jt["B"] = jb;
                jt["G"] = format_form(tr->G);
                ctx.result["triple"] = jt;
                plain << "a = " << tr->a << "\nB = (";
                for (std::size_t i = 0; i < tr->B.size(); ++i)
                    plain << (i ? "," : "") << tr->B[i];
                plain << ")\nG = " << format_form(tr->G) << "\n";
            } else {
                ctx.result["triple"] = nullptr;
                plain << "not in reduced shape\n";
            }
            if (search_radius > 0) {
                auto found = search_reduced_triples(f, search_radius, ctx.threads);
                std::set<Int> avals;
                for (const auto& ft : found) avals.insert(ft.triple.a);
                json ja = json::array();
                for (const Int& a : avals) ja.push_back(js(a));
                ctx.result["search"] = {{"radius", search_radius},
                                        {"found", found.size()},
                                        {"a_values", ja}};
                plain << "search radius " << search_radius << ": " << found.size()
                      << " matrices, " << avals.size() << " distinct a-values\n";
            }
        } else if (eq->parsed()) {
            ctx.op = "equiv";
            CubicForm f1 = parse_form(form_text), f2 = parse_form(form2_text);
            ctx.input_echo = format_form(f1) + " | " + format_form(f2);
            auto t1 = detect_reduced(f1), t2 = detect_reduced(f2);
            if (!t1 || !t2)
                throw DomainError("ShapeViolation", "both forms must be in reduced shape");
            auto v = triples_equivalent(*t1, *t2, radius);
            const char* names[] = {"Equivalent", "DefinitelyNot", "NotFoundWithinRadius"};
            ctx.result["verdict"] = names[v.kind];
            if (v.witness) ctx.result["witness"] = jmat(*v.witness);
            if (!v.reason.empty()) ctx.result["reason"] = v.reason;
            ctx.result["radius"] = radius;
            plain << names[v.kind];
            if (!v.reason.empty()) plain << " (" << v.reason << ")";
            plain << "\n";
        } else if (enb->parsed()) {
            ctx.op = "enumerate-binary";
            Int a(a_str), b(b_str), c(c_str);
            ctx.input_echo = a.get_str() + "," + b.get_str() + "," + c.get_str();
            auto hits = use_oracle ? brute_binary_triples(a, b, c, bound)
                                   : enumerate_binary_triples(a, b, c, bound);
            json jh = json::array();
            for (const auto& h : hits) {
                json e;
                e["triple"] = {js(h.triple.a), js(h.triple.b), js(h.triple.c)};
                json ws = json::array();
                for (const auto& w : h.witnesses) ws.push_back(jmat(w));
                e["witnesses"] = ws;
                jh.push_back(e);
                plain << "(" << h.triple.a << "," << h.triple.b << "," << h.triple.c << ") x"
                      << h.witnesses.size() << "\n";
            }
            ctx.result["bound"] = bound;
            ctx.result["triples"] = jh;
        } else if (lr->parsed()) {
            ctx.op = "lowrank";
            CubicForm f = parse_form(form_text);
            ctx.input_echo = format_form(f);
            auto pts = low_rank_points(f, max_rank, box);
            json jp = json::array();
            for (const auto& rp : pts) {
                jp.push_back({{"point", rp.point.str()},
                              {"rank", rp.rank},
                              {"value", js(rp.value)}});
                plain << rp.point.str() << " rank " << rp.rank << " value " << rp.value << "\n";
            }
            ctx.result["points"] = jp;
        } else if (nl->parsed()) {
            ctx.op = "normalize-line";
            CubicForm f = parse_form(form_text);
            ctx.input_echo = format_form(f);
            auto r = normalize_line(f);
            ctx.result["T"] = jmat(r.T);
            ctx.result["form"] = format_form(r.Fprime);
            plain << format_form(r.Fprime) << "\n";
        } else if (es->parsed()) {
            ctx.op = "estimate-s";
            CubicForm f = parse_form(form_text);
            ctx.input_echo = format_form(f);
            Int s = estimate_S(f, radius, ctx.threads);
            ctx.result["radius"] = radius;
            ctx.result["S_lower"] = js(s);
            plain << s << "\n";
        } else if (ep->parsed()) {
            ctx.op = "extract-point";
            CubicForm f = parse_form(form_text);
            ctx.input_echo = format_form(f);
            auto r = point_contraction_extract(f, PointProj(parse_int_csv(point_csv)));
            ctx.result["a"] = js(r.a);
            ctx.result["F_X"] = format_form(r.F_X);
            ctx.result["T"] = jmat(r.T);
            plain << "a = " << r.a << "\nF_X = " << format_form(r.F_X) << "\n";
        } else if (pl->parsed()) {
            ctx.op = "pell";
            Int a(a_str), b(b_str);
            ctx.input_echo = a.get_str() + "," + b.get_str();
            auto fam = pell_family(a, b, count);
            json jf = json::array();
            for (const auto& e : fam) {
                jf.push_back({{"s", js(e.sol.s)},
                              {"t", js(e.sol.t)},
                              {"M", jmat(e.M)},
                              {"det", "1"},
                              {"A", js(e.A)},
                              {"B", js(e.B)}});
                plain << "(" << e.sol.s << "," << e.sol.t << ") A=" << e.A << " B=" << e.B
                      << "\n";
            }
            ctx.result["entries"] = jf;
        } else if (fx->parsed()) {
            ctx.op = "fixtures";
            ctx.input_echo = fixture_name;
            if (fixture_name != "p3-blowup")
                throw DomainError("UnknownFixture", "available fixtures: p3-blowup");
            auto f = example_blowup_p3();
            ctx.result["stage1"] = format_form(f.stage1);
            ctx.result["stage2"] = format_form(f.stage2);
            ctx.result["a"] = js(f.stage2_a);
            json jb = json::array();
            for (const Int& b : f.stage2_b) jb.push_back(js(b));
            ctx.result["b"] = jb;
            ctx.result["Delta"] = js(f.delta);
            json jn = json::array();
            for (const auto& p : f.nodes) jn.push_back(p.str());
            ctx.result["nodes"] = jn;
            plain << "stage1 = " << format_form(f.stage1) << "\nstage2 = "
                  << format_form(f.stage2) << "\nDelta = " << f.delta << "\nnode = "
                  << f.nodes[0].str() << "\n";
        } else if (sim->parsed()) {
            ctx.op = "simulate";
            std::ifstream in(file_arg);
            if (!in) throw DomainError("FileNotFound", "cannot open '" + file_arg + "'");
            std::stringstream buf;
            buf << in.rdbuf();
            ctx.input_echo = file_arg;
            auto res = run_scenario(buf.str());
            ctx.result["b2"] = res.state.b2;
            ctx.result["b3"] = res.state.b3;
            ctx.result["Ib3"] = res.state.Ib3;
            ctx.result["K3"] = js(res.state.K3);
            ctx.result["F"] = format_form(res.state.F);
            json jl = json::array();
            for (const auto& l : res.log) jl.push_back(l);
            ctx.result["log"] = jl;
            for (const auto& rec : res.state.history)
                for (const auto& w : rec.warnings) ctx.warnings.push_back(w);
            plain << "b2=" << res.state.b2 << " b3=" << res.state.b3 << " Ib3="
                  << res.state.Ib3 << " K3=" << res.state.K3 << "\nF = "
                  << format_form(res.state.F) << "\n";
            for (const auto& l : res.log) plain << l << "\n";
        } else if (bd->parsed()) {
            ctx.op = "bounds";
            auto r = topological_bounds(b2, b3, Int(s_str), parse_rational(k3_str),
                                        parse_rational(kc2_str));
            ctx.input_echo = "b2=" + std::to_string(b2) + " b3=" + std::to_string(b3);
            ctx.result["volume_bound"] = js(r.volume_bound);
            ctx.result["point_bound"] = js(r.point_bound);
            ctx.result["curve_bound"] = js(r.curve_bound);
            ctx.result["bmy_ok"] = r.bmy_ok;
            ctx.result["xi_cap"] = js(r.xi_cap);
            plain << "volume_bound = " << r.volume_bound << "\npoint_bound = " << r.point_bound
                  << "\ncurve_bound = " << r.curve_bound << "\nbmy_ok = "
                  << (r.bmy_ok ? "yes" : "no") << "\nxi_cap = " << r.xi_cap << "\n";
        }
        ctx.plain = plain.str();
        emit(ctx, out);
        return 0;
    } catch (const DomainError& e) {
        if (ctx.json_out) {
            json doc;
            doc["op"] = ctx.op;
            doc["error"] = {{"code", e.code()}, {"message", e.what()}};
            out << doc.dump(2) << "\n";
        } else {
            err << "error [" << e.code() << "]: " << e.what() << "\n";
        }
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error [BadNumber]: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cubic3::cli
