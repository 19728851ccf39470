#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cubic3/cli.hpp"

using namespace cubic3;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("invariants command") {
    auto r = run_cli({"invariants", "x^3+y^3+z^3"});
    CHECK(r.code == 0);
    CHECK(r.out == "S = 0\nT = 27\nDelta = 729\n");
    CHECK(r.err.empty());

    auto rb = run_cli({"invariants", "x^3+y^3"});
    CHECK(rb.code == 0);
    CHECK(rb.out == "delta = -27\n");

    auto rj = run_cli({"invariants", "x^3+y^3+z^3", "--json"});
    CHECK(rj.code == 0);
    auto doc = nlohmann::json::parse(rj.out);
    CHECK(doc["op"] == "invariants");
    CHECK(doc["result"]["Delta"] == "729");
    CHECK(doc["result"]["content"] == "1");
    CHECK(doc["warnings"].empty());
}

TEST_CASE("output is byte-identical across runs") {
    std::vector<std::vector<std::string>> cmds = {
        {"invariants", "x^3+y^3+z^3", "--json"},
        {"enumerate-binary", "--a", "1", "--b", "0", "--c", "1", "--bound", "5", "--json"},
        {"reduce", "x^2*y+x^2*z-3*y^2*z", "--search", "3", "--json"},
        {"lowrank", "x^3+y^3+z^3", "--max-rank", "1", "--box", "1"},
    };
    for (const auto& cmd : cmds) {
        auto r1 = run_cli(cmd);
        auto r2 = run_cli(cmd);
        CHECK(r1.code == 0);
        CHECK(r1.out == r2.out);
    }
}

TEST_CASE("rank, act, reduce, extract-point round trips") {
    auto r = run_cli({"rank", "x^3+y^3+z^3", "--point", "1,0,0"});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");

    auto a = run_cli({"act", "x^3+2*y^3", "--matrix", "0,1,1,0"});
    CHECK(a.code == 0);
    CHECK(a.out == "2*x^3 + y^3\n");

    auto half = run_cli({"act", "x^3+y^3", "--matrix", "1,1/2,0,1"});
    CHECK(half.code == 0);
    CHECK(half.err.empty());
    CHECK(half.out.find("warning: result has rational coefficients") != std::string::npos);

    auto red = run_cli({"reduce", "x^3+y^3"});
    CHECK(red.code == 0);
    CHECK(red.out == "a = 1\nB = (0)\nG = x^3\n");

    auto ep = run_cli({"extract-point", "x^3+y^3+z^3", "--point", "1,0,0"});
    CHECK(ep.code == 0);
    CHECK(ep.out == "a = 1\nF_X = x^3 + y^3\n");

    // plain-text forms re-parse to the same object
    CubicForm back = parse_form("x^3 + y^3");
    CHECK(back == parse_form("x^3+y^3"));
}

TEST_CASE("enumerate-binary agrees with its oracle through the CLI") {
    std::vector<std::string> fast = {"enumerate-binary", "--a", "2", "--b", "-3",
                                     "--c", "1", "--bound", "6"};
    std::vector<std::string> slow = fast;
    slow.push_back("--oracle");
    auto rf = run_cli(fast);
    auto rs = run_cli(slow);
    CHECK(rf.code == 0);
    CHECK(rs.code == 0);
    CHECK(rf.out == rs.out);
    CHECK(!rf.out.empty());
}

TEST_CASE("fixtures and bounds") {
    auto f = run_cli({"fixtures", "p3-blowup"});
    CHECK(f.code == 0);
    CHECK(f.out.find("Delta = 0") != std::string::npos);
    CHECK(f.out.find("node = [0,0,1]") != std::string::npos);
    CHECK(run_cli({"fixtures", "nope"}).code == 1);

    auto b = run_cli({"bounds", "--b2", "2", "--b3", "4"});
    CHECK(b.code == 0);
    CHECK(b.out.find("volume_bound = 156") != std::string::npos);
    CHECK(run_cli({"bounds", "--b2", "3", "--b3", "0"}).out.find("point_bound = 9216") !=
          std::string::npos);
}

TEST_CASE("simulate replays a scenario file") {
    const std::string path = "/tmp/cubic3_cli_scenario_test.txt";
    {
        std::ofstream fs(path);
        fs << "init b2=1 b3=0 Ib3=0 K3=-64 F=x^3\n"
              "blowup-curve g=0 E3=-2 betaC=1\n"
              "contract-curve g=0\n"
              "assert K3=-64\n";
    }
    auto r = run_cli({"simulate", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("K3=-64") != std::string::npos);
    CHECK(r.out.find("F = x^3") != std::string::npos);

    auto missing = run_cli({"simulate", "/tmp/cubic3_no_such_file.txt"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("FileNotFound") != std::string::npos);
}

TEST_CASE("exit codes and error reporting") {
    // usage errors: 2
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"no-such-command"}).code == 2);
    CHECK(run_cli({"rank", "x^3"}).code == 2);  // missing --point

    // domain errors: 1, with the machine-readable code
    auto r = run_cli({"invariants", "x^4"});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("[ParseError]") != std::string::npos);

    auto rj = run_cli({"invariants", "x^4", "--json"});
    CHECK(rj.code == 1);
    auto doc = nlohmann::json::parse(rj.out);
    CHECK(doc["error"]["code"] == "ParseError");

    auto nonint = run_cli({"invariants", "x*y*z", "--json"});
    CHECK(nonint.code == 1);
    CHECK(nlohmann::json::parse(nonint.out)["error"]["code"] == "NonIntegralInvariant");

    // --help prints usage and succeeds
    auto h = run_cli({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("invariants") != std::string::npos);
}
