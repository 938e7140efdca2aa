#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "frobkit/cli.hpp"

using namespace frobkit;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("point parsing") {
    const auto p = parse_point("0,2.5,1:-2");
    REQUIRE(p.size() == 3);
    CHECK(p[1] == Complex(2.5));
    CHECK(p[2] == Complex(1.0, -2.0));
    CHECK_THROWS_AS(parse_point("1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_point("1:2:3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_point("x"), std::invalid_argument);
}

TEST_CASE("verify emits a full JSON report") {
    const Run r = run({"verify", "--model", "nm11", "--point", "0,2,1", "--tol", "1e-6"});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.is_array());
    CHECK(j.size() >= 10);
    for (const auto& rep : j) {
        for (const char* key : {"check_name", "model", "point", "residual", "tolerance", "passed", "convention", "metadata"})
            CHECK(rep.contains(key));
        CHECK(rep["passed"].get<bool>() == (rep["residual"].get<double>() <= rep["tolerance"].get<double>()));
    }
    CHECK(j[0]["point"][1]["value"] == json::array({2.0, 0.0}));
}

TEST_CASE("exit codes") {
    CHECK(run({"verify", "--model", "nm11", "--point", "0,2,1", "--tol", "1e-20"}).code == 1);
    CHECK(run({"verify", "--model", "nm7", "--point", "0,2,1"}).code == 2);
    CHECK(run({"verify", "--point", "0,2"}).code == 2);
    CHECK(run({"verify", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    const Run d = run({"verify", "--model", "nm11", "--point", "0,0,1"});
    CHECK(d.code == 3);
    CHECK(d.err.find("pole-order") != std::string::npos);
    CHECK(run({"pvi", "--solution", "k3", "--x-range", "-1:1:3"}).code == 3);
}

TEST_CASE("pvi scan") {
    const Run r = run({"pvi", "--solution", "k3", "--x-range", "1.5:3.0:50"});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j[0]["check_name"] == "pvi_residual");
    CHECK(j[0]["residual"].get<double>() < 1e-8);
    CHECK(j[0]["metadata"]["samples"] == "50");
}

TEST_CASE("tau and top commands") {
    const Run t = run({"tau", "--point", "0,2,1"});
    CHECK(t.code == 0);
    CHECK(run({"tau", "--model", "nm02"}).code == 2);
    const Run top = run({"top"});
    CHECK(top.code == 0);
    const Run st = run({"top", "--state", "0.5:0.5,0.1,0.2:0.1,0.3", "--s-end", "0.5:1.5", "--format", "csv"});
    CHECK(st.code == 0);
    CHECK(st.out.rfind("check_name,model,residual", 0) == 0);
}

TEST_CASE("output is deterministic and seeds reproduce") {
    const std::vector<std::string> cmd{"verify", "--model", "nm02", "--random", "2", "--seed", "5"};
    const Run a = run(cmd), b = run(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto other = cmd;
    other.back() = "6";
    CHECK(run(other).out != a.out);
}

TEST_CASE("sweep writes CSV in grid order") {
    const Run r = run({"sweep", "--model", "nm02", "--point", "1,1,2", "--param", "3", "--range", "0:2:3"});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, l1, l2, l3;
    std::getline(lines, header);
    std::getline(lines, l1);
    std::getline(lines, l2);
    std::getline(lines, l3);
    CHECK(header.rfind("x3,flat_metric,", 0) == 0);
    CHECK(l1.rfind("0,", 0) == 0);
    CHECK(l2.rfind("1,", 0) == 0);
    CHECK(l3.rfind("2,", 0) == 0);

    const Run d = run({"sweep", "--model", "nm11", "--point", "0,2,1", "--param", "2", "--range", "-1:1:3"});
    CHECK(d.code == 3);
    CHECK(d.out.find("\n0,nan,") != std::string::npos);
}

TEST_CASE("frame dump and file output") {
    const std::string path = "frobkit_test_frame.json";
    const Run r = run({"frame", "--model", "nm11", "--point", "0,2,1", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    const json j = json::parse(f);
    CHECK(j["u"].size() == 3);
    CHECK(j["alphas"][0] == json::array({2.0, 0.0}));
    std::remove(path.c_str());
}
