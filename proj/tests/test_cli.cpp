#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

using std::string;

namespace {

struct Run {
    int code;
    string out;
};

Run run(const string& args) {
    const string cmd = string(SUMSPACE_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    string out;
    std::array<char, 4096> buf{};
    std::size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), k);
    const int st = pclose(p);
    return {WEXITSTATUS(st), out};
}

string file(const string& name, const string& body) {
    const string path = string(TEST_WORKDIR) + "/" + name;
    std::ofstream(path) << body;
    return path;
}

const string M = file("cli_two.json", R"({"n": 1, "atoms": [{"x": [0.0], "w": 1.0}, {"x": [1.0], "w": 1.0}]})");
const string F = file("cli_ramp.json", R"({"values": [0, 1]})");
const string C = file("cli_const.json", R"({"values": [2, 2]})");
const string M2 = file("cli_two2d.json", R"({"n": 2, "atoms": [{"x": [0, 0], "w": 1.0}, {"x": [1, 0.5], "w": 2.0}]})");

}  // namespace

TEST_CASE("oracle prints the two-atom norm") {
    const Run r = run("oracle --measure " + M + " --function " + F + " --p 2");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("0.70710678", 0) == 0);
    CHECK(std::stod(r.out) == doctest::Approx(0.70710678).epsilon(1e-8));
}

TEST_CASE("estimate on constant f prints zero for every variant") {
    const Run r = run("estimate --measure " + M + " --function " + C + " --p 2 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.find("CR,0,") != string::npos);
    CHECK(r.out.find("V1,0,") != string::npos);
    CHECK(r.out.find("V4,0,") != string::npos);
    CHECK(r.out.find("VTH3,0,") != string::npos);
    CHECK(r.out.find("N11,0,") != string::npos);
}

TEST_CASE("kcurve csv header and rows") {
    const Run r = run("kcurve --measure " + M + " --function " + F + " --p 2 --t-grid 0.1:10:3");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("t,lower,upper,oracle\n0.1,", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}

TEST_CASE("json subcommands are deterministic") {
    for (const string& sub : {string("net"), string("whitney"), string("inspect --lacunae")}) {
        const Run a = run(sub + " --measure " + M2 + " --p 3 --seed 4");
        const Run b = run(sub + " --measure " + M2 + " --p 3 --seed 4");
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out.front() == '{');
    }
    const Run d = run("decompose --measure " + M + " --function " + F + " --p 2");
    CHECK(d.code == 0);
    CHECK(d.out.find("\"mu_norm_f2\": 0.707106781") != string::npos);
}

TEST_CASE("validate-family") {
    const string ok = file("cli_fam.json", R"({"cubes": [{"c": [0.5], "r": 0.6}], "prime": [0], "dprime": [0]})");
    const Run r = run("validate-family --measure " + M + " --function " + F + " --p 2 --family " + ok);
    CHECK(r.code == 0);
    CHECK(r.out.find("0.207612457") != string::npos);
    const string bad = file("cli_badfam.json",
                            R"({"cubes": [{"c": [0], "r": 1}, {"c": [1], "r": 1}], "prime": [0, 1], "dprime": [0, 1]})");
    CHECK(run("validate-family --measure " + M + " --function " + F + " --p 2 --family " + bad).code == 2);
}

TEST_CASE("input errors exit with 1") {
    CHECK(run("net --measure " + M + " --p 1").code == 1);
    CHECK(run("net --measure " + M2 + " --p 2").code == 1);
    CHECK(run("net --measure " + M + " --p 2 --bogus").code == 1);
    CHECK(run("net --measure /nonexistent.json --p 2").code == 1);
    CHECK(run("oracle --measure " + M + " --function " + file("cli_short.json", R"({"values": [1]})") + " --p 2").code == 1);
    CHECK(run("kcurve --measure " + M + " --function " + F + " --p 2 --t-grid 1:0.1:3").code == 1);
    CHECK(run("frobnicate").code == 1);
}

TEST_CASE("selftest exits 0") {
    const Run r = run("selftest --seed 7");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("selftest seed=7", 0) == 0);
    CHECK(r.out.find("result=PASS") != string::npos);
}
