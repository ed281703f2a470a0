#include "doctest.h"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cycloscope/cli.hpp"
#include "cycloscope/survey.hpp"

using namespace cycloscope;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("member") {
    const auto r = run({"member", "7", "--ell", "2", "--witness"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["verdict"] == "member");
    const std::set<std::string> got{j["witness"]["g"]["text"], j["witness"]["h"]["text"]};
    CHECK(got == std::set<std::string>{"X^4+X^3+X^2+1", "X^3+X^2+1"});

    const auto r11 = json::parse(run({"member", "11", "--ell", "3", "--witness"}).out);
    const std::set<std::string> got11{r11["witness"]["g"]["text"], r11["witness"]["h"]["text"]};
    CHECK(got11 == std::set<std::string>{"X^6-X^5-X^4-X^3+X^2+1", "X^5+X^4-X^3+X^2-1"});

    const auto r115 = json::parse(run({"member", "11", "--ell", "5"}).out);
    CHECK(r115["verdict"] == "nonmember");
    CHECK_FALSE(r115.contains("witness"));

    const auto bad = run({"member", "4", "--ell", "2"});
    CHECK(bad.code == exit_code::usage);
    CHECK(bad.err.find("4 is not prime") != std::string::npos);
    CHECK(bad.out.empty());
}

TEST_CASE("usage and capacity exits") {
    CHECK(run({}).code == exit_code::usage);
    CHECK(run({"frobnicate"}).code == exit_code::usage);
    CHECK(run({"member", "7", "--ell", "2", "--bogus"}).code == exit_code::usage);
    CHECK(run({"member", "7"}).code == exit_code::usage);
    CHECK(run({"factor-phi", "3011", "--ell", "2"}).code == exit_code::capacity);
    CHECK(run({"survey", "--ell", "2", "--limit", "100000001"}).code == exit_code::capacity);
    CHECK(run({"constants", "artin", "--precision", "1e-13"}).code == exit_code::usage);
    CHECK(run({"constants", "artin", "--precision", "0.5"}).code == exit_code::usage);
    CHECK(run({"constants", "hooley", "--a", "4"}).code == exit_code::usage);
    CHECK(run({"constants", "bound"}).code == exit_code::usage);
    CHECK(run({"constants", "pi"}).code == exit_code::usage);
    CHECK(run({"golomb-survey", "--a", "4", "--r", "1", "--limit", "1000"}).code == exit_code::usage);
    CHECK(run({"lemma-checks", "--limit", "100001"}).code == exit_code::capacity);
    CHECK(run({"davenport", "--ell", "11"}).code == exit_code::capacity);
    CHECK(run({"member", "7", "--ell", "2", "--format", "csv"}).code == exit_code::usage);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("survey") != std::string::npos);
}

TEST_CASE("factor-phi") {
    const auto j = json::parse(run({"factor-phi", "7", "--ell", "2"}).out);
    CHECK(j["factor_count"] == 2);
    CHECK(j["factors"][0]["text"] == "X^3+X+1");
    CHECK(j["factors"][1]["text"] == "X^3+X^2+1");
    CHECK(j["trace_multiset"] == json{{"0", 1}, {"1", 1}});
}

TEST_CASE("constants") {
    const auto r = run({"constants", "artin", "--precision", "1e-9"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["label"] == "A");
    const double lo = std::stod(j["lo"].get<std::string>());
    const double hi = std::stod(j["hi"].get<std::string>());
    CHECK(hi - lo <= 2e-9);
    CHECK(lo < 0.3739558137);
    CHECK(hi > 0.3739558136);

    const auto b = json::parse(run({"constants", "bound", "--ell", "3", "--precision", "1e-8"}).out);
    CHECK(b["lo"].get<std::string>().substr(0, 7) == "0.25208");
    const auto h = json::parse(run({"constants", "hooley", "--a", "5"}).out);
    CHECK(h["delta"] == "20/19");
    const auto g = json::parse(run({"constants", "golomb", "--a", "2", "--r", "2", "--precision", "1e-4"}).out);
    CHECK(g["label"] == "A(2,2)");
}

TEST_CASE("survey output is byte-identical across thread counts") {
    std::string first;
    for (const char* t : {"1", "2", "8"}) {
        const auto r = run({"survey", "--ell", "5", "--limit", "50000", "--deep-limit", "50000", "--threads", t});
        REQUIRE(r.code == 0);
        if (first.empty()) {
            first = r.out;
        } else {
            CHECK(r.out == first);
        }
    }
    const auto j = json::parse(first);
    CHECK(j["undecided"] == 0);
    CHECK(j["members"].get<u64>() + j["nonmembers"].get<u64>() == j["total_primes"].get<u64>());
    CHECK(first.find("elapsed") == std::string::npos);
}

TEST_CASE("survey formats and --out") {
    const auto csv = run({"survey", "--ell", "3", "--limit", "10000", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("record,key,value\n", 0) == 0);
    CHECK(csv.out.find("field,ell,3\n") != std::string::npos);
    CHECK(csv.out.find("index_histogram,1,") != std::string::npos);
    CHECK(csv.out.find("references,1-B(3).lo,") != std::string::npos);

    const auto text = run({"survey", "--ell", "3", "--limit", "10000", "--format", "text"});
    CHECK(text.out.find("members = ") != std::string::npos);

    const std::string path = "cli_test_report.json";
    std::remove(path.c_str());
    const auto r = run({"survey", "--ell", "3", "--limit", "10000", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto plain = run({"survey", "--ell", "3", "--limit", "10000"});
    CHECK(ss.str() == plain.out);
    CHECK(ss.str().back() == '\n');
    std::remove(path.c_str());
}

TEST_CASE("golomb-survey, davenport, lemma-checks, selftest") {
    const auto g = json::parse(run({"golomb-survey", "--a", "2", "--r", "1", "--limit", "20000"}).out);
    CHECK(g["count"].get<u64>() <= g["eligible"].get<u64>());
    CHECK(g["references"][0]["label"] == "A(2,1)");

    for (const char* l : {"2", "3", "5", "7"}) {
        const auto d = run({"davenport", "--ell", l});
        CHECK(d.code == 0);
        CHECK(json::parse(d.out)["davenport_constant_is_ell"] == true);
    }

    const auto lc = run({"lemma-checks", "--limit", "3000"});
    CHECK(lc.code == 0);
    CHECK(json::parse(lc.out)["passed"] == true);

    const auto st = run({"selftest"});
    CHECK(st.code == 0);
    CHECK(json::parse(st.out)["passed"] == true);
}
