#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = pegd::cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string corpus(const char* name) { return std::string(PEGD_CORPUS_DIR) + "/" + name; }

std::string temp_grammar(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / ("pegd_cli_test_" + name + ".peg");
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST_CASE("check") {
    Run r = invoke({"check", corpus("rightrec.peg")});
    CHECK(r.code == 0);
    CHECK(r.out == "X: wf=yes nullable=yes firsts={'x'}\nstart: well-formed\n");

    Run bad = invoke({"check", corpus("leftrec.peg")});
    CHECK(bad.code == 3);
    CHECK(bad.out.find("X: wf=no nullable=yes (undefined)") != std::string::npos);
    CHECK(bad.out.find("start: not well-formed") != std::string::npos);
}

TEST_CASE("check json") {
    Run r = invoke({"check", corpus("leftrec.peg"), "--json"});
    json j = json::parse(r.out);
    CHECK(j["schema"] == "pegd/1");
    CHECK(j["command"] == "check");
    CHECK(j["rules"][0]["well_formed"] == false);
    CHECK(j["rules"][0]["nullable"] == true);
    CHECK(j["start"]["well_formed"] == false);
}

TEST_CASE("recognize") {
    CHECK(invoke({"recognize", corpus("ford.peg"), "aaa"}).out == "accepted\n");
    CHECK(invoke({"recognize", corpus("ford.peg"), "aaa"}).code == 0);
    Run no = invoke({"recognize", corpus("ford.peg"), "aabbc", "--engine", "both"});
    CHECK(no.code == 1);
    CHECK(no.out == "rejected\n");
    CHECK(invoke({"recognize", corpus("anbn.peg"), "--stdin"}, "aabb\n").code == 0);
    CHECK(invoke({"recognize", corpus("anbn.peg"), "aab", "--mode", "prefix"}).code == 0);
    CHECK(invoke({"recognize", corpus("leftrec.peg"), "x"}).code == 3);
    CHECK(invoke({"recognize", corpus("anbn.peg"), "abz"}).code == 2);
    CHECK(invoke({"recognize", corpus("anbn.peg")}).code == 2);

    Run j = invoke({"recognize", corpus("peek_cc.peg"), "cc", "--engine", "both", "--json"});
    json v = json::parse(j.out);
    CHECK(v["result"] == "accepted");
    CHECK(v["derivative"] == true);
    CHECK(v["reference"] == true);
}

TEST_CASE("reference engine runs out of fuel on left recursion") {
    Run r = invoke({"recognize", corpus("leftrec.peg"), "xx", "--engine", "reference"});
    CHECK(r.code == 4);
    CHECK(r.err.rfind("pegd recognize: ", 0) == 0);
}

TEST_CASE("derive") {
    Run r = invoke({"derive", corpus("peek_abc.peg"), "a", "--inline-depth", "4"});
    CHECK(r.code == 0);
    CHECK(r.out == "%alphabet 'a' 'b' 'c'\n_start <- &('b' 'c') . .\n");
    Run q = invoke({"derive", corpus("peek_not_b.peg"), "a", "--inline-depth", "4"});
    CHECK(q.out.find("_start <- !'b' .*") != std::string::npos);
    Run j = invoke({"derive", corpus("anbn.peg"), "a", "--json"});
    json v = json::parse(j.out);
    CHECK(v["grammar"] == "_start <- S 'b'\nS <- 'a' S 'b' / ''\n");
    CHECK(v["derived_rules"] == 0);
}

TEST_CASE("generate") {
    Run a = invoke({"generate", corpus("ford.peg"), "--seed", "42", "--count", "20", "--verify"});
    Run b = invoke({"generate", corpus("ford.peg"), "--seed", "42", "--count", "20", "--verify"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 20);

    Run ex = invoke({"generate", corpus("keyword.peg"), "--exhaustive", "--max-length", "3"});
    CHECK(ex.out == "ab\n");

    CHECK(invoke({"generate", corpus("leftrec.peg")}).code == 3);
    std::string never = temp_grammar("never", "S <- %fail\n");
    CHECK(invoke({"generate", never}).code == 1);
}

TEST_CASE("firsts") {
    Run r = invoke({"firsts", corpus("ford.peg")});
    CHECK(r.out == "start: {'a', 'b'}\n");
    Run b = invoke({"firsts", corpus("ford.peg"), "B"});
    CHECK(b.out.find("{'b'}") != std::string::npos);
    CHECK(invoke({"firsts", corpus("ford.peg"), "Nope"}).code == 2);
}

TEST_CASE("equiv") {
    std::string l = temp_grammar("l", "S <- 'a' 'b'* / 'c' 'b'*\n");
    std::string r = temp_grammar("r", "S <- ('a' / 'c') 'b'*\n");
    CHECK(invoke({"equiv", l, r}).code == 0);
    std::string one = temp_grammar("one", "S <- 'a'\n");
    std::string two = temp_grammar("two", "S <- 'a' / 'b'\n");
    Run d = invoke({"equiv", one, two, "--json"});
    CHECK(d.code == 1);
    json v = json::parse(d.out);
    CHECK(v["equivalent"] == false);
    CHECK(v["counterexample"]["input"] == "b");
    CHECK(v["counterexample"]["accepted_by"] == "right");
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"bogus"}).code == 2);
    CHECK(invoke({"check"}).code == 2);
    CHECK(invoke({"check", "/nonexistent/file.peg"}).code == 2);
    std::string broken = temp_grammar("broken", "S <- (\n");
    Run r = invoke({"check", broken, "--json"});
    CHECK(r.code == 2);
    json v = json::parse(r.out);
    CHECK(v["error"]["kind"] == "usage");
    CHECK(invoke({"--help"}).code == 0);
}
