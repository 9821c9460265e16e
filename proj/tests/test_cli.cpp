#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "epz/config.hpp"
#include "epz/verify.hpp"

using namespace epz;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run(const std::string& args)
{
    const std::string cmd = std::string(EPZ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "epz_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("config defaults, overrides and parsing")
{
    RunConfig c;
    CHECK(c.form() == QuadForm{1, 0, 5});
    CHECK(c.get_int("model.n") == 8);
    CHECK(c.get_list("linescan.T") == std::vector<double>{500, 1000, 2000});
    const RunConfig d = RunConfig::from_text("# comment\nform = 2,2,3  # trailing\n\nseed=7\n");
    CHECK(d.form() == QuadForm{2, 2, 3});
    CHECK(d.get_int("seed") == 7);
    CHECK_THROWS_AS(RunConfig::from_text("nonsense = 1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text("no equals sign\n"), ConfigError);
    c.set("count.T", "12x");
    CHECK_THROWS_AS(c.get_double("count.T"), ConfigError);
    CHECK_THROWS_AS(parse_form("1,0"), ConfigError);
    CHECK_THROWS_AS(parse_form("1,0,5,7"), ConfigError);
    for (const auto& k : config_keys()) CHECK(!k.doc.empty());
}

TEST_CASE("fingerprints follow the canonical serialization")
{
    RunConfig a, b;
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint().size() == 16);
    b.set("seed", "8");
    CHECK(a.fingerprint() != b.fingerprint());
    CHECK(RunConfig::from_text(a.canonical()).canonical() == a.canonical());
    CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("form validation")
{
    RunConfig c;
    c.set("form", "1,0,-5");
    CHECK_THROWS_AS(make_form_context(c), DomainError);
    c.set("form", "1,0,3");  // D = -12
    CHECK_THROWS_AS(make_form_context(c), DomainError);
    c.set("form", "2,2,3");
    const FormContext ctx = make_form_context(c);
    const auto h = artifact_header(c, ctx);
    CHECK(h["discriminant"] == -20);
    CHECK(h["h"] == 2);
    CHECK(h["w"] == 2);
    CHECK(h["seed"] == c.get_int("seed"));
    CHECK(h.contains("character_table_fingerprint"));
    CHECK(h.contains("budgets"));
    CHECK(h["config_fingerprint"] == c.fingerprint());
}

TEST_CASE("check catalog")
{
    CHECK(check_catalog().size() == 13);
    CHECK(find_check("functional-equation")->id == 3);
    CHECK(find_check("7")->name == "count-vs-predict");
    CHECK(!find_check("nope"));
    CHECK_THROWS_AS(run_verify(RunConfig(), {"nope"}), ConfigError);
}

TEST_CASE("verify report is deterministic and self-describing")
{
    RunConfig c;
    c.set("seed", "7");
    const auto a = run_verify(c, {"exact-algebra", "decomposition"});
    const auto b = run_verify(c, {"exact-algebra", "decomposition"});
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.all_passed());
    CHECK(a.results.size() == 2);
    CHECK(a.to_json()["header"]["seed"] == 7);
    CHECK(a.summary().find("[PASS]") != std::string::npos);
}

TEST_CASE("command line: exit codes and artifacts")
{
    CHECK(run("--help") == 0);
    CHECK(run("") == 2);
    CHECK(run("bogus") == 2);
    CHECK(run("eval --sigma 2 --form 1,0,3") == 2);
    CHECK(run("eval --sigma 2 --set unknown.key=1") == 2);
    CHECK(run("verify --only no-such-check") == 2);
    CHECK(run("density --sigma 0.8 --method magic") == 2);

    const auto j1 = scratch("v1.json"), j2 = scratch("v2.json");
    CHECK(run("verify --only functional-equation --seed 7 -o " + j1.string()) == 0);
    CHECK(run("verify --only functional-equation --seed 7 -o " + j2.string()) == 0);
    CHECK(!slurp(j1).empty());
    CHECK(slurp(j1) == slurp(j2));

    const auto e = scratch("eval.json");
    CHECK(run("eval --sigma 2 --t 1 --form 2,2,3 -o " + e.string()) == 0);
    const std::string txt = slurp(e);
    CHECK(txt.find("\"discriminant\": -20") != std::string::npos);
    CHECK(txt.find("character_table_fingerprint") != std::string::npos);
}

TEST_CASE("command line: line scan experiment writes RFC 4180 CSV")
{
    const auto dir = scratch("exp");
    std::filesystem::remove_all(dir);
    CHECK(run("experiment LineScan --set linescan.T=20,40 --set linescan.sigma0=0.5 --set output.dir=" + dir.string()) == 0);
    const std::string csv = slurp(dir / "line_scan.csv");
    CHECK(csv.rfind("T,count,count_over_T\r\n", 0) == 0);
    CHECK(csv.find("40,") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "LineScan.json"));
}
