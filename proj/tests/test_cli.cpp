#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using contactlab::run_cli;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("contactlab_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"check", "--catalog", "t3-flat", "--bogus"}).code == 2);
    CHECK(cli({"check", "--catalog", "t3-flat", "--spec", "x.json"}).code == 2);
    CHECK(cli({"check"}).code == 2);
    CHECK(cli({"bound", "--catalog", "t3-flat", "--method", "sideways"}).code == 2);
    CHECK(cli({"bound", "--catalog", "t3-flat", "--method", "hyperbolic"}).code == 2);
    CHECK(cli({"bound", "--catalog", "t3-flat", "--given", "K"}).code == 2);
    CHECK(cli({"bound", "--catalog", "t3-flat", "--given", "Q=1"}).code == 2);
    CHECK(cli({"check", "--catalog", "t3-flat", "--region", "0:1,0:1"}).code == 2);
    CHECK(cli({"tau-scan", "--catalog", "r3-bessel-ot", "--center", "0,0,0"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("computation errors exit with 1 and a module code") {
    const Result r = cli({"bound", "--method", "main", "--catalog", "r3-bessel-ot"});
    CHECK(r.code == 1);
    CHECK(r.err.find("bounds.RequiresCompatible") != std::string::npos);
    CHECK(r.out.empty());
    const Result u = cli({"check", "--catalog", "nope"});
    CHECK(u.code == 1);
    CHECK(u.err.find("catalog.UnknownEntry") != std::string::npos);
}

TEST_CASE("bound report") {
    const Result r = cli({"bound", "--catalog", "r-x-h2", "--method", "weak"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["schema"] == "contactlab/1");
    CHECK(j["command"] == "bound");
    CHECK(j["results"]["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(j["results"]["theorem"] == "weak-compatible");
    for (const auto& [k, v] : j["results"]["inputs"].items()) CHECK(v.contains("provenance"));
    CHECK(j["results"]["inputs"]["m_g"]["provenance"] == "sampled");
    CHECK(j["results"]["inputs"]["conv"]["provenance"] == "catalog");
    CHECK(j["results"]["inputs"]["conv"]["value"] == "infinity");
    CHECK_FALSE(j.contains("wall_time_s"));
}

TEST_CASE("given inputs carry user provenance") {
    const Result r = cli({"bound", "--catalog", "s3-round", "--method", "geometric", "--given", "A=0", "--given", "B=1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["results"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["results"]["inputs"]["B"]["provenance"] == "user");
    CHECK(j["parameters"]["given"].size() == 2);
}

TEST_CASE("criteria print the verdict on stderr") {
    const Result h = cli({"criteria", "--catalog", "h3-upper-half", "--grid", "6", "--assert-complete"});
    REQUIRE(h.code == 0);
    CHECK(h.err == "holds\n");
    CHECK(json::parse(h.out)["parameters"]["assert_complete"] == true);
    const Result f = cli({"criteria", "--catalog", "r-x-h2"});
    CHECK(f.err == "fails\n");
    const Result q = cli({"criteria", "--catalog", "t3-flat", "--method", "quasi-geodesic"});
    CHECK(q.err == "inapplicable\n");
}

TEST_CASE("deterministic output") {
    const std::vector<std::string> args{"verify-identities", "--catalog", "r3-sasakian", "--samples", "5",
                                        "--levi-samples", "3", "--seed", "17"};
    const Result a = cli(args), b = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "1"});
    const Result c = cli(threaded);
    json ja = json::parse(a.out), jc = json::parse(c.out);
    CHECK(ja["results"] == jc["results"]);
    CHECK(a.err == "holds\n");
}

TEST_CASE("timing is opt-in") {
    const Result r = cli({"check", "--catalog", "t3-flat", "--timing"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).contains("wall_time_s"));
}

TEST_CASE("spec files and output paths") {
    const auto spec = tmp("spec.json");
    {
        const Result e = cli({"catalog", "export", "t3-flat", "--const", "k=1"});
        REQUIRE(e.code == 0);
        std::ofstream(spec) << e.out;
    }
    CHECK(cli({"check", "--spec", spec.string()}).code == 2);
    const auto out = tmp("report.json");
    const Result r = cli({"check", "--spec", spec.string(), "--region", "0:1,0:1,0:1", "--grid", "2", "--out",
                          out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const json j = json::parse(slurp(out));
    CHECK(j["results"]["compatibility"]["class"] == "StronglyCompatible");
    CHECK(j["spec"]["source"] == spec.string());

    const auto svg = tmp("leaves.svg"), csv = tmp("leaves.csv");
    const Result f = cli({"foliation", "--spec", spec.string(), "--center", "1,1,1", "--radius", "0.4", "--seeds", "6",
                          "--svg", svg.string(), "--csv", csv.string()});
    REQUIRE(f.code == 0);
    CHECK(slurp(svg).find("<svg") != std::string::npos);
    CHECK(slurp(csv).rfind("leaf_id", 0) == 0);
    const json fj = json::parse(f.out);
    CHECK(fj["results"]["classification"]["simple"] == "true");

    const Result bad = cli({"check", "--spec", tmp("missing.json").string(), "--region", "0:1,0:1,0:1"});
    CHECK(bad.code == 2);
    std::ofstream(tmp("broken.json")) << "{\"name\": 1}";
    const Result schema = cli({"check", "--spec", tmp("broken.json").string(), "--region", "0:1,0:1,0:1"});
    CHECK(schema.code == 1);
    CHECK(schema.err.find("exprlang.SchemaError") != std::string::npos);
}

TEST_CASE("catalog subcommands") {
    const Result l = cli({"catalog", "list"});
    REQUIRE(l.code == 0);
    const json j = json::parse(l.out);
    CHECK(j["entries"].size() == 9);
    CHECK(j["entries"][4]["reference"]["weak_bound"]["provenance"] == "reported");
    CHECK(cli({"catalog"}).code == 2);
    CHECK(cli({"catalog", "export", "nope"}).code == 1);
}

TEST_CASE("invariants") {
    const Result p = cli({"invariants", "--catalog", "h3-upper-half", "--point", "0.1,0.2,2"});
    REQUIRE(p.code == 0);
    const json j = json::parse(p.out)["results"];
    CHECK(j["contact"]["rho"]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(j["contact"]["theta_prime"]["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(j["sectional_min"]["value"].get<double>() == doctest::Approx(-1).epsilon(1e-6));

    const Result g = cli({"invariants", "--catalog", "r-x-h2", "--grid", "3"});
    REQUIRE(g.code == 0);
    const json k = json::parse(g.out)["results"];
    CHECK(k["m_g"]["m_g"]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(k["compatibility"]["class"] == "WeaklyCompatible");
}
