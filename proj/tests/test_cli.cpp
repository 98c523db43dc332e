#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cg/ambient.hpp"
#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cgeom");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = cgcli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {rc, out.str(), err.str()};
}

struct TempDir {
    fs::path p;
    TempDir() {
        p = fs::temp_directory_path() / ("cgeom_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
    }
    ~TempDir() { fs::remove_all(p); }
    std::string write(const std::string& name, const json& j) const {
        auto f = (p / name).string();
        std::ofstream(f) << j.dump();
        return f;
    }
    std::string path(const std::string& name) const { return (p / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const json kTorus = {{"kind", "flat_torus"}, {"params", {0.6}}};

}  // namespace

TEST_CASE("catalog listing") {
    auto r = cli({"catalog"});
    CHECK(r.code == 0);
    CHECK(r.out.find("willmore: order 3") != std::string::npos);
    CHECK(r.out.find("dlap_willmore: order 5") != std::string::npos);
    CHECK(r.out.find("clifford") != std::string::npos);
    CHECK(r.out.find("flat_torus") != std::string::npos);
    CHECK(cli({"catalog"}).out == r.out);
    auto j = json::parse(cli({"catalog", "--format", "json"}).out);
    CHECK(j["suites"].size() == 8);
}

TEST_CASE("config errors exit 2") {
    TempDir t;
    std::ofstream(t.path("broken.json")) << "{ not json";
    CHECK(cli({"compute", "--config", t.path("broken.json")}).code == 2);
    CHECK(cli({"compute", "--config", t.write("a.json", {{"grid", {{"nu", 4}}}})}).code == 2);
    CHECK(cli({"compute", "--config", t.write("b.json", {{"jet_order", 7}})}).code == 2);
    CHECK(cli({"compute", "--config", t.write("c.json", {{"colour", 1}})}).code == 2);
    CHECK(cli({"compute", "--config", t.write("d.json", {{"tolerances", {{"gauss_xi", 0.0}}}})}).code == 2);
    CHECK(cli({"compute", "--config", t.write("e.json", {{"surface", {{"kind", "klein_bottle"}}}})}).code == 2);
    CHECK(cli({"compute", "--config", t.path("missing.json")}).code == 2);
    CHECK(cli({"check", "--suite", "no_such_suite"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"reconstruct", "--seed-transform", "shear:1,2"}).code == 2);
}

TEST_CASE("exception mapping follows the exit-code contract") {
    std::ostringstream err;
    CHECK(cgcli::guarded([]() -> int { throw cg::UmbilicPoint("umbilic point at grid point (3, 4)"); }, err) == 3);
    CHECK(err.str().find("(3, 4)") != std::string::npos);
    CHECK(cgcli::guarded([]() -> int { throw cg::DegeneratePoint("x"); }, err) == 4);
    CHECK(cgcli::guarded([]() -> int { throw cg::IntegrabilityFailure("x"); }, err) == 5);
    CHECK(cgcli::guarded([]() -> int { throw cg::GramDriftError("x"); }, err) == 6);
    CHECK(cgcli::guarded([]() -> int { throw cgcli::ConfigError("x"); }, err) == 2);
}

TEST_CASE("compute: Clifford is Willmore, the flat torus has constant |II0|^2") {
    TempDir t;
    auto cfg = t.write("c.json", {{"grid", {{"nu", 8}, {"nv", 8}}}, {"invariants", {"willmore"}}});
    auto r = cli({"compute", "--config", cfg});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["records"].size() == 64);
    for (auto& rec : j["records"]) {
        CHECK(std::abs(rec["conformal"]["willmore"].get<double>()) < 1e-9);
        CHECK(rec["invariants"][0]["name"] == "willmore");
        CHECK(std::abs(rec["invariants"][0]["value"].get<double>()) < 1e-9);
        CHECK(rec["fingerprint"] == j["fingerprint"]);
    }

    auto cfg2 = t.write("t.json", {{"surface", kTorus}, {"grid", {{"nu", 8}, {"nv", 8}}}, {"invariants", {"normII2"}}});
    auto j2 = json::parse(cli({"compute", "--config", cfg2}).out);
    for (auto& rec : j2["records"])
        CHECK(rec["invariants"][0]["value"].get<double>() == doctest::Approx(625.0 / 288).epsilon(1e-12));
}

TEST_CASE("compute output is byte-stable across runs and job counts") {
    TempDir t;
    auto cfg = t.write("c.json", {{"surface", kTorus},
                                  {"lambda", {{"kind", "affine"}, {"params", {1.3, 0.2, 0, 0, 0}}}},
                                  {"grid", {{"nu", 8}, {"nv", 10}}},
                                  {"points", {{1.0, 0.1}, {2.0, -0.05}}},
                                  {"invariants", {"willmore", "normII2", "tr_h3"}}});
    for (const char* fmt : {"json", "csv"}) {
        auto a = cli({"compute", "--config", cfg, "--format", fmt, "--jobs", "1"});
        auto b = cli({"compute", "--config", cfg, "--format", fmt, "--jobs", "3"});
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }
    auto csv = cli({"compute", "--config", cfg, "--format", "csv"}).out;
    CHECK(csv.substr(0, csv.find('\n')) ==
          "fingerprint,i,j,u1,u2,E,H,K,normII2,a,m,willmore,inv_normII2,inv_tr_h3,inv_willmore,Htilde_0,detG_0,Htilde_1,detG_1");
    // the --out file carries the same bytes
    CHECK(cli({"compute", "--config", cfg, "--format", "csv", "--out", t.path("o.csv")}).code == 0);
    auto fileout = slurp(t.path("o.csv"));
    CHECK(fileout.substr(fileout.find('\n')) == csv.substr(csv.find('\n')));
}

TEST_CASE("compute on the degeneracy locus exits 4") {
    auto chart = cg::SurfaceChart::flat_torus(0.6);
    cg::FrameState f = cg::frame_state(chart, cg::ConformalFactor::constant(1.0), 0.0, 0.0);
    auto roots = cg::degeneracy_roots(f, 1.0, 50);
    REQUIRE(!roots.empty());
    TempDir t;
    // the flat torus data are constant along the grid, so the root holds at every node
    auto cfg = t.write("c.json", {{"surface", kTorus}, {"grid", {{"nu", 8}, {"nv", 8}}}, {"points", {{1.0, roots[0].rho}}}});
    auto r = cli({"compute", "--config", cfg});
    CHECK(r.code == 4);
    CHECK(r.err.find("grid point (0, 0)") != std::string::npos);
}

TEST_CASE("check: pass, failure on corrupted data") {
    TempDir t;
    auto cfg = t.write("c.json", {{"grid", {{"nu", 16}, {"nv", 16}}}, {"samples", 10}});
    auto r = cli({"check", "--suite", "willmore", "--config", cfg});
    CHECK(r.code == 0);
    CHECK(r.out.find("willmore_h_xi") != std::string::npos);

    auto tcfg = t.write("t.json", {{"surface", kTorus}, {"grid", {{"nu", 32}, {"nv", 32}}}});
    REQUIRE(cli({"compute", "--config", tcfg, "--emit-data", t.path("d.json"), "--out", t.path("o.json")}).code == 0);
    CHECK(cli({"check", "--suite", "integrability", "--config", tcfg, "--data", t.path("d.json")}).code == 0);
    json d = json::parse(slurp(t.path("d.json")));
    d["fields"]["OmegaStar11"][200] = d["fields"]["OmegaStar11"][200].get<double>() + 1e-3;
    auto bad = t.write("bad.json", d);
    auto rb = cli({"check", "--suite", "integrability", "--config", tcfg, "--data", bad, "--out", t.path("rep.json")});
    CHECK(rb.code == 1);
    json rep = json::parse(slurp(t.path("rep.json")));
    CHECK(rep["pass"] == false);
    for (auto& item : rep["suites"]["integrability"]["items"]) {
        if (item["name"] == "codazzi_y_star_1") CHECK(item["value"].get<double>() > 1e-4);
        if (item["name"] == "codazzi_y_1") CHECK(item["pass"] == true);
    }
}

TEST_CASE("reconstruct: round trip, boosted seed, perturbed data, coarse grid") {
    TempDir t;
    auto cfg = t.write("c.json", {{"surface", kTorus}, {"grid", {{"nu", 32}, {"nv", 32}}}});
    auto a = cli({"reconstruct", "--config", cfg});
    REQUIRE(a.code == 0);
    auto ja = json::parse(a.out);
    CHECK(ja["report"]["source"]["m"].get<double>() < 1e-4);
    auto b = cli({"reconstruct", "--config", cfg, "--seed-transform", "boost:2,0.5"});
    REQUIRE(b.code == 0);
    auto jb = json::parse(b.out);
    for (const char* k : {"m", "normII2", "willmore"})
        CHECK(std::abs(ja["report"]["source"][k].get<double>() - jb["report"]["source"][k].get<double>()) < 1e-9);
    CHECK(cli({"reconstruct", "--config", cfg, "--seed-transform", "rotation:1,3,0.4"}).code == 0);

    REQUIRE(cli({"compute", "--config", cfg, "--emit-data", t.path("d.json"), "--out", t.path("o.json")}).code == 0);
    CHECK(cli({"reconstruct", "--config", cfg, "--data", t.path("d.json"), "--out", t.path("r.csv"), "--format", "csv"})
              .code == 0);
    json d = json::parse(slurp(t.path("d.json")));
    d["fields"]["omega1"][77] = d["fields"]["omega1"][77].get<double>() + 1e-3;
    CHECK(cli({"reconstruct", "--config", cfg, "--data", t.write("p.json", d)}).code == 5);

    auto coarse = t.write("k.json", {{"surface", kTorus},
                                     {"lambda", {{"kind", "affine"}, {"params", {1.3, 0.2, 0, 0, 0}}}},
                                     {"grid", {{"nu", 8}, {"nv", 8}}}});
    CHECK(cli({"reconstruct", "--config", coarse}).code == 6);
}
