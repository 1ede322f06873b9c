#include "enlarge/cli.hpp"
#include "enlarge/io.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace enlarge;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ENLARGE_TEST_DATA) + "/" + name; }

std::string scratch(const std::string& name, const std::string& text) {
    const std::string path = std::string(ENLARGE_TEST_SCRATCH) + "/" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("check-viability on the 6-point file") {
    const Run r = run({"check-viability", "--input", data("six_point.json")});
    REQUIRE(r.code == 0);
    const io::Json j = io::parse(r.out);
    CHECK(j["verdict"] == true);
    CHECK(j["deflator"][0][1] == "3/4");
    CHECK(j["deflator"][2][1] == "3/2");
    CHECK(j["drift_multiplier"] == "auto-satisfied");
}

TEST_CASE("check-viability on the 4-point file names the witness atom") {
    const Run r = run({"check-viability", "--input", data("four_point.json")});
    REQUIRE(r.code == 0);
    const io::Json j = io::parse(r.out);
    CHECK(j["verdict"] == false);
    CHECK(j["witness"]["g_atom"] == io::Json::array({"w4"}));
    CHECK_FALSE(j["witness"]["certificate"].empty());
}

TEST_CASE("drift, factors and the horizon override") {
    const Run d = run({"drift", "--input", data("six_point.json")});
    REQUIRE(d.code == 0);
    CHECK(io::parse(d.out)["drift"][0][1] == "1/6");
    const Run stopped = run({"drift", "--input", data("six_point.json"), "--horizon", "0"});
    REQUIRE(stopped.code == 0);
    CHECK(io::parse(stopped.out)["drift"][0][1] == "0");
    CHECK(run({"drift", "--input", data("six_point.json"), "--horizon", "soon"}).code == 2);

    const Run f = run({"factors", "--input", data("six_point.json")});
    REQUIRE(f.code == 0);
    CHECK(io::parse(f.out)["phi"][0][0][1] == "2/3");
    CHECK(io::parse(f.out)["positivity"] == true);
}

TEST_CASE("deflator in F and in G") {
    const Run f = run({"deflator", "--input", data("six_point.json")});
    REQUIRE(f.code == 0);
    CHECK(io::parse(f.out)["feasible"] == true);
    // S = 1 + X is a G-asset with a drift; its deflator is the 6-point one.
    const Run g = run({"deflator", "--input", data("six_point.json"), "--filtration", "g"});
    REQUIRE(g.code == 0);
    const io::Json j = io::parse(g.out);
    CHECK(j["deflator"][3][1] == "3/2");
    CHECK(run({"deflator", "--input", data("four_point.json")}).code == 2);
}

TEST_CASE("validate exit codes") {
    const Run good = run({"validate", "--input", data("six_point.json")});
    CHECK(good.code == 0);
    CHECK(io::parse(good.out)["valid"] == true);
    const Run bad = run({"validate", "--input", data("broken_refinement.json")});
    CHECK(bad.code == 1);
    CHECK(io::parse(bad.out)["filtration"]["code"] == "REFINEMENT_BROKEN");
    const std::string partition = scratch("overlap.json", R"({"outcomes":["a","b"],"prob":["1/2","1/2"],
        "filtration":{"initial":[["a"],["a","b"]],"ticks":[]}})");
    const Run overlap = run({"validate", "--input", partition});
    CHECK(overlap.code == 1);
    CHECK(io::parse(overlap.out)["code"] == "BAD_PARTITION");
}

TEST_CASE("schema errors exit with 2") {
    CHECK(run({"drift", "--input", scratch("garbage.json", "{oops")}).code == 2);
    CHECK(run({"drift", "--input", data("four_point.json")}).code == 2);
    CHECK(run({"check-viability", "--input", scratch("rational.json", R"({"outcomes":["a"],"prob":["x/2"],
        "filtration":{"initial":[["a"]],"ticks":[]}})")})
              .code == 2);
    CHECK(run({"drift", "--input", scratch("missing.json", "")}).code == 2);
    CHECK(run({"kernel-eval", "--input", scratch("list.json", "[1, 2]")}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"drift"}).code == 2);
}

TEST_CASE("kernel-eval and diagnose-series") {
    const Run k = run({"kernel-eval", "--input", data("inaccessible_event.json")});
    REQUIRE(k.code == 0);
    const io::Json j = io::parse(k.out);
    CHECK(j["K"][0] == "5/4");
    CHECK(j["reduced_equation"] == true);
    CHECK(j["jump_quotient"] == true);

    const Run c = run({"kernel-eval", "--input",
                       scratch("k1.json", R"({"kind":"continuous","J":["1","2"],"zeta":[["1","0"],["0","1"]],"phi":["3","4"]})")});
    REQUIRE(c.code == 0);
    CHECK(io::parse(c.out)["K"] == io::Json::array({"4", "6"}));

    const Run s = run({"diagnose-series", "--input", data("series_flat.json")});
    REQUIRE(s.code == 0);
    CHECK(io::parse(s.out)["verdict"] == "finite");
    CHECK(io::parse(s.out)["approximate"] == true);
    CHECK(run({"diagnose-series", "--input", scratch("empty_series.json", "{}")}).code == 1);
}

TEST_CASE("generate is deterministic and round-trips") {
    const Run a = run({"generate", "--seed", "5"});
    const Run b = run({"generate", "--seed", "5"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run({"generate", "--seed", "6"}).out != a.out);
    const std::string path = scratch("generated.json", a.out);
    CHECK(run({"validate", "--input", path}).code == 0);

    const Run failing = run({"generate", "--seed", "5", "--force-failure"});
    const Run verdict = run({"check-viability", "--input", scratch("failing.json", failing.out)});
    REQUIRE(verdict.code == 0);
    CHECK(io::parse(verdict.out)["verdict"] == false);

    const Run many = run({"generate", "--seed", "5", "--instances", "3", "--kind", "progressive"});
    REQUIRE(many.code == 0);
    CHECK(io::parse(many.out)["instances"].size() == 3);
    CHECK(run({"generate", "--kind", "sideways"}).code == 2);
}

TEST_CASE("verify-theorems report") {
    const Run r = run({"verify-theorems", "--seed", "3", "--instances", "8"});
    REQUIRE(r.code == 0);
    const io::Json j = io::parse(r.out);
    CHECK(j["status"] == "ok");
    CHECK(j["instances"] == 8);
    CHECK_FALSE(j["checks"].empty());
    CHECK(run({"verify-theorems", "--seed", "3", "--instances", "8", "--workers", "3"}).out == r.out);
}
