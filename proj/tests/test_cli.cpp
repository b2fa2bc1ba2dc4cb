#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "spreaddim/io.hpp"
#include "spreaddim/oracles.hpp"

using namespace spreaddim;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "spreaddim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("spreaddim_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void put(const std::string& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("grid specs") {
    CHECK_FALSE(cli::parse_grid("auto"));
    const auto g = cli::parse_grid("1:100:3");
    REQUIRE(g);
    CHECK(g->size() == 3);
    CHECK(g->front() == 1);
    CHECK(g->back() == 100);
    CHECK((*g)[1] == doctest::Approx(10));
    CHECK((*cli::parse_grid("0:1:5:lin"))[1] == doctest::Approx(0.25));
    CHECK(cli::parse_grid("0.5,2,3")->size() == 3);
    CHECK(cli::parse_grid("7")->size() == 1);
    CHECK_THROWS(cli::parse_grid("1:2"));
    CHECK_THROWS(cli::parse_grid("1:2:x"));
    CHECK_THROWS(cli::parse_grid("3,2"));
}

TEST_CASE("thread resolution") {
    CHECK(cli::resolve_threads(3) == 3);
    CHECK(cli::resolve_threads(0) >= 1);
}

TEST_CASE("circle end to end: sample, spread, estimate") {
    TempDir dir;
    REQUIRE(run({"sample", "--shape", "circle", "--count", "1000", "--seed", "7", "--out", dir / "c.csv"}).code == 0);
    const auto spread = run({"spread", "--in", dir / "c.csv", "--metric", "geodesic-circle", "--out", dir / "curve.csv"});
    REQUIRE(spread.code == 0);
    CHECK(spread.out.empty());
    const auto est = run({"estimate", "--curve", dir / "curve.csv", "--out", dir / "est.json"});
    REQUIRE(est.code == 0);
    CHECK(est.out.empty());
    const auto j = nlohmann::json::parse(slurp(dir / "est.json"));
    CHECK(j["schema_version"] == 1);
    CHECK(j["rounded_dimension"] == 1);
    CHECK(j.contains("plateau"));
    CHECK(j.contains("knee"));
    CHECK(j["method_metadata"]["knee_method"] == "chord_max_distance");

    const auto direct = run({"estimate", "--in", dir / "c.csv", "--metric", "geodesic-circle"});
    REQUIRE(direct.code == 0);
    CHECK(nlohmann::json::parse(direct.out)["peak_g"] == j["peak_g"]);
}

TEST_CASE("runs are byte-stable") {
    TempDir dir;
    const auto a = run({"sample", "--shape", "cube", "--n", "2", "--count", "300", "--seed", "4"});
    const auto b = run({"sample", "--shape", "cube", "--n", "2", "--count", "300", "--seed", "4"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    put(dir / "c.csv", a.out);
    const auto s1 = run({"spread", "--in", dir / "c.csv", "--threads", "1", "--block-size", "17"});
    const auto s2 = run({"spread", "--in", dir / "c.csv", "--threads", "3", "--block-size", "512"});
    REQUIRE(s1.code == 0);
    CHECK(s1.out == s2.out);
}

TEST_CASE("oracle CSV matches the closed forms") {
    const auto r = run({"oracle", "--shape", "circle", "--t", "1:20:100"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const auto curve = io::read_curve_csv(in);
    REQUIRE(curve.points.size() == 100);
    for (const auto& p : curve.points) {
        CHECK(p.g_dim == doctest::Approx(oracle::circle_g_dimension(p.t)).epsilon(1e-14));
        if (p.t > 1) CHECK(*p.f_dim == doctest::Approx(oracle::circle_f_dimension(p.t)).epsilon(1e-14));
    }
    CHECK(run({"oracle", "--shape", "sphere", "--n", "2", "--t", "1"}).out.find("3.834304671334") !=
          std::string::npos);
    CHECK(run({"oracle", "--shape", "interval", "--t", "0,1"}).code == cli::domain_error);
}

TEST_CASE("one-point space has unit spread and zero dimension") {
    TempDir dir;
    put(dir / "m.csv", "0\n");
    const auto r = run({"spread", "--in", dir / "m.csv", "--kind", "matrix", "--grid", "0.1:10:5"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    for (const auto& p : io::read_curve_csv(in).points) {
        CHECK(p.sigma == 1.0);
        CHECK(p.g_dim == 0.0);
    }
}

TEST_CASE("exit codes") {
    TempDir dir;
    put(dir / "ragged.csv", "0,1\n1\n");
    const auto parse = run({"spread", "--in", dir / "ragged.csv", "--kind", "matrix"});
    CHECK(parse.code == cli::parse_error);
    CHECK(parse.err.find("line 2") != std::string::npos);

    put(dir / "asym.csv", "0,1\n2,0\n");
    CHECK(run({"spread", "--in", dir / "asym.csv", "--kind", "matrix"}).code == cli::validation_error);
    CHECK(run({"validate", "--in", dir / "asym.csv"}).code == cli::validation_error);
    put(dir / "ok.csv", "0,1\n1,0\n");
    CHECK(run({"validate", "--in", dir / "ok.csv"}).code == cli::ok);

    CHECK(run({"spread", "--in", dir / "ok.csv", "--kind", "matrix", "--grid", "-1,1"}).code ==
          cli::domain_error);
    CHECK(run({"smooth", "--in", dir / "ok.csv", "--k", "5"}).code == cli::validation_error);
    CHECK(run({"sample", "--shape", "sphere:0"}).code == cli::validation_error);
    CHECK(run({"no-such-command"}).code != 0);
}

TEST_CASE("smooth and local") {
    TempDir dir;
    put(dir / "p.csv", "0\n1\n10\n");
    const auto s = run({"smooth", "--in", dir / "p.csv", "--k", "2"});
    REQUIRE(s.code == 0);
    CHECK(s.out == "0.5\n0.5\n5.5\n");
    CHECK(run({"smooth", "--in", dir / "p.csv", "--k", "1", "--exclude-self"}).out == "1\n0\n1\n");
    CHECK(run({"smooth", "--in", dir / "p.csv", "--k-percent", "100"}).out.starts_with("3.6666"));
    CHECK(run({"local", "--in", dir / "p.csv", "--size", "2", "--center-index", "2"}).out == "10\n1\n");
    CHECK(run({"local", "--in", dir / "p.csv", "--size", "2", "--center-random", "--seed", "1"}).code == 0);
}
