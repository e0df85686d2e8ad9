#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifslab/cli.hpp"
#include "ifslab/scenario.hpp"
#include "ifslab/serialize.hpp"
#include "test_support.hpp"

using namespace ifslab;
using ifslab::testing::Gen;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ifslab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("property: doubles survive format/parse bit for bit") {
  SplitMix64 rng(1);
  Gen g(2);
  int checked = 0;
  while (checked < 5000) {
    double v;
    if (checked % 2) {
      const std::uint64_t bits = rng.next();
      std::memcpy(&v, &bits, sizeof v);
      if (!std::isfinite(v)) continue;
    } else {
      v = g.uniform(-1e3, 1e3);
    }
    CHECK(same_bits(parse_double(format_double(v)), v));
    ++checked;
  }
  CHECK_THROWS_AS(parse_double("1.5x"), ValidationError);
  CHECK_THROWS_AS(parse_double(""), ValidationError);
}

TEST_CASE("property: orbit CSV round trip is exact") {
  Gen g(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 1 + g.index(4);
    std::vector<MapSpec> maps;
    const std::size_t m = 1 + g.index(3);
    for (std::size_t i = 0; i < m; ++i) maps.push_back(MapSpec::hyperplane(g.nonzero_vec(dim), g.normal()));
    const IFSystem sys(std::move(maps));
    const Orbit o = run_orbit(sys, g.vec(dim), DriverSpec::iid_uniform(static_cast<std::uint64_t>(trial), sys.alphabet()),
                              g.index(50));
    std::stringstream ss;
    write_orbit_csv(ss, o);
    const Orbit back = read_orbit_csv(ss);
    REQUIRE(back.points.size() == o.points.size());
    CHECK(back.symbols == o.symbols);
    bool exact = true;
    for (std::size_t n = 0; n < o.points.size(); ++n) {
      for (std::size_t k = 0; k < dim; ++k) exact = exact && same_bits(back.points[n][k], o.points[n][k]);
    }
    CHECK(exact);
  }
}

TEST_CASE("orbit CSV errors name the line") {
  std::istringstream bad_header("a,b,c\n");
  CHECK_THROWS_WITH_AS(read_orbit_csv(bad_header), doctest::Contains("line 1"), ValidationError);
  std::istringstream bad_number("n,symbol,x1,x2\n0,,0,0\n1,1,zz,0\n");
  CHECK_THROWS_WITH_AS(read_orbit_csv(bad_number), doctest::Contains("line 3"), ValidationError);
  std::istringstream short_row("n,symbol,x1,x2\n0,,0,0\n1,1,0\n");
  CHECK_THROWS_WITH_AS(read_orbit_csv(short_row), doctest::Contains("line 3"), ValidationError);
}

TEST_CASE("cloud, system and sequence files round trip") {
  const PointCloud c(std::vector<Vector>{{0.1, 0.2}, {1.0 / 3.0, -7.0}});
  std::stringstream cs;
  write_cloud_csv(cs, c);
  const PointCloud cb = read_cloud_csv(cs);
  CHECK(cb.points() == c.points());

  const LinearSystem sys({{Vector{1.0, 2.0}, 3.0}, {Vector{-0.5, 1e-7}, 0.1}});
  std::stringstream ss;
  write_system_csv(ss, sys);
  const LinearSystem sb = read_system_csv(ss);
  REQUIRE(sb.size() == 2);
  CHECK(sb.rows()[1].coeffs == sys.rows()[1].coeffs);
  CHECK(sb.rows()[1].rhs == sys.rows()[1].rhs);

  const std::vector<Symbol> seq{1, 3, 2, 2};
  std::stringstream qs;
  write_sequence(qs, seq);
  CHECK(read_sequence(qs) == seq);
  std::istringstream bad("1\n0\n");
  CHECK_THROWS_AS(read_sequence(bad), Error);
}

TEST_CASE("maps round trip through JSON") {
  const std::vector<MapSpec> maps{
      MapSpec::hyperplane(Vector{1.0, 2.0}, 3.0),
      MapSpec::subspace(AffineSubspace::from_spanning_set(Vector{1.0, 1.0}, {Vector{1.0, -1.0}})),
      MapSpec::convex(ConvexBody(Halfspace{Vector{0.0, 1.0}, 2.0})),
      MapSpec::convex(ConvexBody(Ball{Vector{1.0, 0.0}, 0.5})),
      MapSpec::convex(ConvexBody(Box{Vector{0.0, 0.0}, Vector{1.0, 2.0}})),
      MapSpec::affine(Matrix({{0.0, -0.5}, {0.5, 0.0}}), Vector{1.0, 1.0}),
  };
  Gen g(6);
  for (const auto& m : maps) {
    const MapSpec back = map_from_json(map_to_json(m), "maps[0]");
    for (int k = 0; k < 20; ++k) {
      const Vector x = g.vec(2);
      // subspace bases are re-orthonormalized on load
      CHECK(distance(back.apply(x), m.apply(x)) <= 1e-14 * (1.0 + x.norm()));
    }
  }
  CHECK_THROWS_WITH_AS(map_from_json(Json{{"type", "hyperplane"}, {"normal", {0.0, 0.0}}, {"offset", 1.0}}, "maps[2]"),
                       doctest::Contains("maps[2]"), ValidationError);
  CHECK_THROWS_WITH_AS(map_from_json(Json{{"type", "spiral"}}, "maps[0]"), doctest::Contains("maps[0]"), ValidationError);
  CHECK_THROWS_AS(map_from_json(Json{{"type", "affine"}, {"linear", {{2.0, 0.0}, {0.0, 1.0}}}, {"shift", {0.0, 0.0}}},
                                "maps[0]"),
                  ValidationError);
}

TEST_CASE("driver JSON") {
  CHECK(generate(driver_from_json(Json("cyclic"), 3, "driver"), 4) == std::vector<Symbol>{1, 2, 3, 1});
  CHECK(driver_from_json(Json{{"kind", "iid"}, {"seed", 42}}, 3, "driver").alphabet() == 3);
  CHECK(generate(driver_from_json(Json{{"kind", "iid"}, {"seed", 42}}, 3, "driver"), 12) ==
        generate(DriverSpec::iid_uniform(42, 3), 12));
  CHECK(to_json(DriverSpec::iid_uniform(1, 2))["generator"] == "splitmix64-counter");
  CHECK_THROWS_WITH_AS(driver_from_json(Json{{"kind", "custom"}, {"symbols", {1, 3}}}, 2, "driver"),
                       doctest::Contains("driver"), ValidationError);
  CHECK_THROWS_AS(driver_from_json(Json{{"kind", "zigzag"}}, 2, "driver"), ValidationError);
}

TEST_CASE("scenario parsing") {
  SUBCASE("presets parse and survive a round trip") {
    for (const auto& name : preset_names()) {
      const Scenario s = parse_scenario(preset_text(name));
      CHECK(s.name == name);
      const Scenario again = parse_scenario(scenario_to_json(s).dump());
      CHECK(scenario_to_json(again) == scenario_to_json(s));
    }
    CHECK(preset_names().size() == 4);
  }
  SUBCASE("syntax errors report line and column") {
    CHECK_THROWS_WITH_AS(parse_scenario("{\n  \"name\": \"x\",\n  \"dim\": ,\n}"), doctest::Contains("line 3"),
                         ValidationError);
  }
  SUBCASE("unknown keys are rejected") {
    Json j = Json::parse(preset_text("example1_intersecting"));
    j["colour"] = "red";
    CHECK_THROWS_WITH_AS(parse_scenario(j.dump()), doctest::Contains("colour"), ValidationError);
  }
  SUBCASE("driver alphabet larger than the system") {
    Json j = Json::parse(preset_text("example1_intersecting"));
    j["driver"] = Json{{"kind", "disjunctive"}, {"alphabet", 3}};
    CHECK_THROWS_AS(parse_scenario(j.dump()), ValidationError);
  }
  SUBCASE("dimension mismatch") {
    Json j = Json::parse(preset_text("example1_intersecting"));
    j["x0"] = Json::array({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(parse_scenario(j.dump()), Error);
  }
}

TEST_CASE("cli: presets and run") {
  const fs::path dir = scratch("run");
  auto r = cli({"presets", "list"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("example3_square") != std::string::npos);

  const fs::path cfg = dir / "ex3.json";
  REQUIRE(cli({"presets", "write", "example3_square", "--out", cfg.string()}).code == kExitPass);
  r = cli({"run", cfg.string(), "--out-dir", dir.string()});
  CHECK(r.code == kExitPass);
  CHECK(fs::exists(dir / "example3_square_orbit.csv"));
  CHECK(fs::exists(dir / "example3_square_report.json"));
  CHECK(fs::exists(dir / "example3_square.svg"));
  const Json omega = Json::parse(read_file(dir / "example3_square_omega.json"));
  CHECK(omega["representatives"].size() == 4);

  // Re-clustering the written orbit reproduces the representatives exactly.
  const Scenario s = load_scenario(cfg);
  const fs::path re = dir / "re.json";
  r = cli({"omega", (dir / "example3_square_orbit.csv").string(), "--burn-in", std::to_string(s.burn_in), "--eps",
           format_double(s.cluster_eps), "--out", re.string()});
  CHECK(r.code == kExitPass);
  CHECK(Json::parse(read_file(re))["representatives"] == omega["representatives"]);

  CHECK(cli({"run", cfg.string(), "--out-dir", dir.string(), "--no-svg"}).code == kExitPass);
}

TEST_CASE("cli: failing checks exit 1, invalid input exits 2") {
  const fs::path dir = scratch("codes");
  Json j = Json::parse(preset_text("example2_parallel"));
  j["checks"] = Json::array({Json{{"kind", "representative_count"}, {"expected", 3}}});
  write_file(dir / "fail.json", j.dump());
  auto r = cli({"run", (dir / "fail.json").string(), "--out-dir", dir.string(), "--no-svg"});
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.out.find("FAILED") != std::string::npos);

  j = Json::parse(preset_text("example2_parallel"));
  j["driver"] = Json{{"kind", "custom"}, {"symbols", {1, 2, 3}}};
  write_file(dir / "bad_symbol.json", j.dump());
  r = cli({"run", (dir / "bad_symbol.json").string(), "--out-dir", dir.string()});
  CHECK(r.code == kExitInvalid);
  CHECK_FALSE(r.err.empty());

  write_file(dir / "broken.json", "{\n\"name\": 1,,\n}");
  r = cli({"run", (dir / "broken.json").string(), "--out-dir", dir.string()});
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("line 2") != std::string::npos);

  CHECK(cli({"run", (dir / "missing.json").string()}).code == kExitInvalid);
  CHECK(cli({"frobnicate"}).code == kExitInvalid);
  CHECK(cli({}).code == kExitInvalid);
  CHECK(cli({"presets", "write", "nope"}).code == kExitInvalid);
  CHECK(cli({"--help"}).code == kExitPass);
}

TEST_CASE("cli: driver gen and audit") {
  const fs::path dir = scratch("driver");
  CHECK(cli({"driver", "gen", "--kind", "cyclic", "--n", "5"}).out == "1 2 1 2 1\n");
  CHECK(cli({"driver", "gen", "--kind", "disjunctive", "--n", "8", "-N", "2"}).out == "1 2 1 1 1 2 2 1\n");
  CHECK(cli({"driver", "gen", "--kind", "iid", "--n", "12", "-N", "3", "--seed", "42", "--format", "csv"}).out ==
        "3,1,1,2,1,3,1,3,2,2,1,2\n");
  CHECK(cli({"driver", "gen", "--kind", "cyclic", "--n", "4", "--perm", "2,1", "--format", "lines"}).out ==
        "2\n1\n2\n1\n");
  CHECK(cli({"driver", "gen", "--kind", "bogus", "--n", "4"}).code == kExitInvalid);

  const fs::path cyc = dir / "cyc.txt";
  REQUIRE(cli({"driver", "gen", "--kind", "cyclic", "--n", "50", "--format", "lines", "--out", cyc.string()}).code == 0);
  auto r = cli({"driver", "audit", cyc.string(), "--m", "2"});
  CHECK(r.code == kExitCheckFailed);
  const Json rep = Json::parse(r.out);
  CHECK(rep["missing_count"] == 2);

  const fs::path dis = dir / "dis.txt";
  REQUIRE(cli({"driver", "gen", "--kind", "disjunctive", "--n", "34", "--format", "lines", "--out", dis.string()}).code ==
          0);
  CHECK(cli({"driver", "audit", dis.string(), "--m", "3"}).code == kExitPass);
  // a symbol beyond the declared alphabet
  CHECK(cli({"driver", "audit", dis.string(), "--m", "1", "-N", "1"}).code == kExitInvalid);
}

TEST_CASE("cli: kaczmarz") {
  const fs::path dir = scratch("kaczmarz");
  write_file(dir / "sys.csv", "1,0,1\n0,1,2\n");
  auto r = cli({"kaczmarz", (dir / "sys.csv").string()});
  CHECK(r.code == kExitPass);
  const Json j = Json::parse(r.out);
  CHECK(j["converged"] == true);
  CHECK(j["final_point"] == Json::array({1.0, 2.0}));
  CHECK(j["iterations"].get<int>() <= 3);

  write_file(dir / "par.csv", "0,1,0\n0,1,1\n");
  r = cli({"kaczmarz", (dir / "par.csv").string(), "--max-iter", "200"});
  CHECK(r.code == kExitPass);
  const Json k = Json::parse(r.out);
  CHECK(k["converged"] == false);
  CHECK(k["omega"]["representatives"].size() == 2);

  r = cli({"kaczmarz", (dir / "sys.csv").string(), "--driver", "iid", "--seed", "3", "--x0", "5,5"});
  CHECK(r.code == kExitPass);
  CHECK(Json::parse(r.out)["converged"] == true);
  CHECK(cli({"kaczmarz", (dir / "sys.csv").string(), "--perm", "1,2,3"}).code == kExitInvalid);
  CHECK(cli({"kaczmarz", (dir / "sys.csv").string(), "--x0", "1,2,3"}).code == kExitInvalid);
}
