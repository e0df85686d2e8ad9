#include "ifslab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ifslab {

namespace {

[[noreturn]] void fail_at(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

std::size_t count_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail_at(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

double positive_at(const Json& j, const std::string& path) {
  if (!j.is_number() || !(j.get<double>() > 0.0) || !std::isfinite(j.get<double>())) {
    fail_at(path, "expected a positive number");
  }
  return j.get<double>();
}

std::vector<const maps::HyperplaneProjection*> planar_lines(const IFSystem& sys, const std::string& path) {
  if (sys.dim() != 2) fail_at(path, "named reference sets need a 2D system");
  std::vector<const maps::HyperplaneProjection*> lines;
  for (const auto& m : sys.maps()) {
    if (const auto* h = std::get_if<maps::HyperplaneProjection>(&m.kind())) lines.push_back(h);
  }
  return lines;
}

// Intersection point of two lines in the plane, if they are not parallel.
std::optional<Vector> intersect(const Hyperplane& p, const Hyperplane& q) {
  const double a = p.normal()[0], b = p.normal()[1];
  const double c = q.normal()[0], d = q.normal()[1];
  const double det = a * d - b * c;
  if (std::abs(det) <= 1e-12 * p.normal().norm() * q.normal().norm()) return std::nullopt;
  return Vector{(p.offset() * d - b * q.offset()) / det, (a * q.offset() - p.offset() * c) / det};
}

void require_known_keys(const Json& j, const std::set<std::string>& keys, const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.count(it.key())) fail_at(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

const std::set<std::string> kCheckKinds = {"invariance",      "subinvariance", "superinvariance",
                                           "monotone_distance", "minimality",  "compare_omegas",
                                           "reference_hausdorff", "representative_count"};

}  // namespace

ReferenceSet resolve_reference(const Json& ref, const IFSystem& sys, const std::string& path) {
  ReferenceSet out;
  if (ref.is_string()) {
    const std::string name = ref.get<std::string>();
    out.label = name;
    if (name == "square_corners") {
      const auto lines = planar_lines(sys, path);
      PointCloud c(2);
      for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j)
          if (auto p = intersect(lines[i]->plane, lines[j]->plane)) c.insert(*p);
      if (c.empty()) fail_at(path, "square_corners: the system's lines do not intersect");
      out.cloud = std::move(c);
      return out;
    }
    const std::string prefix = "triangle_boundary(";
    if (name.rfind(prefix, 0) == 0 && name.back() == ')') {
      double spacing = 0.0;
      try {
        spacing = parse_double(name.substr(prefix.size(), name.size() - prefix.size() - 1));
      } catch (const ValidationError&) {
        fail_at(path, "triangle_boundary(h): h must be a number");
      }
      if (!(spacing > 0.0)) fail_at(path, "triangle_boundary(h): h must be positive");
      const auto lines = planar_lines(sys, path);
      if (lines.size() < 3) fail_at(path, "triangle_boundary needs three lines");
      const auto v12 = intersect(lines[0]->plane, lines[1]->plane);
      const auto v23 = intersect(lines[1]->plane, lines[2]->plane);
      const auto v13 = intersect(lines[0]->plane, lines[2]->plane);
      if (!v12 || !v23 || !v13) fail_at(path, "triangle_boundary: the first three lines must pairwise intersect");
      out.segments = SegmentUnion::polygon({*v12, *v23, *v13});
      out.spacing = spacing;
      out.cloud = out.segments->sample(spacing);
      return out;
    }
    fail_at(path, "unknown reference set '" + name + "' (expected square_corners, triangle_boundary(h) or a point list)");
  }
  const Json& pts = ref.is_object() && ref.contains("points") ? ref["points"] : ref;
  if (!pts.is_array() || pts.empty()) fail_at(path, "expected a named set or a nonempty list of points");
  PointCloud c;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vector p = vector_from_json(pts[i], path + "[" + std::to_string(i) + "]");
    if (p.dim() != sys.dim()) fail_at(path + "[" + std::to_string(i) + "]", "point dimension does not match the system");
    c.insert(p);
  }
  out.label = "points";
  out.cloud = std::move(c);
  return out;
}

Scenario parse_scenario(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": JSON syntax error (" + e.what() + ")");
  }
  if (!j.is_object()) throw ValidationError("scenario: top level must be an object");
  require_known_keys(j,
                     {"name", "dim", "maps", "driver", "x0", "steps", "burn_in", "cluster_eps", "tolerance",
                      "checks", "reference_set", "svg"},
                     "");

  Scenario s;
  s.name = j.value("name", std::string("scenario"));
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos) fail_at("name", "must be a plain file stem");

  if (!j.contains("maps") || !j["maps"].is_array() || j["maps"].empty()) fail_at("maps", "expected a nonempty array");
  s.maps_json = j["maps"];
  for (std::size_t i = 0; i < j["maps"].size(); ++i) {
    s.maps.push_back(map_from_json(j["maps"][i], "maps[" + std::to_string(i) + "]"));
  }
  s.dim = s.maps.front().dim();
  for (std::size_t i = 1; i < s.maps.size(); ++i) {
    if (s.maps[i].dim() != s.dim) fail_at("maps[" + std::to_string(i) + "]", "dimension differs from maps[0]");
  }
  if (j.contains("dim") && count_at(j["dim"], "dim") != s.dim) fail_at("dim", "does not match the maps");

  const int n_maps = static_cast<int>(s.maps.size());
  if (!j.contains("driver")) fail_at("driver", "missing");
  s.driver = driver_from_json(j["driver"], n_maps, "driver");
  if (s.driver.alphabet() > n_maps) {
    fail_at("driver", "alphabet " + std::to_string(s.driver.alphabet()) + " exceeds the number of maps (" +
                          std::to_string(n_maps) + ")");
  }

  if (!j.contains("x0")) fail_at("x0", "missing");
  s.x0 = vector_from_json(j["x0"], "x0");
  if (s.x0.dim() != s.dim) fail_at("x0", "dimension does not match the maps");

  if (!j.contains("steps")) fail_at("steps", "missing");
  s.steps = count_at(j["steps"], "steps");
  s.burn_in = j.contains("burn_in") ? count_at(j["burn_in"], "burn_in") : s.steps / 10;
  if (s.burn_in > s.steps) fail_at("burn_in", "exceeds steps");
  if (j.contains("cluster_eps")) s.cluster_eps = positive_at(j["cluster_eps"], "cluster_eps");
  if (j.contains("tolerance")) s.tolerance = positive_at(j["tolerance"], "tolerance");
  if (j.contains("svg")) {
    if (!j["svg"].is_boolean()) fail_at("svg", "expected true or false");
    s.svg = j["svg"].get<bool>();
  }

  const IFSystem sys = s.system();
  if (j.contains("reference_set")) {
    resolve_reference(j["reference_set"], sys, "reference_set");
    s.reference_set = j["reference_set"];
  }

  if (j.contains("checks")) {
    if (!j["checks"].is_array()) fail_at("checks", "expected an array");
    for (std::size_t i = 0; i < j["checks"].size(); ++i) {
      const std::string path = "checks[" + std::to_string(i) + "]";
      const Json& cj = j["checks"][i];
      CheckSpec c;
      if (cj.is_string()) {
        c.kind = cj.get<std::string>();
      } else if (cj.is_object()) {
        require_known_keys(cj, {"kind", "tol", "set", "driver", "x0", "expected"}, path);
        if (!cj.contains("kind") || !cj["kind"].is_string()) fail_at(path + ".kind", "expected a string");
        c.kind = cj["kind"].get<std::string>();
        if (cj.contains("tol")) c.tol = positive_at(cj["tol"], path + ".tol");
        if (cj.contains("set")) {
          resolve_reference(cj["set"], sys, path + ".set");
          c.set = cj["set"];
        }
        if (cj.contains("driver")) {
          c.driver = driver_from_json(cj["driver"], n_maps, path + ".driver");
          if (c.driver->alphabet() > n_maps) fail_at(path + ".driver", "alphabet exceeds the number of maps");
        }
        if (cj.contains("x0")) {
          c.x0 = vector_from_json(cj["x0"], path + ".x0");
          if (c.x0->dim() != s.dim) fail_at(path + ".x0", "dimension does not match the maps");
        }
        if (cj.contains("expected")) c.expected = count_at(cj["expected"], path + ".expected");
      } else {
        fail_at(path, "expected a check name or object");
      }
      if (!kCheckKinds.count(c.kind)) fail_at(path + ".kind", "unknown check '" + c.kind + "'");
      const bool needs_set = c.kind == "monotone_distance" || c.kind == "minimality" || c.kind == "reference_hausdorff";
      if (needs_set && !c.set && !s.reference_set) fail_at(path, c.kind + " needs 'set' or a scenario reference_set");
      if (c.kind == "representative_count" && !c.expected) fail_at(path, "representative_count needs 'expected'");
      s.checks.push_back(std::move(c));
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["dim"] = s.dim;
  j["maps"] = s.maps_json;
  j["driver"] = to_json(s.driver);
  j["x0"] = to_json(s.x0);
  j["steps"] = s.steps;
  j["burn_in"] = s.burn_in;
  j["cluster_eps"] = s.cluster_eps;
  j["tolerance"] = s.tolerance;
  if (s.reference_set) j["reference_set"] = *s.reference_set;
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    Json cj{{"kind", c.kind}};
    if (c.tol) cj["tol"] = *c.tol;
    if (c.set) cj["set"] = *c.set;
    if (c.driver) cj["driver"] = to_json(*c.driver);
    if (c.x0) cj["x0"] = to_json(*c.x0);
    if (c.expected) cj["expected"] = *c.expected;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["svg"] = s.svg;
  return j;
}

// ---------------------------------------------------------------------------

namespace {

Json driver_audit(const std::vector<Symbol>& symbols, int alphabet) {
  Json audit;
  audit["repetitive"] = to_json(check_repetitive(symbols, alphabet));
  Json windows = Json::array();
  std::uint64_t words = 1;
  for (int m = 1; m <= 3; ++m) {
    words *= static_cast<std::uint64_t>(alphabet);
    if (words > (std::uint64_t{1} << 20)) break;
    Json w = to_json(check_disjunctive(symbols, m, alphabet));
    w.erase("missing");  // the counts suffice in a run report
    windows.push_back(w);
  }
  audit["disjunctive"] = windows;
  return audit;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s) {
  const IFSystem sys = s.system();
  ScenarioResult r;
  r.orbit = run_orbit(sys, s.x0, s.driver, s.steps);
  r.omega = estimate_omega(r.orbit, s.burn_in, s.cluster_eps);
  r.omega.driver = s.driver.name();

  double max_norm = 0.0;
  for (const auto& p : r.orbit.points) max_norm = std::max(max_norm, p.norm());

  Json checks = Json::array();
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const CheckSpec& c = s.checks[i];
    const std::string path = "checks[" + std::to_string(i) + "]";
    const double tol = c.tol.value_or(s.tolerance);
    Json out{{"kind", c.kind}, {"tolerance", tol}};
    bool passed = false;

    auto reference = [&] { return resolve_reference(c.set ? *c.set : *s.reference_set, sys, path + ".set"); };

    if (c.kind == "invariance" || c.kind == "subinvariance" || c.kind == "superinvariance") {
      const auto inv = check_invariance(sys, r.omega.representatives, tol);
      out["report"] = to_json(inv);
      passed = c.kind == "invariance" ? inv.invariant()
               : c.kind == "subinvariance" ? inv.subinvariant()
                                           : inv.superinvariant();
    } else if (c.kind == "monotone_distance") {
      const ReferenceSet ref = reference();
      out["set"] = ref.label;
      const auto rep = ref.segments ? check_monotone_distance(sys, r.orbit, *ref.segments, ref.spacing, tol)
                                    : check_monotone_distance(sys, r.orbit, ref.cloud, tol);
      out["report"] = to_json(rep);
      passed = rep.verdict == Verdict::Pass;
    } else if (c.kind == "minimality") {
      const ReferenceSet ref = reference();
      out["set"] = ref.label;
      const auto rep = check_minimality(sys, r.omega, ref.cloud, tol);
      out["report"] = to_json(rep);
      passed = rep.verdict == Verdict::Pass;
    } else if (c.kind == "reference_hausdorff") {
      const ReferenceSet ref = reference();
      const double d = hausdorff(r.omega.representatives, ref.cloud);
      out["set"] = ref.label;
      out["reference_size"] = ref.cloud.size();
      out["distance"] = d;
      passed = d <= tol;
    } else if (c.kind == "compare_omegas") {
      const DriverSpec drv = c.driver.value_or(s.driver);
      const Vector x0 = c.x0.value_or(s.x0);
      const Orbit other = run_orbit(sys, x0, drv, s.steps);
      OmegaEstimate other_omega = estimate_omega(other, s.burn_in, s.cluster_eps);
      other_omega.driver = drv.name();
      const auto cmp = compare_omegas(r.omega, other_omega, tol);
      out["second_driver"] = to_json(drv);
      out["second_x0"] = to_json(x0);
      out["second_count"] = other_omega.representatives.size();
      out["report"] = to_json(cmp);
      passed = cmp.passed;
    } else if (c.kind == "representative_count") {
      out["expected"] = *c.expected;
      out["count"] = r.omega.representatives.size();
      passed = r.omega.representatives.size() == *c.expected;
    }
    out["verdict"] = passed ? "pass" : "fail";
    if (!passed) r.failed_checks.push_back(path + ":" + c.kind);
    checks.push_back(out);
  }
  r.passed = r.failed_checks.empty();

  Json maps = Json::array();
  for (const auto& m : sys.maps()) maps.push_back(m.describe());
  r.report = Json{{"scenario", s.name},
                  {"dim", s.dim},
                  {"maps", maps},
                  {"driver", to_json(s.driver)},
                  {"x0", to_json(s.x0)},
                  {"steps", s.steps},
                  {"burn_in", s.burn_in},
                  {"cluster_eps", s.cluster_eps},
                  {"max_norm", max_norm},
                  {"final_point", to_json(r.orbit.points.back())},
                  {"omega", to_json(r.omega)},
                  {"driver_audit", driver_audit(r.orbit.symbols, sys.alphabet())},
                  {"checks", checks},
                  {"failed_checks", r.failed_checks},
                  {"passed", r.passed}};
  return r;
}

std::vector<std::filesystem::path> write_scenario_outputs(const Scenario& s, const ScenarioResult& r,
                                                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& file) {
    written.push_back(dir / file);
    std::ofstream os(written.back());
    if (!os) throw Error("cannot write " + written.back().string());
    return os;
  };
  {
    auto os = open(s.name + "_orbit.csv");
    write_orbit_csv(os, r.orbit);
  }
  {
    auto os = open(s.name + "_omega.json");
    os << to_json(r.omega).dump(2) << '\n';
  }
  {
    auto os = open(s.name + "_report.json");
    os << r.report.dump(2) << '\n';
  }
  if (s.svg && s.dim == 2) {
    auto os = open(s.name + ".svg");
    write_svg(os, r.orbit, s.burn_in, r.omega.representatives);
  }
  return written;
}

// ---------------------------------------------------------------------------

std::vector<std::string> preset_names() {
  return {"example1_intersecting", "example2_parallel", "example3_square", "example4_triangle"};
}

std::string preset_text(const std::string& name) {
  Json j;
  auto line = [](double a, double b, double c) {
    return Json{{"type", "hyperplane"}, {"normal", {a, b}}, {"offset", c}};
  };
  if (name == "example1_intersecting") {
    // two lines through the origin at 45 degrees; alternating projections
    j = Json{{"name", name},
             {"dim", 2},
             {"maps", {line(1, -1, 0), line(0, 1, 0)}},
             {"driver", {{"kind", "cyclic"}, {"permutation", {1, 2}}}},
             {"x0", {0.0, 2.0}},
             {"steps", 200},
             {"burn_in", 100},
             {"cluster_eps", 1e-6},
             {"tolerance", 1e-9},
             {"reference_set", Json::array({Json::array({0.0, 0.0})})},
             {"checks",
              {Json{{"kind", "representative_count"}, {"expected", 1}}, Json{{"kind", "invariance"}},
               Json{{"kind", "reference_hausdorff"}, {"tol", 1e-8}}, Json{{"kind", "monotone_distance"}}}}};
  } else if (name == "example2_parallel") {
    j = Json{{"name", name},
             {"dim", 2},
             {"maps", {line(0, 1, 0), line(0, 1, 1)}},
             {"driver", {{"kind", "cyclic"}, {"permutation", {1, 2}}}},
             {"x0", {0.0, 0.3}},
             {"steps", 100},
             {"burn_in", 10},
             {"cluster_eps", 1e-6},
             {"tolerance", 1e-9},
             {"reference_set", {{0.0, 0.0}, {0.0, 1.0}}},
             {"checks",
              {Json{{"kind", "representative_count"}, {"expected", 2}}, Json{{"kind", "invariance"}},
               Json{{"kind", "reference_hausdorff"}, {"tol", 1e-12}}}}};
  } else if (name == "example3_square") {
    // lines x=1, x=0, y=0, y=1; maps 1 and 3 are orthogonal
    j = Json{{"name", name},
             {"dim", 2},
             {"maps", {line(1, 0, 1), line(1, 0, 0), line(0, 1, 0), line(0, 1, 1)}},
             {"driver", {{"kind", "disjunctive"}}},
             {"x0", {0.3, 0.7}},
             {"steps", 10000},
             {"burn_in", 1000},
             {"cluster_eps", 1e-6},
             {"tolerance", 1e-9},
             {"reference_set", "square_corners"},
             {"checks",
              {Json{{"kind", "representative_count"}, {"expected", 4}}, Json{{"kind", "invariance"}},
               Json{{"kind", "reference_hausdorff"}}, Json{{"kind", "monotone_distance"}},
               Json{{"kind", "minimality"}}}}};
  } else if (name == "example4_triangle") {
    // lines y=0, x=0, x+y=1 meeting at (0,0), (1,0), (0,1)
    j = Json{{"name", name},
             {"dim", 2},
             {"maps", {line(0, 1, 0), line(1, 0, 0), line(1, 1, 1)}},
             {"driver", {{"kind", "disjunctive"}}},
             {"x0", {2.0, 3.0}},
             {"steps", 100000},
             {"burn_in", 10000},
             {"cluster_eps", 1e-2},
             {"tolerance", 0.05},
             {"reference_set", "triangle_boundary(0.005)"},
             {"checks",
              {Json{{"kind", "invariance"}}, Json{{"kind", "superinvariance"}, {"tol", 2 * 1e-2 + 1e-3}},
               Json{{"kind", "reference_hausdorff"}}, Json{{"kind", "monotone_distance"}, {"tol", 1e-9}},
               Json{{"kind", "compare_omegas"}, {"driver", {{"kind", "iid"}, {"seed", 20240601}}}}}}};
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return j.dump(2) + "\n";
}

}  // namespace ifslab
