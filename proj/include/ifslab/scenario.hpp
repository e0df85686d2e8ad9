#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ifslab/drivers.hpp"
#include "ifslab/ifs.hpp"
#include "ifslab/omega.hpp"
#include "ifslab/serialize.hpp"

namespace ifslab {

/// A reference set named in a config: an explicit point list, or one of the
/// constructors
///   "square_corners"          pairwise intersections of the system's lines
///   "triangle_boundary(h)"    boundary of the triangle cut out by the first
///                             three lines, exact for distance queries and
///                             sampled at step h where a cloud is needed
struct ReferenceSet {
  std::string label;
  PointCloud cloud;
  std::optional<SegmentUnion> segments;
  double spacing = 0.0;
};

struct CheckSpec {
  std::string kind;  // invariance | subinvariance | superinvariance | monotone_distance
                     // | minimality | compare_omegas | reference_hausdorff | representative_count
  std::optional<double> tol;
  std::optional<Json> set;              // reference for monotone_distance / minimality / reference_hausdorff
  std::optional<DriverSpec> driver;     // compare_omegas: second driver
  std::optional<Vector> x0;             // compare_omegas: second start
  std::optional<std::size_t> expected;  // representative_count
};

struct Scenario {
  std::string name;
  std::size_t dim = 0;
  std::vector<MapSpec> maps;
  Json maps_json;
  DriverSpec driver = DriverSpec::disjunctive(1);
  Vector x0;
  std::size_t steps = 0;
  std::size_t burn_in = 0;
  double cluster_eps = 1e-6;
  double tolerance = 1e-9;
  std::vector<CheckSpec> checks;
  std::optional<Json> reference_set;
  bool svg = true;

  IFSystem system() const { return IFSystem(maps); }
};

/// Parses and validates a scenario. Syntax errors report line and column;
/// semantic errors report the JSON path of the offending value. Both throw
/// ValidationError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
Json scenario_to_json(const Scenario& s);

ReferenceSet resolve_reference(const Json& ref, const IFSystem& sys, const std::string& path);

struct ScenarioResult {
  Orbit orbit;
  OmegaEstimate omega;
  Json report;
  bool passed = false;
  std::vector<std::string> failed_checks;
};

/// Runs the orbit, estimates omega and evaluates every requested check.
ScenarioResult run_scenario(const Scenario& s);

/// Writes <name>_orbit.csv, <name>_omega.json, <name>_report.json and, for
/// 2D scenarios with svg enabled, <name>.svg. Returns the written paths.
std::vector<std::filesystem::path> write_scenario_outputs(const Scenario& s, const ScenarioResult& r,
                                                          const std::filesystem::path& dir);

/// Built-in reproductions of the four classic projection pictures.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

}  // namespace ifslab
