#include "ifslab/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace ifslab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void fail_at(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

[[noreturn]] void fail_line(std::size_t line, const std::string& msg) {
  throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) fail_at(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail_at(path, "number is not finite");
  return v;
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail_at(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail_at(path, std::string("missing field '") + key + "'");
  return *it;
}

std::vector<Symbol> symbols_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail_at(path, "expected an array of integers");
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) fail_at(path + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(j[i].get<Symbol>());
  }
  return out;
}

Json words_to_json(const std::vector<std::vector<Symbol>>& words) {
  Json arr = Json::array();
  for (const auto& w : words) arr.push_back(w);
  return arr;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && t.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || t.empty()) throw ValidationError("not a number: '" + t + "'");
  if (!std::isfinite(v)) throw ValidationError("number is not finite: '" + t + "'");
  return v;
}

// ---------------------------------------------------------------------------

Json to_json(const Vector& v) { return Json(std::vector<double>(v.coords().begin(), v.coords().end())); }

Json to_json(const PointCloud& c) {
  Json arr = Json::array();
  for (const auto& p : c.points()) arr.push_back(to_json(p));
  return arr;
}

Json to_json(const DriverSpec& d) {
  return std::visit(Overloaded{
                        [](const driver::Cyclic& c) {
                          return Json{{"kind", "cyclic"}, {"permutation", c.permutation}};
                        },
                        [](const driver::IidRandom& r) {
                          return Json{{"kind", "iid"},
                                      {"seed", r.seed},
                                      {"weights", r.weights},
                                      {"generator", "splitmix64-counter"}};
                        },
                        [](const driver::DisjunctiveEnumeration& e) {
                          return Json{{"kind", "disjunctive"}, {"alphabet", e.alphabet}};
                        },
                        [](const driver::Custom& c) {
                          return Json{{"kind", "custom"}, {"alphabet", c.alphabet}, {"symbols", c.symbols}};
                        },
                    },
                    d.kind());
}

Json to_json(const OmegaEstimate& e) {
  Json j;
  j["count"] = e.representatives.size();
  j["representatives"] = to_json(e.representatives);
  j["burn_in"] = e.burn_in;
  j["tail_length"] = e.tail_length;
  j["cluster_eps"] = e.cluster_eps;
  if (!e.driver.empty()) j["driver"] = e.driver;
  if (e.x0) j["x0"] = to_json(*e.x0);
  return j;
}

Json to_json(const InvarianceReport& r) {
  return Json{{"forward_excess", r.forward_excess},
              {"backward_excess", r.backward_excess},
              {"symmetric", r.symmetric},
              {"tolerance", r.tolerance},
              {"set_size", r.set_size},
              {"image_size", r.image_size},
              {"subinvariant", r.subinvariant()},
              {"superinvariant", r.superinvariant()},
              {"invariant", r.invariant()}};
}

Json to_json(const MonotoneDistanceReport& r) {
  Json j{{"verdict", to_string(r.verdict)},
         {"hypothesis", to_json(r.hypothesis)},
         {"slack", r.slack},
         {"max_increase", r.max_increase},
         {"bounded", r.bounded},
         {"initial_distance", r.distances.empty() ? 0.0 : r.distances.front()},
         {"final_distance", r.distances.empty() ? 0.0 : r.distances.back()},
         {"infimum", r.infimum},
         {"tail_oscillation", r.tail_oscillation}};
  j["first_violation"] = r.first_violation ? Json(*r.first_violation) : Json(nullptr);
  return j;
}

Json to_json(const MinimalityReport& r) {
  return Json{{"verdict", to_string(r.verdict)},
              {"hypothesis", to_json(r.hypothesis)},
              {"tolerance", r.tolerance},
              {"min_distance", r.min_distance},
              {"max_outside", r.max_outside},
              {"intersects", r.intersects},
              {"contains", r.contains}};
}

Json to_json(const CompareReport& r) {
  return Json{{"distance", r.distance}, {"tolerance", r.tolerance}, {"passed", r.passed}};
}

Json to_json(const SolveReport& r) {
  Json j;
  j["converged"] = r.converged;
  j["final_point"] = to_json(r.final_point);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["max_norm"] = r.max_norm;
  j["max_norm_first_half"] = r.max_norm_first_half;
  j["omega"] = r.omega ? to_json(*r.omega) : Json(nullptr);
  return j;
}

Json to_json(const DisjunctivityReport& r) {
  Json j{{"window", r.window},
         {"alphabet", r.alphabet},
         {"prefix_length", r.prefix_length},
         {"total_words", r.total_words},
         {"found", r.found},
         {"missing_count", r.missing_count},
         {"missing", words_to_json(r.missing)},
         {"complete", r.complete()}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

Json to_json(const RepetitivenessReport& r) {
  Json counts = Json::object();
  for (int s = 1; s <= r.alphabet; ++s) counts[std::to_string(s)] = r.count(s);
  return Json{{"alphabet", r.alphabet}, {"counts", counts}, {"unseen", r.unseen}, {"all_seen", r.all_seen()}};
}

Json to_json(const TreeLipschitzEstimate& r) {
  return Json{{"value", r.value},
              {"pairs_evaluated", r.pairs_evaluated},
              {"pairs_skipped", r.pairs_skipped},
              {"degenerate", r.degenerate}};
}

// ---------------------------------------------------------------------------

Vector vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected a nonempty array of numbers");
  std::vector<double> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  return Vector(std::move(c));
}

DriverSpec driver_from_json(const Json& j, int default_alphabet, const std::string& path) {
  if (j.is_string()) return driver_from_json(Json{{"kind", j}}, default_alphabet, path);
  const Json& kind_j = field(j, "kind", path);
  if (!kind_j.is_string()) fail_at(path + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  auto alphabet = [&] {
    if (auto it = j.find("alphabet"); it != j.end()) {
      if (!it->is_number_integer()) fail_at(path + ".alphabet", "expected an integer");
      return it->get<int>();
    }
    return default_alphabet;
  };
  try {
    if (kind == "cyclic") {
      if (auto it = j.find("permutation"); it != j.end()) {
        return DriverSpec::cyclic(symbols_from_json(*it, path + ".permutation"));
      }
      return DriverSpec::cyclic_identity(alphabet());
    }
    if (kind == "iid") {
      std::uint64_t seed = 0;
      if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer()) fail_at(path + ".seed", "expected an integer");
        seed = it->get<std::uint64_t>();
      }
      if (auto it = j.find("weights"); it != j.end()) {
        if (!it->is_array()) fail_at(path + ".weights", "expected an array");
        std::vector<double> w;
        for (std::size_t i = 0; i < it->size(); ++i) {
          w.push_back(number_at((*it)[i], path + ".weights[" + std::to_string(i) + "]"));
        }
        return DriverSpec::iid(seed, std::move(w));
      }
      return DriverSpec::iid_uniform(seed, alphabet());
    }
    if (kind == "disjunctive") return DriverSpec::disjunctive(alphabet());
    if (kind == "custom") {
      return DriverSpec::custom(symbols_from_json(field(j, "symbols", path), path + ".symbols"), alphabet());
    }
  } catch (const ValidationError& e) {
    if (std::string(e.what()).rfind(path, 0) == 0) throw;
    fail_at(path, e.what());
  } catch (const SymbolError& e) {
    fail_at(path, e.what());
  }
  fail_at(path + ".kind", "unknown driver kind '" + kind + "' (expected cyclic, iid, disjunctive, custom)");
}

MapSpec map_from_json(const Json& j, const std::string& path) {
  const Json& type_j = field(j, "type", path);
  if (!type_j.is_string()) fail_at(path + ".type", "expected a string");
  const std::string type = type_j.get<std::string>();
  try {
    if (type == "hyperplane") {
      return MapSpec::hyperplane(vector_from_json(field(j, "normal", path), path + ".normal"),
                                 number_at(field(j, "offset", path), path + ".offset"));
    }
    if (type == "subspace") {
      if (auto it = j.find("constraints"); it != j.end()) {
        if (!it->is_array() || it->empty()) fail_at(path + ".constraints", "expected a nonempty array of rows");
        std::vector<Vector> rows;
        std::vector<double> rhs;
        for (std::size_t i = 0; i < it->size(); ++i) {
          const std::string rp = path + ".constraints[" + std::to_string(i) + "]";
          const Vector full = vector_from_json((*it)[i], rp);
          if (full.dim() < 2) fail_at(rp, "expected a1,...,ad,b");
          rows.emplace_back(std::vector<double>(full.coords().begin(), full.coords().end() - 1));
          rhs.push_back(full[full.dim() - 1]);
        }
        return MapSpec::subspace(AffineSubspace::from_constraints(rows, rhs));
      }
      const Vector anchor = vector_from_json(field(j, "anchor", path), path + ".anchor");
      std::vector<Vector> dirs;
      if (auto it = j.find("basis"); it != j.end()) {
        if (!it->is_array()) fail_at(path + ".basis", "expected an array of vectors");
        for (std::size_t i = 0; i < it->size(); ++i) {
          dirs.push_back(vector_from_json((*it)[i], path + ".basis[" + std::to_string(i) + "]"));
        }
      }
      return MapSpec::subspace(AffineSubspace::from_spanning_set(anchor, dirs));
    }
    if (type == "halfspace") {
      return MapSpec::convex(ConvexBody(Halfspace{vector_from_json(field(j, "normal", path), path + ".normal"),
                                                  number_at(field(j, "offset", path), path + ".offset")}));
    }
    if (type == "ball") {
      return MapSpec::convex(ConvexBody(Ball{vector_from_json(field(j, "center", path), path + ".center"),
                                             number_at(field(j, "radius", path), path + ".radius")}));
    }
    if (type == "box") {
      return MapSpec::convex(ConvexBody(Box{vector_from_json(field(j, "lower", path), path + ".lower"),
                                            vector_from_json(field(j, "upper", path), path + ".upper")}));
    }
    if (type == "affine") {
      const Json& lin = field(j, "linear", path);
      if (!lin.is_array() || lin.empty()) fail_at(path + ".linear", "expected an array of rows");
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        const Vector r = vector_from_json(lin[i], path + ".linear[" + std::to_string(i) + "]");
        rows.emplace_back(r.coords().begin(), r.coords().end());
      }
      return MapSpec::affine(Matrix(rows), vector_from_json(field(j, "shift", path), path + ".shift"));
    }
  } catch (const DimensionError& e) {
    fail_at(path, e.what());
  } catch (const ValidationError& e) {
    if (std::string(e.what()).rfind(path, 0) == 0) throw;
    fail_at(path, e.what());
  }
  fail_at(path + ".type", "unknown map type '" + type +
                              "' (expected hyperplane, subspace, halfspace, ball, box, affine)");
}

Json map_to_json(const MapSpec& m) {
  return std::visit(
      Overloaded{
          [](const maps::HyperplaneProjection& h) {
            return Json{{"type", "hyperplane"}, {"normal", to_json(h.plane.normal())}, {"offset", h.plane.offset()}};
          },
          [](const maps::SubspaceProjection& s) {
            Json basis = Json::array();
            for (const auto& e : s.subspace.basis()) basis.push_back(to_json(e));
            return Json{{"type", "subspace"}, {"anchor", to_json(s.subspace.anchor())}, {"basis", basis}};
          },
          [](const maps::ConvexProjection& c) {
            return std::visit(Overloaded{
                                  [](const Halfspace& h) {
                                    return Json{{"type", "halfspace"}, {"normal", to_json(h.normal)}, {"offset", h.offset}};
                                  },
                                  [](const Ball& b) {
                                    return Json{{"type", "ball"}, {"center", to_json(b.center)}, {"radius", b.radius}};
                                  },
                                  [](const Box& b) {
                                    return Json{{"type", "box"}, {"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}};
                                  },
                              },
                              c.body.shape());
          },
          [](const maps::Affine& a) {
            return Json{{"type", "affine"}, {"linear", a.linear.to_rows()}, {"shift", to_json(a.shift)}};
          },
      },
      m.kind());
}

// ---------------------------------------------------------------------------

void write_orbit_csv(std::ostream& os, const Orbit& orbit) {
  if (orbit.points.empty()) throw ValidationError("write_orbit_csv: empty orbit");
  const std::size_t d = orbit.points.front().dim();
  os << "n,symbol";
  for (std::size_t i = 1; i <= d; ++i) os << ",x" << i;
  os << '\n';
  for (std::size_t n = 0; n < orbit.points.size(); ++n) {
    os << n << ',';
    if (n > 0) os << orbit.symbols[n - 1];
    for (double c : orbit.points[n].coords()) os << ',' << format_double(c);
    os << '\n';
  }
}

Orbit read_orbit_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line)) throw ValidationError("orbit CSV: missing header");
  ++lineno;
  const auto header = split_csv(trim(line));
  if (header.size() < 3 || header[0] != "n" || header[1] != "symbol") {
    fail_line(lineno, "expected header 'n,symbol,x1,...,xd'");
  }
  const std::size_t d = header.size() - 2;
  Orbit orbit;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(trim(line));
    if (f.size() != d + 2) fail_line(lineno, "expected " + std::to_string(d + 2) + " fields, got " + std::to_string(f.size()));
    const std::size_t n = orbit.points.size();
    if (f[0] != std::to_string(n)) fail_line(lineno, "expected step index " + std::to_string(n));
    if (n == 0) {
      if (!f[1].empty()) fail_line(lineno, "row 0 must have an empty symbol");
    } else {
      int s = 0;
      auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), s);
      if (ec != std::errc{} || ptr != f[1].data() + f[1].size() || s < 1) fail_line(lineno, "bad symbol '" + f[1] + "'");
      orbit.symbols.push_back(s);
    }
    std::vector<double> c;
    try {
      for (std::size_t i = 0; i < d; ++i) c.push_back(parse_double(f[i + 2]));
    } catch (const ValidationError& e) {
      fail_line(lineno, e.what());
    }
    orbit.points.emplace_back(std::move(c));
  }
  if (orbit.points.empty()) throw ValidationError("orbit CSV: no rows");
  return orbit;
}

void write_cloud_csv(std::ostream& os, const PointCloud& c) {
  for (const auto& p : c.points()) {
    for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << format_double(p[i]);
    os << '\n';
  }
}

PointCloud read_cloud_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  PointCloud cloud;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> c;
    try {
      for (const auto& f : split_csv(trim(line))) c.push_back(parse_double(f));
      cloud.insert(Vector(std::move(c)));
    } catch (const Error& e) {
      fail_line(lineno, e.what());
    }
  }
  if (cloud.empty()) throw ValidationError("cloud CSV: no points");
  return cloud;
}

LinearSystem read_system_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Row> rows;
  std::size_t width = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> v;
    try {
      for (const auto& f : split_csv(t)) v.push_back(parse_double(f));
    } catch (const ValidationError& e) {
      fail_line(lineno, e.what());
    }
    if (v.size() < 2) fail_line(lineno, "expected a1,...,ad,b");
    if (width == 0) width = v.size();
    if (v.size() != width) fail_line(lineno, "expected " + std::to_string(width) + " fields, got " + std::to_string(v.size()));
    const double b = v.back();
    v.pop_back();
    Vector a(std::move(v));
    if (a.norm() < kDegenerateNormal) fail_line(lineno, "zero row");
    rows.push_back(Row{std::move(a), b});
  }
  if (rows.empty()) throw ValidationError("system CSV: no rows");
  return LinearSystem(std::move(rows));
}

void write_system_csv(std::ostream& os, const LinearSystem& sys) {
  for (const auto& r : sys.rows()) {
    for (double c : r.coeffs.coords()) os << format_double(c) << ',';
    os << format_double(r.rhs) << '\n';
  }
}

std::vector<Symbol> read_sequence(std::istream& is) {
  std::vector<Symbol> seq;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    int s = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
    if (ec != std::errc{} || ptr != t.data() + t.size()) fail_line(lineno, "expected an integer symbol, got '" + t + "'");
    if (s < 1) fail_line(lineno, "symbols are 1-based, got " + t);
    seq.push_back(s);
  }
  return seq;
}

void write_sequence(std::ostream& os, const std::vector<Symbol>& seq) {
  for (Symbol s : seq) os << s << '\n';
}

// ---------------------------------------------------------------------------

void write_svg(std::ostream& os, const Orbit& orbit, std::size_t burn_in, const PointCloud& representatives) {
  constexpr double kSize = 800.0;
  constexpr double kMargin = 0.05 * kSize;
  if (orbit.points.empty() || orbit.points.front().dim() != 2) {
    throw ValidationError("write_svg: only 2D orbits can be plotted");
  }
  const std::size_t start = std::min(burn_in, orbit.points.size() - 1);

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto grow = [&](const Vector& p) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  };
  for (std::size_t n = start; n < orbit.points.size(); ++n) grow(orbit.points[n]);
  for (const auto& p : representatives.points()) grow(p);
  // equal scale on both axes; degenerate extents get a unit box
  double span = std::max(xmax - xmin, ymax - ymin);
  if (!(span > 0.0)) span = 1.0;
  const double cx = 0.5 * (xmin + xmax);
  const double cy = 0.5 * (ymin + ymax);
  const double scale = (kSize - 2.0 * kMargin) / span;
  auto px = [&](double x) { return kSize / 2.0 + (x - cx) * scale; };
  auto py = [&](double y) { return kSize / 2.0 - (y - cy) * scale; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  os << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  os << "<g fill=\"#888888\">\n";
  std::set<std::pair<long, long>> drawn;  // one dot per pixel
  char buf[96];
  for (std::size_t n = start; n < orbit.points.size(); ++n) {
    const double x = px(orbit.points[n][0]);
    const double y = py(orbit.points[n][1]);
    if (!drawn.emplace(std::lround(x), std::lround(y)).second) continue;
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.5\"/>\n", x, y);
    os << buf;
  }
  os << "</g>\n<g fill=\"#d62728\">\n";
  for (const auto& p : representatives.points()) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\"/>\n", px(p[0]), py(p[1]));
    os << buf;
  }
  os << "</g>\n</svg>\n";
}

}  // namespace ifslab
