#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifslab/drivers.hpp"
#include "ifslab/ifs.hpp"
#include "ifslab/kaczmarz.hpp"
#include "ifslab/omega.hpp"

namespace ifslab {

using Json = nlohmann::ordered_json;

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

Json to_json(const Vector& v);
Json to_json(const PointCloud& c);
Json to_json(const DriverSpec& d);
Json to_json(const OmegaEstimate& e);
Json to_json(const InvarianceReport& r);
Json to_json(const MonotoneDistanceReport& r);
Json to_json(const MinimalityReport& r);
Json to_json(const CompareReport& r);
Json to_json(const SolveReport& r);
Json to_json(const DisjunctivityReport& r);
Json to_json(const RepetitivenessReport& r);
Json to_json(const TreeLipschitzEstimate& r);

/// Errors carry the JSON path of the offending value ("maps[2].normal: ...").
Vector vector_from_json(const Json& j, const std::string& path);
DriverSpec driver_from_json(const Json& j, int default_alphabet, const std::string& path);
MapSpec map_from_json(const Json& j, const std::string& path);
Json map_to_json(const MapSpec& m);

// Orbit CSV: header "n,symbol,x1,...,xd"; row 0 has an empty symbol field.
void write_orbit_csv(std::ostream& os, const Orbit& orbit);
Orbit read_orbit_csv(std::istream& is);

// Point cloud CSV: one point per row, no header.
void write_cloud_csv(std::ostream& os, const PointCloud& c);
PointCloud read_cloud_csv(std::istream& is);

// Linear system CSV: "a1,...,ad,b" per row, no header.
LinearSystem read_system_csv(std::istream& is);
void write_system_csv(std::ostream& os, const LinearSystem& sys);

// Symbol sequence file: one 1-based integer per line.
std::vector<Symbol> read_sequence(std::istream& is);
void write_sequence(std::ostream& os, const std::vector<Symbol>& seq);

/// 800x800 scatter of the orbit tail (grey) and omega representatives (red),
/// autoscaled with 5% margins. 2D only.
void write_svg(std::ostream& os, const Orbit& orbit, std::size_t burn_in, const PointCloud& representatives);

}  // namespace ifslab
