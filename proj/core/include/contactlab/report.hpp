#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "contactlab/bounds.hpp"
#include "contactlab/catalog.hpp"
#include "contactlab/foliation.hpp"

namespace contactlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchema = "contactlab/1";

// Finite numbers as JSON numbers, ±infinity as the strings "infinity"/"-infinity".
Json json_number(double v);
// {"value": v, "provenance": p}
Json measured(double v, const char* provenance = "sampled");
Json to_json(const Vec3& v);
Json to_json(const Region& r);
Json to_json(const Grid& g);
Json to_json(const Quantity& q);
Json to_json(const BoundReport& r);
Json to_json(const CompatClass& c);
Json to_json(const MgEstimate& m);
Json to_json(const ContactPointData& d);
Json to_json(const HEndomorphism& h);
Json to_json(const Singularity& s);
Json to_json(const ClosedLeafRecord& r);
Json to_json(const SphereClass& c);
Json to_json(const TauScanResult& t);
Json to_json(const HessianCheck& h);
Json to_json(const RefValue& r);
// Leaf count, end classes and singularities; polylines go to CSV/SVG.
Json trace_summary(const FoliationTrace& t);

struct RunReport {
    std::string command;
    std::string spec_name;
    std::string spec_hash;
    std::string spec_source;  // "catalog" or a file path
    Json parameters = Json::object();
    Json results = Json::object();
    std::vector<std::string> warnings;
    std::optional<double> wall_time;
};

Json to_json(const RunReport& r);

}  // namespace contactlab
