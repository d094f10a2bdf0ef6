#pragma once

#include <string>

#include <json.hpp>

#include "ktaxi/dual_certificate.hpp"
#include "ktaxi/embedding.hpp"
#include "ktaxi/instances.hpp"
#include "ktaxi/offline.hpp"

namespace ktaxi {

using Json = nlohmann::json;

// Every document carries "format": "<kind>/v1"; readers reject other versions.

Json tree_to_json(const WeightedTree& t);                 // tree/v1
WeightedTree tree_from_json(const Json& j);

Json requests_to_json(const RequestSequence& seq);
RequestSequence requests_from_json(const Json& j);

Json scenario_to_json(const Scenario& s);                 // scenario/v1
Scenario scenario_from_json(const Json& j);

Json trace_to_json(const Trace& t);                       // trace/v1

// Frontier entries are edge ids; edge v joins vertex v to its parent.
Json certificate_to_json(const AltitudeCertificate& c);   // dualcert/v1
AltitudeCertificate certificate_from_json(const Json& j);

Json metric_to_json(const MetricSpace& m);                // metric/v1
MetricSpace metric_from_json(const Json& j);

Json schedule_to_json(const OfflineSchedule& s);

// FNV-1a (64 bit) of the compact dump of scenario_to_json, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ktaxi
