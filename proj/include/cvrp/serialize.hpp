#pragma once

#include "cvrp/cluster.hpp"
#include "cvrp/fleet.hpp"
#include "cvrp/merge.hpp"
#include "cvrp/roadgraph.hpp"
#include "cvrp/route.hpp"

#include <map>
#include <string>

namespace cvrp {

// All emitters use insertion-ordered JSON and the library's shortest
// round-trip double formatting, so equal inputs serialize to equal bytes.

std::string plan_to_json(const FleetPlan& plan, const NewtonResult& newton,
                         const FleetSpec& spec);

std::string tree_to_json(const PhaseNode& root);

std::string cluster_set_to_json(const ClusterSet& set);
ClusterSet cluster_set_from_json(const std::string& text, const std::string& origin);

std::string merge_log_to_jsonl(const MergeLog& log);

std::string solution_to_json(const Solution& s);
std::string solution_to_csv(const Solution& s);
// vertex id -> position; throws when a route vertex has no entry
std::string solution_to_geojson(const Solution& s, const std::map<int, GeoPoint>& locations);

std::string feasibility_to_json(const FeasibilityReport& report);

RoadGraph road_graph_from_json(const std::string& text, const std::string& origin);
RoadGraph load_road_graph(const std::string& path);
std::string road_graph_to_json(const RoadGraph& g);

}  // namespace cvrp
