#pragma once

#include "cvrp/cluster.hpp"
#include "cvrp/fleet.hpp"
#include "cvrp/geo.hpp"
#include "cvrp/route.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cvrp {

// A solvable problem: depot (vertex 0), clients, fleet, distance mode.
struct Instance {
    std::string name;
    GeoPoint depot{};
    std::vector<Client> clients;
    FleetSpec fleet;
    DistanceMode distance_mode = DistanceMode::geo;
    std::optional<std::string> road_graph_path{};  // file the CLI should load

    // Throws on: no clients, client id < 1, duplicate ids, demand < 1,
    // invalid fleet, and in geo mode out-of-range coordinates or a
    // longitude span over 180 degrees (antimeridian-straddling data would
    // silently break the arithmetic-mean centroid).
    void validate() const;

    long long total_demand() const;
    Metric metric(double radius_km) const;
};

// Accepts the native JSON instance schema or TSPLIB/CVRPLIB text
// (NODE_COORD_SECTION, DEMAND_SECTION, DEPOT_SECTION, CAPACITY).
// EUC_2D coordinates run in planar mode with x,y kept verbatim; GEO
// coordinates are converted from TSPLIB's DDD.MM encoding to decimal
// degrees. Errors name the offending line or field.
Instance parse_instance(const std::string& path);
Instance parse_instance_text(const std::string& text, const std::string& origin);

std::string emit_instance_json(const Instance& inst);

// Instance-level feasibility view of a solution (adapts check_feasibility).
FeasibilityReport check_feasibility(const Solution& s, const Instance& inst);

}  // namespace cvrp
