#pragma once

#include "cvrp/merge.hpp"
#include "cvrp/roadgraph.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace cvrp {

// Dijkstra results memoized per source so repeated legs from the same
// stop (and the depot) cost one run.
class PathCache {
public:
    explicit PathCache(const RoadGraph& g) : graph_(g) {}

    const ShortestPathResult& from(int source);
    const RoadGraph& graph() const { return graph_; }

private:
    const RoadGraph& graph_;
    std::unordered_map<int, ShortestPathResult> cache_;
};

struct Route {
    int cluster_id = 0;
    VehicleAssignment vehicle{};
    std::vector<int> stops;  // begins and ends with the depot
    std::vector<std::vector<int>> leg_paths;  // expanded vertex path per consecutive stop pair
    std::vector<double> leg_km;
    double total_km = 0.0;
    long long demand = 0;
    int capacity = 0;

    double occupancy() const {
        return capacity > 0 ? static_cast<double>(demand) / static_cast<double>(capacity) : 0.0;
    }
};

struct SolutionKpi {
    double mean_occupancy = 0.0;
    double min_occupancy = 0.0;
    int vehicle_count = 0;
    double total_km = 0.0;
};

struct Solution {
    std::vector<Route> routes;
    double total_cost_km = 0.0;
    SolutionKpi kpi{};
};

// Greedy nearest-neighbor tour over shortest-path distances: start at the
// depot, repeatedly move to the nearest unvisited member (ties to the
// lowest client id), then return to the depot. Every leg is a true
// shortest path expanded through the graph.
// Throws "disconnected cluster" naming the member that cannot be reached.
Route route_cluster(const OccupiedCluster& cluster, int depot_id, PathCache& cache);
Route route_cluster(const OccupiedCluster& cluster, int depot_id, const RoadGraph& g);

// One route per cluster, in ascending cluster id order, sharing a path
// cache across clusters.
Solution build_solution(const ClusterSet& set, const RoadGraph& g, int depot_id = 0);

// Re-sums every leg path against the graph's edge weights. Throws when a
// route references an unknown vertex or walks a nonexistent edge.
double evaluate_solution(const Solution& s, const RoadGraph& g);

enum class ViolationKind { degree, capacity, depot };

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind{};
    std::string detail;
};

struct FeasibilityReport {
    std::vector<Violation> violations;

    bool feasible() const { return violations.empty(); }
};

// Degree: every client is an interior stop of exactly one route.
// Capacity: per-route demand fits the assigned vehicle.
// Depot: every route starts and ends at the depot and never visits it
// in between. Violations are reported, never thrown.
FeasibilityReport check_feasibility(const Solution& s, const std::vector<Client>& clients,
                                    const FleetSpec& fleet, int depot_id = 0);

}  // namespace cvrp
