#pragma once

#include "cvrp/instance.hpp"
#include "cvrp/merge.hpp"
#include "cvrp/route.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace cvrp {

struct PipelineConfig {
    std::uint64_t rng_seed = 0;
    double epsilon = 1e-9;       // Newton stopping tolerance
    double min_occupancy = 0.5;  // merge threshold
    double radius_km = 6371.0088;
    int kmeans_max_iter = 100;

    void validate() const;
};

// Artifacts of the first three stages (plan, cluster, merge).
struct ClusteringResult {
    NewtonResult newton;
    FleetPlan plan;
    PhaseNode tree;
    ClusterSet leaf_clusters;  // before merging
    ClusterSet clusters;       // after merging
    MergeLog merge_log;

    bool merge_flagged() const;
};

struct PipelineResult {
    ClusteringResult clustering;
    RoadGraph graph;
    Solution solution;
    FeasibilityReport feasibility;

    bool merge_flagged() const { return clustering.merge_flagged(); }
};

// plan_fleet -> recursive_kmeans -> merge_pass. Stage failures rethrow
// with the stage name prefixed.
ClusteringResult run_clustering(const Instance& inst, const PipelineConfig& cfg);

// The routing half: with no road graph, routes run over the complete
// graph induced by the instance's points and distance mode; a supplied
// graph must contain vertex 0 (depot) and every client id.
RoadGraph routing_graph(const Instance& inst, const PipelineConfig& cfg,
                        const RoadGraph* road_graph);

// All four stages plus the feasibility gate.
PipelineResult run_pipeline(const Instance& inst, const PipelineConfig& cfg,
                            const RoadGraph* road_graph = nullptr);

// The `solve` subcommand's JSON envelope: name, config, plan, clusters,
// merge log, solution, feasibility. Byte-deterministic for a fixed
// (instance, config) pair.
std::string solve_report_json(const Instance& inst, const PipelineConfig& cfg,
                              const PipelineResult& result);

// vertex id -> location map covering the depot, clients, and any located
// road-graph vertices (for GeoJSON output).
std::map<int, GeoPoint> location_index(const Instance& inst, const RoadGraph& g);

}  // namespace cvrp
