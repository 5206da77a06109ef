#pragma once

#include "cvrp/cluster.hpp"

#include <optional>
#include <vector>

namespace cvrp {

// A leaf cluster with the vehicle that serves it.
struct OccupiedCluster {
    int cluster_id = 0;
    std::vector<int> members;  // client ids
    GeoPoint centroid{};
    int capacity = 0;
    long long total_demand = 0;
    std::optional<VehicleAssignment> vehicle{};

    double occupancy() const {
        return static_cast<double>(total_demand) / static_cast<double>(capacity);
    }
};

struct ClusterSet {
    std::vector<OccupiedCluster> clusters;
};

// Numbers the tree's leaves 0,1,2,... in depth-first order and pairs each
// with its vehicle's capacity.
ClusterSet clusters_from_tree(const PhaseNode& root, const FleetSpec& spec,
                              const std::vector<Client>& clients);

struct MergePolicy {
    double min_occupancy = 0.5;
};

struct MergeLogEntry {
    int step = 0;  // 1-based
    bool merged = false;  // false: cluster flagged unmergeable
    int from_cluster = -1;
    int to_cluster = -1;                             // merged entries only
    double distance_km = 0.0;                        // centroid distance, merged entries only
    std::optional<VehicleAssignment> freed_vehicle;  // merged entries only
};

using MergeLog = std::vector<MergeLogEntry>;

struct MergeResult {
    ClusterSet clusters;
    MergeLog log;

    bool has_flagged() const;
};

// Repeatedly takes the lowest-occupancy cluster under the threshold and
// folds it into the nearest cluster (centroid to centroid) whose vehicle
// has room for the combined demand, freeing the absorbed cluster's
// vehicle. Ties on occupancy and on distance go to the lower cluster id.
// A cluster nothing can absorb is flagged once and skipped afterwards;
// surviving cluster ids are unchanged.
MergeResult merge_pass(const ClusterSet& set, const MergePolicy& policy,
                       const std::vector<Client>& clients, const Metric& metric = {});

}  // namespace cvrp
