#pragma once

#include "cvrp/fleet.hpp"
#include "cvrp/geo.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace cvrp {

// A serviced location. id 0 is reserved for the depot and never appears
// among clients.
struct Client {
    int id = 0;
    GeoPoint location{};
    int demand = 1;
};

struct VehicleAssignment {
    int type_id = 0;        // index into FleetSpec::types
    int vehicle_index = 0;  // consumption order within the type, 0-based

    bool operator==(const VehicleAssignment&) const = default;
};

struct KMeansResult {
    std::map<int, int> assignments;     // client id -> cluster index in [0, k)
    std::vector<GeoPoint> centroids;    // one per cluster
    double objective_j = 0.0;           // sum over clusters of squared distance to centroid
    int iterations = 0;                 // recompute+reassign cycles after the initial pass
    std::vector<double> objective_trace;  // J after every assignment pass
    std::size_t assign_distance_evals = 0;  // point-to-centroid evaluations in assignment passes
};

// Lloyd iteration over (id, location) pairs: assign each point to the
// nearest centroid, recompute centroids as member means, repeat until no
// assignment changes or max_iter cycles. Initial centroids are k member
// points sampled without replacement from the seeded RNG, so output is
// deterministic per seed. Distance ties go to the lowest cluster index.
//
// If a pass leaves a cluster empty its centroid is re-seeded to the point
// farthest from its assigned centroid; after two consecutive failed
// repairs the current state is returned (callers split degenerate data by
// other means).
KMeansResult kmeans(const std::vector<std::pair<int, GeoPoint>>& points, int k,
                    std::uint64_t rng_seed, int max_iter = 100, const Metric& metric = {});

// One node of the recursive clustering record. Leaves carry a vehicle and
// satisfy demand <= capacity; internal nodes hold the disjoint union of
// their children's members.
struct PhaseNode {
    std::vector<int> members;  // client ids
    GeoPoint centroid{};
    std::unique_ptr<PhaseNode> left;
    std::unique_ptr<PhaseNode> right;
    std::optional<VehicleAssignment> assigned_vehicle{};

    bool is_leaf() const { return !left && !right; }
};

// Recursive bisection: a node whose demand fits some remaining vehicle
// becomes a leaf and consumes the smallest vehicle that fits (best fit);
// anything larger is split by kmeans(k=2) and recursed, left = cluster 0.
// A degenerate bisection (one empty side) is retried once with a fresh
// derived seed, then the node is split at the median by (lat, lon, id).
// Child seeds derive from the parent's, so the tree is a pure function of
// (clients, plan, rng_seed).
//
// Throws "plan capacity less than total demand" up front and
// "unassignable client" when a lone client fits no remaining vehicle.
PhaseNode recursive_kmeans(const std::vector<Client>& clients, const FleetSpec& spec,
                           const FleetPlan& plan, std::uint64_t rng_seed,
                           int kmeans_max_iter = 100, const Metric& metric = {});

// Leaves in depth-first left-to-right order.
std::vector<const PhaseNode*> collect_leaves(const PhaseNode& root);

}  // namespace cvrp
