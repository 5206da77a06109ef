#pragma once

#include "cvrp/fleet.hpp"
#include "cvrp/geo.hpp"
#include "cvrp/roadgraph.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace cvrp {

// Exact reference implementations for tests and `eval --oracle`. Budgets
// are hard errors so nothing silently degrades into an approximation.
struct OracleBudget {
    int max_vertices = 12;
    int max_tour_stops = 10;
    int max_partition_points = 12;

    void validate() const;
};

struct ApspResult {
    std::vector<int> ids;  // ascending vertex ids
    std::vector<std::vector<double>> dist;  // dist[i][j] by position in ids, +inf unreachable

    double between(int u, int v) const;  // by vertex id
};

ApspResult apsp_floyd_warshall(const RoadGraph& g, const OracleBudget& budget = {});

using DistanceFn = std::function<double(int, int)>;

struct TourResult {
    std::vector<int> order;  // stop visiting order, depot excluded
    double cost = 0.0;       // both depot legs included
};

// Optimal depot-anchored open-and-close tour by subset dynamic
// programming over the stop set.
TourResult exact_tour(int depot, const std::vector<int>& stops, const DistanceFn& dist,
                      const OracleBudget& budget = {});

// Same answer by full permutation enumeration; among cost ties the
// lexicographically smallest order wins.
TourResult exact_tour_brute(int depot, const std::vector<int>& stops, const DistanceFn& dist,
                            const OracleBudget& budget = {});

// Sum over points of squared distance to their cluster's mean centroid.
// Shared evaluator so heuristic and oracle objectives are computed by the
// same code path.
double partition_objective(const std::vector<std::pair<int, GeoPoint>>& points,
                           const std::map<int, int>& assignments, const Metric& metric = {});

struct BipartitionResult {
    std::map<int, int> assignments;  // point id -> side 0 or 1
    double objective_j = 0.0;
};

// Exhaustive minimum over all 2^(n-1) - 1 nontrivial two-way splits (the
// first point is pinned to side 0).
BipartitionResult best_bipartition(const std::vector<std::pair<int, GeoPoint>>& points,
                                   const Metric& metric = {}, const OracleBudget& budget = {});

// Full enumeration of integer fleet vectors within the per-type bounds:
// minimum slack, then fewest vehicles, then lexicographically smallest.
FleetPlan exact_fleet(long long n, const FleetSpec& spec);

}  // namespace cvrp
