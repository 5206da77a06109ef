#pragma once

#include "cvrp/geo.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace cvrp {

// City-as-graph: every location is a vertex, every drivable connection an
// edge weighted in kilometers. Plain data; dijkstra() validates what it
// needs so malformed graphs are testable.
struct RoadGraph {
    struct Vertex {
        int id = 0;
        std::optional<GeoPoint> location{};
    };
    struct Edge {
        int u = 0;
        int v = 0;
        double weight = 0.0;  // km, >= 0
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    bool directed = false;

    bool has_vertex(int id) const;
    const Vertex* find_vertex(int id) const;

    // Throws on duplicate vertex ids, self-edges, unknown endpoints, or
    // negative weights.
    void validate() const;
};

struct ShortestPathResult {
    int source = 0;
    // +infinity marks unreachable; serialization writes an explicit flag,
    // never the float sentinel.
    std::unordered_map<int, double> dist;
    // Present only for reached vertices other than the source.
    std::unordered_map<int, int> prev;

    bool reachable(int vertex) const;
};

// Optional instrumentation: heap traffic and the order distances settle in.
struct DijkstraStats {
    std::size_t pushes = 0;
    std::size_t pops = 0;        // non-stale extractions
    std::size_t stale_pops = 0;  // lazy-deletion skips
    std::vector<double> settled_distances;
};

// Single-source shortest paths with a binary min-heap and lazy deletion
// (stale entries are skipped at pop time instead of decrease-key).
// Throws "unknown source" and "negative edge".
ShortestPathResult dijkstra(const RoadGraph& g, int source, DijkstraStats* stats = nullptr);

// Source-to-target vertex sequence recovered from prev. Throws "no path"
// for unreachable targets and on unknown target ids.
std::vector<int> reconstruct_path(const ShortestPathResult& r, int target);

// Fallback when no road network is supplied: undirected complete graph
// over the points, weighted by the metric (haversine by default).
RoadGraph complete_graph_from_points(const std::vector<std::pair<int, GeoPoint>>& points,
                                     const Metric& metric = {});

}  // namespace cvrp
