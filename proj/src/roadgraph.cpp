#include "cvrp/roadgraph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>
#include <unordered_set>

namespace cvrp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool RoadGraph::has_vertex(int id) const {
    return find_vertex(id) != nullptr;
}

const RoadGraph::Vertex* RoadGraph::find_vertex(int id) const {
    for (const Vertex& v : vertices) {
        if (v.id == id) return &v;
    }
    return nullptr;
}

void RoadGraph::validate() const {
    std::unordered_set<int> ids;
    for (const Vertex& v : vertices) {
        if (!ids.insert(v.id).second) {
            throw Error("duplicate vertex id " + std::to_string(v.id));
        }
    }
    for (const Edge& e : edges) {
        if (e.u == e.v) throw Error("self-edge at vertex " + std::to_string(e.u));
        if (!ids.count(e.u) || !ids.count(e.v)) {
            throw Error("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                        ") references an unknown vertex");
        }
        if (e.weight < 0.0) throw Error("negative edge");
    }
}

bool ShortestPathResult::reachable(int vertex) const {
    auto it = dist.find(vertex);
    return it != dist.end() && it->second != kInf;
}

ShortestPathResult dijkstra(const RoadGraph& g, int source, DijkstraStats* stats) {
    if (!g.has_vertex(source)) {
        throw Error("unknown source vertex " + std::to_string(source));
    }

    std::unordered_map<int, std::vector<std::pair<int, double>>> adj;
    adj.reserve(g.vertices.size());
    for (const RoadGraph::Vertex& v : g.vertices) adj[v.id];
    for (const RoadGraph::Edge& e : g.edges) {
        if (e.weight < 0.0) throw Error("negative edge");
        adj[e.u].emplace_back(e.v, e.weight);
        if (!g.directed) adj[e.v].emplace_back(e.u, e.weight);
    }

    ShortestPathResult result;
    result.source = source;
    for (const RoadGraph::Vertex& v : g.vertices) result.dist[v.id] = kInf;
    result.dist[source] = 0.0;

    using Entry = std::pair<double, int>;  // (distance, vertex); vertex breaks ties
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    heap.emplace(0.0, source);
    if (stats) stats->pushes++;

    std::unordered_set<int> settled;
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > result.dist[u] || settled.count(u)) {
            if (stats) stats->stale_pops++;
            continue;
        }
        settled.insert(u);
        if (stats) {
            stats->pops++;
            stats->settled_distances.push_back(d);
        }
        for (const auto& [v, w] : adj[u]) {
            const double alt = d + w;
            if (alt < result.dist[v]) {
                result.dist[v] = alt;
                result.prev[v] = u;
                heap.emplace(alt, v);
                if (stats) stats->pushes++;
            }
        }
    }
    return result;
}

std::vector<int> reconstruct_path(const ShortestPathResult& r, int target) {
    auto it = r.dist.find(target);
    if (it == r.dist.end()) {
        throw Error("unknown target vertex " + std::to_string(target));
    }
    if (it->second == kInf) {
        throw Error("no path from " + std::to_string(r.source) + " to " + std::to_string(target));
    }
    std::vector<int> path{target};
    int cur = target;
    while (cur != r.source) {
        cur = r.prev.at(cur);
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

RoadGraph complete_graph_from_points(const std::vector<std::pair<int, GeoPoint>>& points,
                                     const Metric& metric) {
    if (points.empty()) throw Error("empty point set");
    RoadGraph g;
    g.directed = false;
    std::unordered_set<int> seen;
    for (const auto& [id, loc] : points) {
        if (!seen.insert(id).second) {
            throw Error("duplicate vertex id " + std::to_string(id));
        }
        g.vertices.push_back({id, loc});
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            g.edges.push_back({points[i].first, points[j].first,
                               metric.distance(points[i].second, points[j].second)});
        }
    }
    return g;
}

}  // namespace cvrp
