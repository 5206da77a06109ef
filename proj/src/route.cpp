#include "cvrp/route.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cvrp {

const ShortestPathResult& PathCache::from(int source) {
    auto it = cache_.find(source);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(source, dijkstra(graph_, source)).first->second;
}

Route route_cluster(const OccupiedCluster& cluster, int depot_id, PathCache& cache) {
    if (cluster.members.empty())
        throw Error("cluster " + std::to_string(cluster.cluster_id) + " has no members");
    if (!cluster.vehicle)
        throw Error("cluster " + std::to_string(cluster.cluster_id) + " has no vehicle");

    Route r;
    r.cluster_id = cluster.cluster_id;
    r.vehicle = *cluster.vehicle;
    r.demand = cluster.total_demand;
    r.capacity = cluster.capacity;
    r.stops.push_back(depot_id);

    std::vector<int> remaining = cluster.members;
    std::sort(remaining.begin(), remaining.end());

    int current = depot_id;
    while (!remaining.empty()) {
        const ShortestPathResult& sp = cache.from(current);
        int next = -1;
        double next_d = std::numeric_limits<double>::infinity();
        for (int id : remaining) {
            auto it = sp.dist.find(id);
            double d = it == sp.dist.end() ? std::numeric_limits<double>::infinity() : it->second;
            if (d < next_d) {  // remaining is id-sorted, so < keeps the lowest id on ties
                next_d = d;
                next = id;
            }
        }
        if (next < 0 || !std::isfinite(next_d))
            throw Error("disconnected cluster " + std::to_string(cluster.cluster_id) +
                        ": no path from " + std::to_string(current) + " to " +
                        std::to_string(remaining.front()));
        r.leg_paths.push_back(reconstruct_path(sp, next));
        r.leg_km.push_back(next_d);
        r.total_km += next_d;
        r.stops.push_back(next);
        remaining.erase(std::find(remaining.begin(), remaining.end(), next));
        current = next;
    }

    const ShortestPathResult& back = cache.from(current);
    auto it = back.dist.find(depot_id);
    if (it == back.dist.end() || !std::isfinite(it->second))
        throw Error("disconnected cluster " + std::to_string(cluster.cluster_id) +
                    ": no path from " + std::to_string(current) + " back to depot");
    r.leg_paths.push_back(reconstruct_path(back, depot_id));
    r.leg_km.push_back(it->second);
    r.total_km += it->second;
    r.stops.push_back(depot_id);
    return r;
}

Route route_cluster(const OccupiedCluster& cluster, int depot_id, const RoadGraph& g) {
    PathCache cache(g);
    return route_cluster(cluster, depot_id, cache);
}

Solution build_solution(const ClusterSet& set, const RoadGraph& g, int depot_id) {
    PathCache cache(g);

    std::vector<const OccupiedCluster*> ordered;
    ordered.reserve(set.clusters.size());
    for (const OccupiedCluster& c : set.clusters) ordered.push_back(&c);
    std::sort(ordered.begin(), ordered.end(),
              [](const OccupiedCluster* a, const OccupiedCluster* b) {
                  return a->cluster_id < b->cluster_id;
              });

    Solution s;
    for (const OccupiedCluster* c : ordered) {
        Route r = route_cluster(*c, depot_id, cache);
        s.total_cost_km += r.total_km;
        s.routes.push_back(std::move(r));
    }

    s.kpi.vehicle_count = static_cast<int>(s.routes.size());
    s.kpi.total_km = s.total_cost_km;
    if (!s.routes.empty()) {
        double sum = 0.0;
        double low = std::numeric_limits<double>::infinity();
        for (const Route& r : s.routes) {
            sum += r.occupancy();
            low = std::min(low, r.occupancy());
        }
        s.kpi.mean_occupancy = sum / static_cast<double>(s.routes.size());
        s.kpi.min_occupancy = low;
    }
    return s;
}

double evaluate_solution(const Solution& s, const RoadGraph& g) {
    std::map<std::pair<int, int>, double> weight;
    for (const RoadGraph::Edge& e : g.edges) {
        auto put = [&](int u, int v) {
            auto key = std::make_pair(u, v);
            auto it = weight.find(key);
            if (it == weight.end() || e.weight < it->second) weight[key] = e.weight;
        };
        put(e.u, e.v);
        if (!g.directed) put(e.v, e.u);
    }

    double total = 0.0;
    for (const Route& r : s.routes) {
        for (const std::vector<int>& path : r.leg_paths) {
            for (int v : path)
                if (!g.has_vertex(v))
                    throw Error("route references unknown vertex " + std::to_string(v));
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                auto it = weight.find({path[i], path[i + 1]});
                if (it == weight.end())
                    throw Error("route traverses missing edge " + std::to_string(path[i]) +
                                "-" + std::to_string(path[i + 1]));
                total += it->second;
            }
        }
    }
    return total;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::degree: return "degree";
        case ViolationKind::capacity: return "capacity";
        case ViolationKind::depot: return "depot";
    }
    return "unknown";
}

FeasibilityReport check_feasibility(const Solution& s, const std::vector<Client>& clients,
                                    const FleetSpec& fleet, int depot_id) {
    FeasibilityReport report;
    auto add = [&](ViolationKind kind, std::string detail) {
        report.violations.push_back({kind, std::move(detail)});
    };

    std::map<int, int> demand_by_id;
    for (const Client& c : clients) demand_by_id[c.id] = c.demand;

    std::map<int, int> visits;
    for (std::size_t ri = 0; ri < s.routes.size(); ++ri) {
        const Route& r = s.routes[ri];
        std::string tag = "route " + std::to_string(ri);

        if (r.stops.size() < 2 || r.stops.front() != depot_id)
            add(ViolationKind::depot, tag + " does not start at the depot");
        if (r.stops.size() < 2 || r.stops.back() != depot_id)
            add(ViolationKind::depot, tag + " does not end at the depot");

        long long demand = 0;
        for (std::size_t i = 1; i + 1 < r.stops.size(); ++i) {
            int stop = r.stops[i];
            if (stop == depot_id) {
                add(ViolationKind::depot, tag + " revisits the depot mid-route");
                continue;
            }
            auto it = demand_by_id.find(stop);
            if (it == demand_by_id.end()) {
                add(ViolationKind::degree, tag + " visits unknown client " + std::to_string(stop));
                continue;
            }
            ++visits[stop];
            demand += it->second;
        }

        if (r.vehicle.type_id < 0 ||
            static_cast<std::size_t>(r.vehicle.type_id) >= fleet.types.size()) {
            add(ViolationKind::capacity, tag + " uses unknown vehicle type " +
                                             std::to_string(r.vehicle.type_id));
        } else {
            int cap = fleet.types[static_cast<std::size_t>(r.vehicle.type_id)].capacity;
            if (demand > cap)
                add(ViolationKind::capacity, tag + " demand " + std::to_string(demand) +
                                                 " exceeds capacity " + std::to_string(cap));
        }
    }

    for (const Client& c : clients) {
        auto it = visits.find(c.id);
        int count = it == visits.end() ? 0 : it->second;
        if (count == 0)
            add(ViolationKind::degree, "client " + std::to_string(c.id) + " is never visited");
        else if (count > 1)
            add(ViolationKind::degree, "client " + std::to_string(c.id) + " is visited " +
                                           std::to_string(count) + " times");
    }

    return report;
}

}  // namespace cvrp
