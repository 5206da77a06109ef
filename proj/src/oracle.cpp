#include "cvrp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cvrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance matrix over stops plus the depot at index m, one dist call per
// ordered pair.
std::vector<std::vector<double>> stop_matrix(int depot, const std::vector<int>& stops,
                                             const DistanceFn& dist) {
    std::size_t m = stops.size();
    std::vector<int> ids = stops;
    ids.push_back(depot);
    std::vector<std::vector<double>> d(m + 1, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = 0; j <= m; ++j)
            if (i != j) d[i][j] = dist(ids[i], ids[j]);
    return d;
}

void check_tour_budget(std::size_t stops, const OracleBudget& budget) {
    budget.validate();
    if (stops > static_cast<std::size_t>(budget.max_tour_stops))
        throw Error("tour oracle budget exceeded: " + std::to_string(stops) + " stops > " +
                    std::to_string(budget.max_tour_stops));
}

}  // namespace

void OracleBudget::validate() const {
    if (max_vertices <= 0 || max_tour_stops <= 0 || max_partition_points <= 0)
        throw Error("oracle budgets must be positive");
}

double ApspResult::between(int u, int v) const {
    auto find = [&](int id) {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id)
            throw Error("unknown vertex " + std::to_string(id) + " in distance matrix");
        return static_cast<std::size_t>(it - ids.begin());
    };
    return dist[find(u)][find(v)];
}

ApspResult apsp_floyd_warshall(const RoadGraph& g, const OracleBudget& budget) {
    budget.validate();
    g.validate();
    if (g.vertices.size() > static_cast<std::size_t>(budget.max_vertices))
        throw Error("apsp oracle budget exceeded: " + std::to_string(g.vertices.size()) +
                    " vertices > " + std::to_string(budget.max_vertices));

    ApspResult res;
    for (const RoadGraph::Vertex& v : g.vertices) res.ids.push_back(v.id);
    std::sort(res.ids.begin(), res.ids.end());

    std::size_t n = res.ids.size();
    res.dist.assign(n, std::vector<double>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) res.dist[i][i] = 0.0;

    auto pos = [&](int id) {
        return static_cast<std::size_t>(
            std::lower_bound(res.ids.begin(), res.ids.end(), id) - res.ids.begin());
    };
    for (const RoadGraph::Edge& e : g.edges) {
        if (e.weight < 0) throw Error("negative edge weight in oracle input");
        std::size_t u = pos(e.u), v = pos(e.v);
        res.dist[u][v] = std::min(res.dist[u][v], e.weight);
        if (!g.directed) res.dist[v][u] = std::min(res.dist[v][u], e.weight);
    }

    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (res.dist[i][k] + res.dist[k][j] < res.dist[i][j])
                    res.dist[i][j] = res.dist[i][k] + res.dist[k][j];
    return res;
}

TourResult exact_tour(int depot, const std::vector<int>& stops, const DistanceFn& dist,
                      const OracleBudget& budget) {
    check_tour_budget(stops.size(), budget);
    if (stops.empty()) return {};

    std::size_t m = stops.size();
    auto d = stop_matrix(depot, stops, dist);
    std::size_t full = (std::size_t{1} << m) - 1;

    // dp[mask][j]: cheapest depot-to-stops[j] path visiting exactly mask
    std::vector<std::vector<double>> dp(full + 1, std::vector<double>(m, kInf));
    std::vector<std::vector<int>> parent(full + 1, std::vector<int>(m, -1));
    for (std::size_t j = 0; j < m; ++j) dp[std::size_t{1} << j][j] = d[m][j];

    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            double base = dp[mask][j];
            if (!std::isfinite(base)) continue;
            for (std::size_t k = 0; k < m; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                std::size_t next = mask | (std::size_t{1} << k);
                double cand = base + d[j][k];
                if (cand < dp[next][k]) {
                    dp[next][k] = cand;
                    parent[next][k] = static_cast<int>(j);
                }
            }
        }
    }

    std::size_t last = m;
    double best = kInf;
    for (std::size_t j = 0; j < m; ++j) {
        double cand = dp[full][j] + d[j][m];
        if (cand < best) {
            best = cand;
            last = j;
        }
    }
    if (!std::isfinite(best)) throw Error("no feasible tour: stops unreachable");

    TourResult res;
    res.cost = best;
    std::size_t mask = full;
    int j = static_cast<int>(last);
    while (j >= 0) {
        res.order.push_back(stops[static_cast<std::size_t>(j)]);
        int p = parent[mask][static_cast<std::size_t>(j)];
        mask &= ~(std::size_t{1} << j);
        j = p;
    }
    std::reverse(res.order.begin(), res.order.end());
    return res;
}

TourResult exact_tour_brute(int depot, const std::vector<int>& stops, const DistanceFn& dist,
                            const OracleBudget& budget) {
    check_tour_budget(stops.size(), budget);
    if (stops.empty()) return {};

    std::size_t m = stops.size();
    auto d = stop_matrix(depot, stops, dist);

    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return stops[a] < stops[b]; });

    TourResult res;
    res.cost = kInf;
    do {
        double cost = d[m][perm[0]];
        for (std::size_t i = 0; i + 1 < m; ++i) cost += d[perm[i]][perm[i + 1]];
        cost += d[perm[m - 1]][m];
        if (cost < res.cost) {
            res.cost = cost;
            res.order.clear();
            for (std::size_t i : perm) res.order.push_back(stops[i]);
        }
    } while (std::next_permutation(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return stops[a] < stops[b];
    }));

    if (!std::isfinite(res.cost)) throw Error("no feasible tour: stops unreachable");
    return res;
}

double partition_objective(const std::vector<std::pair<int, GeoPoint>>& points,
                           const std::map<int, int>& assignments, const Metric& metric) {
    if (points.empty()) return 0.0;

    std::map<int, std::pair<GeoPoint, std::size_t>> acc;  // cluster -> (coord sum, count)
    for (const auto& [id, p] : points) {
        auto it = assignments.find(id);
        if (it == assignments.end())
            throw Error("missing assignment for point " + std::to_string(id));
        auto& [sum, count] = acc[it->second];
        sum.lat += p.lat;
        sum.lon += p.lon;
        ++count;
    }

    std::map<int, GeoPoint> centroid;
    for (const auto& [cluster, sc] : acc) {
        auto n = static_cast<double>(sc.second);
        centroid[cluster] = {sc.first.lat / n, sc.first.lon / n};
    }

    double j_total = 0.0;
    for (const auto& [id, p] : points) {
        double d = metric.distance(p, centroid[assignments.at(id)]);
        j_total += d * d;
    }
    return j_total;
}

BipartitionResult best_bipartition(const std::vector<std::pair<int, GeoPoint>>& points,
                                   const Metric& metric, const OracleBudget& budget) {
    budget.validate();
    if (points.size() < 2) throw Error("bipartition needs at least 2 points");
    if (points.size() > static_cast<std::size_t>(budget.max_partition_points))
        throw Error("bipartition oracle budget exceeded: " + std::to_string(points.size()) +
                    " points > " + std::to_string(budget.max_partition_points));

    std::size_t n = points.size();
    BipartitionResult best;
    best.objective_j = kInf;

    // point 0 pinned to side 0; mask bit i-1 is point i's side
    for (std::size_t mask = 1; mask < (std::size_t{1} << (n - 1)); ++mask) {
        std::map<int, int> assign;
        assign[points[0].first] = 0;
        for (std::size_t i = 1; i < n; ++i)
            assign[points[i].first] = (mask >> (i - 1)) & 1 ? 1 : 0;
        double j = partition_objective(points, assign, metric);
        if (j < best.objective_j) {
            best.objective_j = j;
            best.assignments = std::move(assign);
        }
    }
    return best;
}

FleetPlan exact_fleet(long long n, const FleetSpec& spec) {
    if (n < 0) throw Error("client count must be non-negative");
    spec.validate();

    std::size_t t = spec.types.size();
    std::vector<long long> bound(t);
    for (std::size_t i = 0; i < t; ++i) {
        long long cap = spec.types[i].capacity;
        long long need = (n + cap - 1) / cap;
        bound[i] = spec.types[i].max_count ? std::min<long long>(*spec.types[i].max_count, need)
                                           : need;
    }

    std::vector<int> counts(t, 0);
    std::vector<int> best_counts;
    long long best_slack = 0, best_vehicles = 0;
    bool found = false;

    auto consider = [&](long long cap, long long vehicles) {
        long long slack = cap - n;
        if (found) {
            if (std::tie(slack, vehicles) > std::tie(best_slack, best_vehicles)) return;
            if (std::tie(slack, vehicles) == std::tie(best_slack, best_vehicles) &&
                counts >= best_counts)
                return;
        }
        found = true;
        best_slack = slack;
        best_vehicles = vehicles;
        best_counts = counts;
    };

    // Depth-first over count vectors; once capacity covers n, larger
    // counts at this position only add slack, so evaluate and stop.
    auto rec = [&](auto&& self, std::size_t i, long long cap, long long vehicles) -> void {
        if (cap >= n) {
            consider(cap, vehicles);
            return;
        }
        if (i == t) return;
        long long c = spec.types[i].capacity;
        for (long long x = 0; x <= bound[i]; ++x) {
            counts[i] = static_cast<int>(x);
            long long cap2 = cap + x * c;
            if (cap2 >= n) {
                consider(cap2, vehicles + x);
                counts[i] = 0;
                return;
            }
            self(self, i + 1, cap2, vehicles + x);
        }
        counts[i] = 0;
    };
    rec(rec, 0, 0, 0);

    if (!found) throw Error("infeasible fleet: available capacity cannot cover " +
                            std::to_string(n));

    FleetPlan plan;
    plan.counts = best_counts;
    plan.total_capacity = n + best_slack;
    plan.slack = best_slack;
    return plan;
}

}  // namespace cvrp
