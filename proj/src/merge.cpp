#include "cvrp/merge.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

namespace cvrp {

namespace {

std::unordered_map<int, const Client*> index_clients(const std::vector<Client>& clients) {
    std::unordered_map<int, const Client*> by_id;
    for (const Client& c : clients) by_id.emplace(c.id, &c);
    return by_id;
}

const Client& lookup(const std::unordered_map<int, const Client*>& by_id, int id) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error("cluster references unknown client " + std::to_string(id));
    return *it->second;
}

}  // namespace

ClusterSet clusters_from_tree(const PhaseNode& root, const FleetSpec& spec,
                              const std::vector<Client>& clients) {
    auto by_id = index_clients(clients);

    ClusterSet set;
    int next_id = 0;
    for (const PhaseNode* leaf : collect_leaves(root)) {
        if (!leaf->assigned_vehicle) throw Error("leaf cluster without a vehicle");
        const VehicleAssignment& v = *leaf->assigned_vehicle;
        if (v.type_id < 0 || static_cast<std::size_t>(v.type_id) >= spec.types.size())
            throw Error("leaf vehicle type out of range");

        OccupiedCluster c;
        c.cluster_id = next_id++;
        c.members = leaf->members;
        c.centroid = leaf->centroid;
        c.capacity = spec.types[static_cast<std::size_t>(v.type_id)].capacity;
        c.vehicle = v;
        for (int id : c.members) c.total_demand += lookup(by_id, id).demand;
        set.clusters.push_back(std::move(c));
    }
    return set;
}

bool MergeResult::has_flagged() const {
    return std::any_of(log.begin(), log.end(),
                       [](const MergeLogEntry& e) { return !e.merged; });
}

MergeResult merge_pass(const ClusterSet& set, const MergePolicy& policy,
                       const std::vector<Client>& clients, const Metric& metric) {
    if (policy.min_occupancy < 0.0 || policy.min_occupancy > 1.0)
        throw Error("min occupancy must lie in [0, 1]");
    auto by_id = index_clients(clients);

    struct Work {
        OccupiedCluster c;
        bool alive = true;
        bool flagged = false;
    };
    std::vector<Work> ws;
    ws.reserve(set.clusters.size());
    for (const OccupiedCluster& c : set.clusters) {
        if (c.capacity <= 0) throw Error("cluster " + std::to_string(c.cluster_id) +
                                         " has non-positive capacity");
        ws.push_back({c, true, false});
    }

    MergeResult out;
    int step = 0;
    for (;;) {
        // lowest occupancy below the threshold, tie to the lower id
        int src = -1;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            if (!ws[i].alive || ws[i].flagged) continue;
            if (ws[i].c.occupancy() >= policy.min_occupancy) continue;
            if (src < 0) {
                src = static_cast<int>(i);
                continue;
            }
            const OccupiedCluster& best = ws[static_cast<std::size_t>(src)].c;
            if (ws[i].c.occupancy() < best.occupancy() ||
                (ws[i].c.occupancy() == best.occupancy() && ws[i].c.cluster_id < best.cluster_id))
                src = static_cast<int>(i);
        }
        if (src < 0) break;
        Work& from = ws[static_cast<std::size_t>(src)];

        // nearest centroid with room for the combined demand
        int dst = -1;
        double dst_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ws.size(); ++j) {
            if (!ws[j].alive || static_cast<int>(j) == src) continue;
            if (ws[j].c.total_demand + from.c.total_demand > ws[j].c.capacity) continue;
            double d = metric.distance(from.c.centroid, ws[j].c.centroid);
            if (d < dst_d ||
                (d == dst_d && dst >= 0 &&
                 ws[j].c.cluster_id < ws[static_cast<std::size_t>(dst)].c.cluster_id)) {
                dst_d = d;
                dst = static_cast<int>(j);
            }
        }

        MergeLogEntry e;
        e.step = ++step;
        e.from_cluster = from.c.cluster_id;
        if (dst < 0) {
            from.flagged = true;
            out.log.push_back(e);
            continue;
        }

        Work& to = ws[static_cast<std::size_t>(dst)];
        e.merged = true;
        e.to_cluster = to.c.cluster_id;
        e.distance_km = dst_d;
        e.freed_vehicle = from.c.vehicle;
        out.log.push_back(e);

        to.c.members.insert(to.c.members.end(), from.c.members.begin(), from.c.members.end());
        to.c.total_demand += from.c.total_demand;
        double lat = 0.0, lon = 0.0;
        for (int id : to.c.members) {
            const Client& cl = lookup(by_id, id);
            lat += cl.location.lat;
            lon += cl.location.lon;
        }
        auto n = static_cast<double>(to.c.members.size());
        to.c.centroid = {lat / n, lon / n};
        from.alive = false;
    }

    for (Work& w : ws)
        if (w.alive) out.clusters.clusters.push_back(std::move(w.c));
    return out;
}

}  // namespace cvrp
