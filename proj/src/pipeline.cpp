#include "cvrp/pipeline.hpp"

#include "cvrp/rng.hpp"
#include "cvrp/serialize.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace cvrp {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(std::string(name) + ": " + e.what());
    }
}

}  // namespace

void PipelineConfig::validate() const {
    if (epsilon <= 0.0) throw Error("epsilon must be positive");
    if (min_occupancy < 0.0 || min_occupancy > 1.0)
        throw Error("min occupancy must lie in [0, 1]");
    if (radius_km <= 0.0) throw Error("earth radius must be positive");
    if (kmeans_max_iter <= 0) throw Error("kmeans max iterations must be positive");
}

bool ClusteringResult::merge_flagged() const {
    return std::any_of(merge_log.begin(), merge_log.end(),
                       [](const MergeLogEntry& e) { return !e.merged; });
}

ClusteringResult run_clustering(const Instance& inst, const PipelineConfig& cfg) {
    inst.validate();
    cfg.validate();
    Metric metric = inst.metric(cfg.radius_km);

    ClusteringResult res;
    res.plan = stage("fleet planning", [&] {
        NewtonConfig ncfg;
        ncfg.epsilon = cfg.epsilon;
        return plan_fleet(inst.total_demand(), inst.fleet, ncfg, &res.newton);
    });

    res.tree = stage("clustering", [&] {
        return recursive_kmeans(inst.clients, inst.fleet, res.plan,
                                derive_seed(cfg.rng_seed, 1), cfg.kmeans_max_iter, metric);
    });
    res.leaf_clusters = stage("clustering", [&] {
        return clusters_from_tree(res.tree, inst.fleet, inst.clients);
    });

    stage("merging", [&] {
        MergeResult m = merge_pass(res.leaf_clusters, MergePolicy{cfg.min_occupancy},
                                   inst.clients, metric);
        res.clusters = std::move(m.clusters);
        res.merge_log = std::move(m.log);
        return 0;
    });
    return res;
}

RoadGraph routing_graph(const Instance& inst, const PipelineConfig& cfg,
                        const RoadGraph* road_graph) {
    return stage("routing", [&] {
        if (road_graph) {
            road_graph->validate();
            if (!road_graph->has_vertex(0)) throw Error("road graph has no depot vertex 0");
            for (const Client& c : inst.clients)
                if (!road_graph->has_vertex(c.id))
                    throw Error("road graph has no vertex for client " + std::to_string(c.id));
            return *road_graph;
        }
        Metric metric = inst.metric(cfg.radius_km);
        std::vector<std::pair<int, GeoPoint>> points;
        points.emplace_back(0, inst.depot);
        for (const Client& c : inst.clients) points.emplace_back(c.id, c.location);
        return complete_graph_from_points(points, metric);
    });
}

PipelineResult run_pipeline(const Instance& inst, const PipelineConfig& cfg,
                            const RoadGraph* road_graph) {
    PipelineResult res;
    res.clustering = run_clustering(inst, cfg);
    res.graph = routing_graph(inst, cfg, road_graph);
    res.solution =
        stage("routing", [&] { return build_solution(res.clustering.clusters, res.graph, 0); });
    res.feasibility = check_feasibility(res.solution, inst);
    return res;
}

std::string solve_report_json(const Instance& inst, const PipelineConfig& cfg,
                              const PipelineResult& result) {
    ordered_json j;
    j["name"] = inst.name;
    j["config"] = {{"seed", cfg.rng_seed},
                   {"epsilon", cfg.epsilon},
                   {"min_occupancy", cfg.min_occupancy},
                   {"radius_km", cfg.radius_km},
                   {"kmeans_max_iter", cfg.kmeans_max_iter}};
    j["plan"] = ordered_json::parse(
        plan_to_json(result.clustering.plan, result.clustering.newton, inst.fleet));
    j["clusters"] = ordered_json::parse(cluster_set_to_json(result.clustering.clusters));
    j["merge_log"] = ordered_json::array();
    {
        std::istringstream lines(merge_log_to_jsonl(result.clustering.merge_log));
        std::string line;
        while (std::getline(lines, line))
            if (!line.empty()) j["merge_log"].push_back(ordered_json::parse(line));
    }
    j["solution"] = ordered_json::parse(solution_to_json(result.solution));
    j["feasibility"] = ordered_json::parse(feasibility_to_json(result.feasibility));
    return j.dump(2) + "\n";
}

std::map<int, GeoPoint> location_index(const Instance& inst, const RoadGraph& g) {
    std::map<int, GeoPoint> locations;
    locations[0] = inst.depot;
    for (const Client& c : inst.clients) locations[c.id] = c.location;
    for (const RoadGraph::Vertex& v : g.vertices)
        if (v.location && !locations.count(v.id)) locations[v.id] = *v.location;
    return locations;
}

}  // namespace cvrp
