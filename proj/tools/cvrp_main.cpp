#include "cvrp/oracle.hpp"
#include "cvrp/pipeline.hpp"
#include "cvrp/serialize.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using cvrp::Error;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct Options {
    std::string instance_path;
    std::uint64_t seed = 0;
    double epsilon = 1e-9;
    double min_occupancy = 0.5;
    double radius_km = 6371.0088;
    int kmeans_max_iter = 100;
    std::string road_graph;
    std::string format = "json";
    std::string dump_tree;
    std::string merge_log;
    std::string output;
    std::string clusters_path;
    bool oracle = false;
};

void add_common(CLI::App* cmd, Options& o, bool with_format) {
    cmd->add_option("instance", o.instance_path, "instance file, JSON or TSPLIB/CVRPLIB text")
        ->required();
    cmd->add_option("--seed", o.seed, "RNG seed (env CVRP_SEED)")->envname("CVRP_SEED");
    cmd->add_option("--epsilon", o.epsilon, "Newton stopping tolerance");
    cmd->add_option("--min-occupancy", o.min_occupancy, "merge threshold in [0,1]");
    cmd->add_option("--radius-km", o.radius_km, "earth radius in kilometers");
    cmd->add_option("--kmeans-max-iter", o.kmeans_max_iter, "Lloyd iteration cap");
    cmd->add_option("--road-graph", o.road_graph,
                    "road graph JSON (default: complete graph over instance points)");
    if (with_format)
        cmd->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "geojson"}));
    cmd->add_option("-o,--output", o.output, "write output to PATH instead of stdout");
}

void write_out(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

cvrp::PipelineConfig config_from(const Options& o) {
    cvrp::PipelineConfig cfg;
    cfg.rng_seed = o.seed;
    cfg.epsilon = o.epsilon;
    cfg.min_occupancy = o.min_occupancy;
    cfg.radius_km = o.radius_km;
    cfg.kmeans_max_iter = o.kmeans_max_iter;
    return cfg;
}

// --road-graph beats an instance-embedded path.
std::optional<cvrp::RoadGraph> load_graph(const Options& o, const cvrp::Instance& inst) {
    if (!o.road_graph.empty()) return cvrp::load_road_graph(o.road_graph);
    if (inst.road_graph_path) return cvrp::load_road_graph(*inst.road_graph_path);
    return std::nullopt;
}

std::string render_solution(const Options& o, const cvrp::Instance& inst,
                            const cvrp::RoadGraph& graph, const cvrp::Solution& solution,
                            const cvrp::FeasibilityReport& feasibility) {
    if (o.format == "csv") return cvrp::solution_to_csv(solution);
    if (o.format == "geojson")
        return cvrp::solution_to_geojson(solution, cvrp::location_index(inst, graph));
    ordered_json j;
    j["name"] = inst.name;
    j["solution"] = ordered_json::parse(cvrp::solution_to_json(solution));
    j["feasibility"] = ordered_json::parse(cvrp::feasibility_to_json(feasibility));
    return j.dump(2) + "\n";
}

int report_gate(const cvrp::FeasibilityReport& feasibility, bool flagged) {
    if (!feasibility.feasible()) {
        std::cerr << "infeasible: " << feasibility.violations.size() << " violation(s)\n";
        for (const cvrp::Violation& v : feasibility.violations)
            std::cerr << "  [" << to_string(v.kind) << "] " << v.detail << "\n";
        return kExitInfeasible;
    }
    if (flagged) {
        std::cerr << "merge pass flagged unmergeable under-occupied cluster(s)\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_solve(const Options& o) {
    cvrp::Instance inst = cvrp::parse_instance(o.instance_path);
    auto graph = load_graph(o, inst);
    cvrp::PipelineConfig cfg = config_from(o);
    cvrp::PipelineResult result = cvrp::run_pipeline(inst, cfg, graph ? &*graph : nullptr);

    if (!o.dump_tree.empty()) write_out(o.dump_tree, cvrp::tree_to_json(result.clustering.tree));
    if (!o.merge_log.empty())
        write_out(o.merge_log, cvrp::merge_log_to_jsonl(result.clustering.merge_log));

    std::string out = o.format == "json"
                          ? cvrp::solve_report_json(inst, cfg, result)
                          : render_solution(o, inst, result.graph, result.solution,
                                            result.feasibility);
    write_out(o.output, out);
    return report_gate(result.feasibility, result.merge_flagged());
}

int cmd_cluster(const Options& o) {
    cvrp::Instance inst = cvrp::parse_instance(o.instance_path);
    cvrp::PipelineConfig cfg = config_from(o);
    cvrp::ClusteringResult result = cvrp::run_clustering(inst, cfg);

    if (!o.dump_tree.empty()) write_out(o.dump_tree, cvrp::tree_to_json(result.tree));
    if (!o.merge_log.empty()) write_out(o.merge_log, cvrp::merge_log_to_jsonl(result.merge_log));

    write_out(o.output, cvrp::cluster_set_to_json(result.clusters));
    if (result.merge_flagged()) {
        std::cerr << "merge pass flagged unmergeable under-occupied cluster(s)\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_route(const Options& o) {
    cvrp::Instance inst = cvrp::parse_instance(o.instance_path);
    std::ifstream in(o.clusters_path, std::ios::binary);
    if (!in) throw Error("cannot open cluster file " + o.clusters_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    cvrp::ClusterSet set = cvrp::cluster_set_from_json(buf.str(), o.clusters_path);

    auto graph = load_graph(o, inst);
    cvrp::PipelineConfig cfg = config_from(o);
    cvrp::RoadGraph g = cvrp::routing_graph(inst, cfg, graph ? &*graph : nullptr);
    cvrp::Solution solution = cvrp::build_solution(set, g, 0);
    cvrp::FeasibilityReport feasibility = cvrp::check_feasibility(solution, inst);

    write_out(o.output, render_solution(o, inst, g, solution, feasibility));
    return report_gate(feasibility, false);
}

int cmd_eval(const Options& o) {
    cvrp::Instance inst = cvrp::parse_instance(o.instance_path);
    auto graph = load_graph(o, inst);
    cvrp::PipelineConfig cfg = config_from(o);
    cvrp::PipelineResult result = cvrp::run_pipeline(inst, cfg, graph ? &*graph : nullptr);

    double recomputed = cvrp::evaluate_solution(result.solution, result.graph);
    double total = result.solution.total_cost_km;
    double tolerance = 1e-6 * std::max(1.0, std::abs(total));

    ordered_json j;
    j["name"] = inst.name;
    j["total_cost_km"] = total;
    j["recomputed_km"] = recomputed;
    j["cost_consistent"] = std::abs(recomputed - total) <= tolerance;
    j["kpi"] = {{"mean_occupancy", result.solution.kpi.mean_occupancy},
                {"min_occupancy", result.solution.kpi.min_occupancy},
                {"vehicle_count", result.solution.kpi.vehicle_count},
                {"total_km", result.solution.kpi.total_km}};
    j["feasibility"] = ordered_json::parse(cvrp::feasibility_to_json(result.feasibility));

    if (o.oracle) {
        cvrp::PathCache cache(result.graph);
        cvrp::DistanceFn dist = [&](int a, int b) {
            const auto& sp = cache.from(a);
            auto it = sp.dist.find(b);
            if (it == sp.dist.end()) throw Error("no path between oracle stops");
            return it->second;
        };

        ordered_json routes = ordered_json::array();
        double ratio_sum = 0.0;
        bool bound_holds = true;
        for (const cvrp::Route& r : result.solution.routes) {
            std::vector<int> interior(r.stops.begin() + 1, r.stops.end() - 1);
            cvrp::TourResult best = cvrp::exact_tour(0, interior, dist);
            double ratio = best.cost > 0.0 ? r.total_km / best.cost : 1.0;
            ratio_sum += ratio;
            if (r.total_km < best.cost - 1e-9) bound_holds = false;
            routes.push_back({{"cluster_id", r.cluster_id},
                              {"greedy_km", r.total_km},
                              {"optimal_km", best.cost},
                              {"ratio", ratio}});
        }

        cvrp::FleetPlan oracle_plan = cvrp::exact_fleet(inst.total_demand(), inst.fleet);
        j["oracle"] = {
            {"routes", routes},
            {"mean_ratio",
             result.solution.routes.empty()
                 ? 1.0
                 : ratio_sum / static_cast<double>(result.solution.routes.size())},
            {"greedy_never_beats_exact", bound_holds},
            {"fleet_plan_matches", oracle_plan.counts == result.clustering.plan.counts}};
    }

    write_out(o.output, j.dump(2) + "\n");
    return report_gate(result.feasibility, result.merge_flagged());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cluster-first route-second CVRP solver"};
    app.require_subcommand(1);

    Options o;
    CLI::App* solve = app.add_subcommand("solve", "run the full pipeline on an instance");
    add_common(solve, o, true);
    solve->add_option("--dump-tree", o.dump_tree, "write the phase tree JSON to PATH ('-' = stdout)");
    solve->add_option("--merge-log", o.merge_log, "write the merge log JSONL to PATH ('-' = stdout)");

    CLI::App* cluster = app.add_subcommand("cluster", "stop after clustering and merging");
    add_common(cluster, o, false);
    cluster->add_option("--dump-tree", o.dump_tree,
                        "write the phase tree JSON to PATH ('-' = stdout)");
    cluster->add_option("--merge-log", o.merge_log,
                        "write the merge log JSONL to PATH ('-' = stdout)");

    CLI::App* route = app.add_subcommand("route", "route a cluster set saved by `cluster`");
    add_common(route, o, true);
    route->add_option("--clusters", o.clusters_path, "cluster set JSON file")->required();

    CLI::App* eval = app.add_subcommand("eval", "solve and score the result");
    add_common(eval, o, false);
    eval->add_flag("--oracle", o.oracle,
                   "also compare routes and plan against the exact oracles (small instances)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(o);
        if (cluster->parsed()) return cmd_cluster(o);
        if (route->parsed()) return cmd_route(o);
        if (eval->parsed()) return cmd_eval(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
