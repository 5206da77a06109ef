#include "cvrp/serialize.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace cvrp {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json point_json(const GeoPoint& p) {
    return {{"lat", p.lat}, {"lon", p.lon}};
}

ordered_json vehicle_json(const VehicleAssignment& v) {
    return {{"type_id", v.type_id}, {"vehicle_index", v.vehicle_index}};
}

ordered_json node_json(const PhaseNode& node) {
    ordered_json j;
    j["members"] = node.members;
    j["centroid"] = point_json(node.centroid);
    if (node.assigned_vehicle) j["vehicle"] = vehicle_json(*node.assigned_vehicle);
    if (node.left) j["left"] = node_json(*node.left);
    if (node.right) j["right"] = node_json(*node.right);
    return j;
}

ordered_json cluster_json(const OccupiedCluster& c) {
    ordered_json j;
    j["cluster_id"] = c.cluster_id;
    j["members"] = c.members;
    j["centroid"] = point_json(c.centroid);
    j["capacity"] = c.capacity;
    j["total_demand"] = c.total_demand;
    j["occupancy"] = c.occupancy();
    if (c.vehicle) j["vehicle"] = vehicle_json(*c.vehicle);
    return j;
}

ordered_json merge_entry_json(const MergeLogEntry& e) {
    ordered_json j;
    j["step"] = e.step;
    j["from_cluster"] = e.from_cluster;
    if (e.merged) {
        j["to_cluster"] = e.to_cluster;
        j["distance_km"] = e.distance_km;
        if (e.freed_vehicle) j["freed_vehicle"] = vehicle_json(*e.freed_vehicle);
    } else {
        j["flagged"] = true;
    }
    return j;
}

ordered_json route_json(const Route& r) {
    ordered_json j;
    j["cluster_id"] = r.cluster_id;
    j["vehicle"] = vehicle_json(r.vehicle);
    j["stops"] = r.stops;
    j["legs"] = ordered_json::array();
    for (std::size_t i = 0; i < r.leg_paths.size(); ++i)
        j["legs"].push_back({{"path", r.leg_paths[i]}, {"km", r.leg_km[i]}});
    j["demand"] = r.demand;
    j["capacity"] = r.capacity;
    j["occupancy"] = r.occupancy();
    j["total_km"] = r.total_km;
    return j;
}

ordered_json solution_json(const Solution& s) {
    ordered_json j;
    j["routes"] = ordered_json::array();
    for (const Route& r : s.routes) j["routes"].push_back(route_json(r));
    j["total_cost_km"] = s.total_cost_km;
    j["kpi"] = {{"mean_occupancy", s.kpi.mean_occupancy},
                {"min_occupancy", s.kpi.min_occupancy},
                {"vehicle_count", s.kpi.vehicle_count},
                {"total_km", s.kpi.total_km}};
    return j;
}

std::string number_text(double v) {
    return ordered_json(v).dump();
}

}  // namespace

std::string plan_to_json(const FleetPlan& plan, const NewtonResult& newton,
                         const FleetSpec& spec) {
    ordered_json j;
    j["fleet"] = ordered_json::array();
    for (const VehicleType& t : spec.types) {
        ordered_json f{{"capacity", t.capacity}};
        if (t.max_count) f["count"] = *t.max_count;
        j["fleet"].push_back(f);
    }
    j["counts"] = plan.counts;
    j["total_capacity"] = plan.total_capacity;
    j["slack"] = plan.slack;
    j["total_vehicles"] = plan.total_vehicles();
    j["newton"] = {{"x", newton.x}, {"iterations", newton.iterations}};
    return j.dump(2) + "\n";
}

std::string tree_to_json(const PhaseNode& root) {
    return node_json(root).dump(2) + "\n";
}

std::string cluster_set_to_json(const ClusterSet& set) {
    ordered_json j;
    j["clusters"] = ordered_json::array();
    for (const OccupiedCluster& c : set.clusters) j["clusters"].push_back(cluster_json(c));
    return j.dump(2) + "\n";
}

ClusterSet cluster_set_from_json(const std::string& text, const std::string& origin) {
    ClusterSet set;
    try {
        ordered_json j = ordered_json::parse(text);
        for (const auto& cj : j.at("clusters")) {
            OccupiedCluster c;
            c.cluster_id = cj.at("cluster_id").get<int>();
            c.members = cj.at("members").get<std::vector<int>>();
            c.centroid = {cj.at("centroid").at("lat").get<double>(),
                          cj.at("centroid").at("lon").get<double>()};
            c.capacity = cj.at("capacity").get<int>();
            c.total_demand = cj.at("total_demand").get<long long>();
            if (cj.contains("vehicle"))
                c.vehicle = VehicleAssignment{cj.at("vehicle").at("type_id").get<int>(),
                                              cj.at("vehicle").at("vehicle_index").get<int>()};
            set.clusters.push_back(std::move(c));
        }
    } catch (const ordered_json::exception& e) {
        throw Error(origin + ": " + e.what());
    }
    return set;
}

std::string merge_log_to_jsonl(const MergeLog& log) {
    std::ostringstream out;
    for (const MergeLogEntry& e : log) out << merge_entry_json(e).dump() << "\n";
    return out.str();
}

std::string solution_to_json(const Solution& s) {
    return solution_json(s).dump(2) + "\n";
}

std::string solution_to_csv(const Solution& s) {
    std::ostringstream out;
    out << "route_id,seq,vertex,leg_km\n";
    for (std::size_t ri = 0; ri < s.routes.size(); ++ri) {
        const Route& r = s.routes[ri];
        for (std::size_t i = 0; i < r.stops.size(); ++i) {
            out << ri << "," << i << "," << r.stops[i] << ",";
            if (i > 0) out << number_text(r.leg_km[i - 1]);
            out << "\n";
        }
    }
    return out.str();
}

std::string solution_to_geojson(const Solution& s, const std::map<int, GeoPoint>& locations) {
    auto coord = [&](int vertex) {
        auto it = locations.find(vertex);
        if (it == locations.end())
            throw Error("no location known for vertex " + std::to_string(vertex));
        return ordered_json::array({it->second.lon, it->second.lat});
    };

    ordered_json features = ordered_json::array();
    for (std::size_t ri = 0; ri < s.routes.size(); ++ri) {
        const Route& r = s.routes[ri];
        ordered_json coords = ordered_json::array();
        for (std::size_t li = 0; li < r.leg_paths.size(); ++li) {
            const auto& path = r.leg_paths[li];
            for (std::size_t i = li == 0 ? 0 : 1; i < path.size(); ++i)
                coords.push_back(coord(path[i]));
        }
        ordered_json feature;
        feature["type"] = "Feature";
        feature["properties"] = {{"route_id", static_cast<int>(ri)},
                                 {"cluster_id", r.cluster_id},
                                 {"vehicle", vehicle_json(r.vehicle)},
                                 {"total_km", r.total_km}};
        feature["geometry"] = {{"type", "LineString"}, {"coordinates", coords}};
        features.push_back(feature);
    }

    ordered_json j;
    j["type"] = "FeatureCollection";
    j["features"] = features;
    return j.dump(2) + "\n";
}

std::string feasibility_to_json(const FeasibilityReport& report) {
    ordered_json j;
    j["feasible"] = report.feasible();
    j["violations"] = ordered_json::array();
    for (const Violation& v : report.violations)
        j["violations"].push_back({{"kind", to_string(v.kind)}, {"detail", v.detail}});
    return j.dump(2) + "\n";
}

RoadGraph road_graph_from_json(const std::string& text, const std::string& origin) {
    RoadGraph g;
    try {
        ordered_json j = ordered_json::parse(text, nullptr, true, true);
        for (const auto& vj : j.at("vertices")) {
            RoadGraph::Vertex v;
            v.id = vj.at("id").get<int>();
            if (vj.contains("lat") != vj.contains("lon"))
                throw Error("vertex " + std::to_string(v.id) + " has only one coordinate");
            if (vj.contains("lat"))
                v.location = GeoPoint{vj.at("lat").get<double>(), vj.at("lon").get<double>()};
            g.vertices.push_back(v);
        }
        for (const auto& ej : j.at("edges"))
            g.edges.push_back({ej.at("u").get<int>(), ej.at("v").get<int>(),
                               ej.at("w").get<double>()});
        g.directed = j.value("directed", false);
    } catch (const ordered_json::exception& e) {
        throw Error(origin + ": " + e.what());
    }
    g.validate();
    return g;
}

RoadGraph load_road_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open road graph file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return road_graph_from_json(buf.str(), path);
}

std::string road_graph_to_json(const RoadGraph& g) {
    ordered_json j;
    j["vertices"] = ordered_json::array();
    for (const RoadGraph::Vertex& v : g.vertices) {
        ordered_json vj{{"id", v.id}};
        if (v.location) {
            vj["lat"] = v.location->lat;
            vj["lon"] = v.location->lon;
        }
        j["vertices"].push_back(vj);
    }
    j["edges"] = ordered_json::array();
    for (const RoadGraph::Edge& e : g.edges)
        j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"w", e.weight}});
    j["directed"] = g.directed;
    return j.dump(2) + "\n";
}

}  // namespace cvrp
