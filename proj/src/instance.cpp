#include "cvrp/instance.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace cvrp {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string stem_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

Instance from_json(const ordered_json& j, const std::string& origin) {
    Instance inst;
    try {
        inst.name = j.value("name", stem_of(origin));
        if (!j.contains("depot")) throw Error("missing field 'depot'");
        inst.depot = {j.at("depot").at("lat").get<double>(),
                      j.at("depot").at("lon").get<double>()};

        if (!j.contains("clients")) throw Error("missing field 'clients'");
        for (const auto& c : j.at("clients")) {
            Client cl;
            cl.id = c.at("id").get<int>();
            cl.location = {c.at("lat").get<double>(), c.at("lon").get<double>()};
            cl.demand = c.value("demand", 1);
            inst.clients.push_back(cl);
        }

        if (!j.contains("fleet")) throw Error("missing field 'fleet'");
        for (const auto& f : j.at("fleet")) {
            VehicleType t;
            t.capacity = f.at("capacity").get<int>();
            if (f.contains("count")) t.max_count = f.at("count").get<int>();
            inst.fleet.types.push_back(t);
        }

        std::string mode = j.value("distance_mode", "geo");
        if (mode == "geo")
            inst.distance_mode = DistanceMode::geo;
        else if (mode == "planar")
            inst.distance_mode = DistanceMode::planar;
        else
            throw Error("unknown distance_mode '" + mode + "'");

        if (j.contains("road_graph")) inst.road_graph_path = j.at("road_graph").get<std::string>();
    } catch (const ordered_json::exception& e) {
        throw Error(origin + ": " + e.what());
    }
    return inst;
}

// TSPLIB GEO coordinates encode DDD.MM (degrees and minutes).
double ddmm_to_degrees(double v) {
    double deg = std::trunc(v);
    double min = v - deg;
    return deg + min * 5.0 / 3.0;
}

Instance from_tsplib(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    std::string name = stem_of(origin);
    std::string edge_weight_type = "EUC_2D";
    int dimension = -1;
    long long capacity = -1;
    std::map<int, GeoPoint> coords;
    std::map<int, int> demands;
    std::set<int> depot_ids;

    auto fail = [&](const std::string& msg) {
        throw Error(origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    auto trim = [](std::string s) {
        auto issp = [](unsigned char c) { return std::isspace(c); };
        while (!s.empty() && issp(s.front())) s.erase(s.begin());
        while (!s.empty() && issp(s.back())) s.pop_back();
        return s;
    };

    enum class Section { header, coords, demands, depots };
    Section section = Section::header;

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "EOF") break;

        if (t == "NODE_COORD_SECTION") { section = Section::coords; continue; }
        if (t == "DEMAND_SECTION") { section = Section::demands; continue; }
        if (t == "DEPOT_SECTION") { section = Section::depots; continue; }
        if (t == "EDGE_WEIGHT_SECTION") fail("explicit edge weight matrices are not supported");

        if (section == Section::header || t.find(':') != std::string::npos) {
            std::size_t colon = t.find(':');
            if (colon == std::string::npos) fail("expected 'KEY : VALUE' header, got '" + t + "'");
            std::string key = trim(t.substr(0, colon));
            std::string value = trim(t.substr(colon + 1));
            try {
                if (key == "NAME") name = value;
                else if (key == "DIMENSION") dimension = std::stoi(value);
                else if (key == "CAPACITY") capacity = std::stoll(value);
                else if (key == "EDGE_WEIGHT_TYPE") edge_weight_type = value;
                // TYPE, COMMENT, VEHICLES etc. carry nothing the solver needs
            } catch (const std::exception&) {
                fail("invalid value '" + value + "' for " + key);
            }
            continue;
        }

        std::istringstream row(t);
        if (section == Section::coords) {
            int id;
            double a, b;
            if (!(row >> id >> a >> b)) fail("malformed coordinate row '" + t + "'");
            coords[id] = {a, b};
        } else if (section == Section::demands) {
            int id, d;
            if (!(row >> id >> d)) fail("malformed demand row '" + t + "'");
            demands[id] = d;
        } else if (section == Section::depots) {
            int id;
            if (!(row >> id)) fail("malformed depot row '" + t + "'");
            if (id != -1) depot_ids.insert(id);
        }
    }

    auto fail_file = [&](const std::string& msg) { throw Error(origin + ": " + msg); };
    if (coords.empty()) fail_file("no NODE_COORD_SECTION");
    if (capacity < 1) fail_file("missing or invalid CAPACITY");
    if (depot_ids.empty()) depot_ids.insert(coords.begin()->first);
    if (depot_ids.size() > 1) fail_file("multiple depots are not supported");
    if (dimension >= 0 && static_cast<std::size_t>(dimension) != coords.size())
        fail_file("DIMENSION " + std::to_string(dimension) + " does not match " +
                  std::to_string(coords.size()) + " coordinate rows");

    Instance inst;
    inst.name = name;
    int depot_id = *depot_ids.begin();

    bool geo = edge_weight_type == "GEO";
    if (!geo && edge_weight_type != "EUC_2D")
        fail_file("unsupported EDGE_WEIGHT_TYPE '" + edge_weight_type + "'");
    inst.distance_mode = geo ? DistanceMode::geo : DistanceMode::planar;

    for (const auto& [id, raw] : coords) {
        GeoPoint p;
        if (geo) {
            // TSPLIB GEO rows are (id, latitude, longitude) in DDD.MM
            p = {ddmm_to_degrees(raw.lat), ddmm_to_degrees(raw.lon)};
        } else {
            // EUC_2D rows are (id, x, y); Metric's planar mode reads lon=x, lat=y
            p = {raw.lon, raw.lat};
        }
        if (id == depot_id) {
            inst.depot = p;
            continue;
        }
        auto it = demands.find(id);
        int demand = it == demands.end() ? 1 : it->second;
        inst.clients.push_back({id, p, demand});
    }

    auto depot_demand = demands.find(depot_id);
    if (depot_demand != demands.end() && depot_demand->second != 0)
        throw Error(origin + ": depot node " + std::to_string(depot_id) +
                    " has nonzero demand");

    VehicleType t;
    t.capacity = static_cast<int>(capacity);
    inst.fleet.types.push_back(t);
    return inst;
}

}  // namespace

void Instance::validate() const {
    if (clients.empty()) throw Error("instance has no clients");
    fleet.validate();

    std::set<int> seen;
    for (const Client& c : clients) {
        if (c.id < 1)
            throw Error("client id " + std::to_string(c.id) + " is reserved (ids start at 1)");
        if (!seen.insert(c.id).second) throw Error("duplicate client id " + std::to_string(c.id));
        if (c.demand < 1)
            throw Error("client " + std::to_string(c.id) + " has demand " +
                        std::to_string(c.demand) + " (must be >= 1)");
    }

    if (distance_mode == DistanceMode::geo) {
        auto check = [](const GeoPoint& p, const std::string& what) {
            if (!p.valid())
                throw Error(what + " coordinates (" + std::to_string(p.lat) + ", " +
                            std::to_string(p.lon) + ") out of range");
        };
        check(depot, "depot");
        double lo = depot.lon, hi = depot.lon;
        for (const Client& c : clients) {
            check(c.location, "client " + std::to_string(c.id));
            lo = std::min(lo, c.location.lon);
            hi = std::max(hi, c.location.lon);
        }
        if (hi - lo > 180.0)
            throw Error("longitude span " + std::to_string(hi - lo) +
                        " exceeds 180 degrees; split the instance at the antimeridian");
    }
}

long long Instance::total_demand() const {
    long long d = 0;
    for (const Client& c : clients) d += c.demand;
    return d;
}

Metric Instance::metric(double radius_km) const {
    return {distance_mode, EarthModel{radius_km}};
}

Instance parse_instance_text(const std::string& text, const std::string& origin) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw Error(origin + ": empty input");

    Instance inst;
    if (text[first] == '{') {
        ordered_json j = ordered_json::parse(text, nullptr, true, true);
        inst = from_json(j, origin);
    } else {
        inst = from_tsplib(text, origin);
    }
    inst.validate();
    return inst;
}

Instance parse_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open instance file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_instance_text(buf.str(), path);
    } catch (const ordered_json::exception& e) {
        throw Error(path + ": " + e.what());
    }
}

std::string emit_instance_json(const Instance& inst) {
    ordered_json j;
    j["name"] = inst.name;
    j["depot"] = {{"lat", inst.depot.lat}, {"lon", inst.depot.lon}};
    j["clients"] = ordered_json::array();
    for (const Client& c : inst.clients)
        j["clients"].push_back({{"id", c.id},
                                {"lat", c.location.lat},
                                {"lon", c.location.lon},
                                {"demand", c.demand}});
    j["fleet"] = ordered_json::array();
    for (const VehicleType& t : inst.fleet.types) {
        ordered_json f{{"capacity", t.capacity}};
        if (t.max_count) f["count"] = *t.max_count;
        j["fleet"].push_back(f);
    }
    j["distance_mode"] = inst.distance_mode == DistanceMode::geo ? "geo" : "planar";
    if (inst.road_graph_path) j["road_graph"] = *inst.road_graph_path;
    return j.dump(2) + "\n";
}

FeasibilityReport check_feasibility(const Solution& s, const Instance& inst) {
    return check_feasibility(s, inst.clients, inst.fleet, 0);
}

}  // namespace cvrp
