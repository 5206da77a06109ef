#include "cvrp/route.hpp"
#include "cvrp/rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace cvrp;

namespace {

RoadGraph path_graph(int n) {
    RoadGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back({i, {}});
    for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, 1.0});
    return g;
}

OccupiedCluster simple_cluster(int id, std::vector<int> members, int capacity, int demand) {
    OccupiedCluster c;
    c.cluster_id = id;
    c.members = std::move(members);
    c.capacity = capacity;
    c.total_demand = demand;
    c.vehicle = VehicleAssignment{0, id};
    return c;
}

}  // namespace

TEST_CASE("a single stop goes out and back") {
    RoadGraph g = path_graph(3);
    Route r = route_cluster(simple_cluster(0, {2}, 4, 1), 0, g);
    CHECK(r.stops == std::vector<int>{0, 2, 0});
    CHECK(r.total_km == doctest::Approx(4.0));
    REQUIRE(r.leg_paths.size() == 2);
    CHECK(r.leg_paths[0] == std::vector<int>{0, 1, 2});
    CHECK(r.leg_paths[1] == std::vector<int>{2, 1, 0});
    CHECK(r.leg_km == std::vector<double>{2.0, 2.0});
}

TEST_CASE("greedy visits the chain in order") {
    RoadGraph g = path_graph(4);
    Route r = route_cluster(simple_cluster(0, {1, 2, 3}, 4, 3), 0, g);
    CHECK(r.stops == std::vector<int>{0, 1, 2, 3, 0});
    CHECK(r.total_km == doctest::Approx(6.0));
    CHECK(r.leg_paths.back() == std::vector<int>{3, 2, 1, 0});
}

TEST_CASE("distance ties fall to the lowest vertex id") {
    RoadGraph g;
    g.vertices = {{0, {}}, {1, {}}, {2, {}}};
    g.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
    Route r = route_cluster(simple_cluster(0, {2, 1}, 4, 2), 0, g);
    CHECK(r.stops == std::vector<int>{0, 1, 2, 0});
}

TEST_CASE("routing validates its cluster") {
    RoadGraph g = path_graph(2);
    OccupiedCluster empty = simple_cluster(0, {}, 4, 0);
    CHECK_THROWS_WITH_AS(route_cluster(empty, 0, g), "cluster 0 has no members", Error);
    OccupiedCluster no_vehicle = simple_cluster(1, {1}, 4, 1);
    no_vehicle.vehicle.reset();
    CHECK_THROWS_WITH_AS(route_cluster(no_vehicle, 0, g), "cluster 1 has no vehicle", Error);
}

TEST_CASE("routing reports disconnected clusters") {
    RoadGraph g;
    g.vertices = {{0, {}}, {1, {}}, {2, {}}};
    g.edges = {{0, 1, 1.0}};
    CHECK_THROWS_AS(route_cluster(simple_cluster(0, {2}, 4, 1), 0, g), Error);
}

TEST_CASE("solutions aggregate routes in cluster order") {
    RoadGraph g = path_graph(5);
    ClusterSet set;
    set.clusters.push_back(simple_cluster(3, {4}, 4, 1));
    set.clusters.push_back(simple_cluster(1, {1, 2}, 4, 2));
    Solution s = build_solution(set, g, 0);
    REQUIRE(s.routes.size() == 2);
    CHECK(s.routes[0].cluster_id == 1);
    CHECK(s.routes[1].cluster_id == 3);
    CHECK(s.total_cost_km == doctest::Approx(4.0 + 8.0));
    CHECK(s.kpi.vehicle_count == 2);
    CHECK(s.kpi.total_km == doctest::Approx(s.total_cost_km));
    CHECK(s.kpi.min_occupancy == doctest::Approx(0.25));
    CHECK(s.kpi.mean_occupancy == doctest::Approx((0.25 + 0.5) / 2.0));
}

TEST_CASE("an empty cluster set yields an empty solution") {
    RoadGraph g = path_graph(2);
    Solution s = build_solution({}, g, 0);
    CHECK(s.routes.empty());
    CHECK(s.total_cost_km == 0.0);
    CHECK(s.kpi.vehicle_count == 0);
    CHECK(s.kpi.mean_occupancy == 0.0);
}

TEST_CASE("replaying a solution over the graph reproduces its cost") {
    RoadGraph g = path_graph(6);
    ClusterSet set;
    set.clusters.push_back(simple_cluster(0, {2, 4}, 8, 2));
    set.clusters.push_back(simple_cluster(1, {1, 5}, 8, 2));
    Solution s = build_solution(set, g, 0);
    double replayed = evaluate_solution(s, g);
    CHECK(std::abs(replayed - s.total_cost_km) <= 1e-6 * std::max(1.0, s.total_cost_km));
}

TEST_CASE("replay rejects foreign vertices and phantom edges") {
    RoadGraph g = path_graph(3);
    ClusterSet set;
    set.clusters.push_back(simple_cluster(0, {2}, 4, 1));
    Solution s = build_solution(set, g, 0);

    Solution foreign = s;
    foreign.routes[0].leg_paths[0] = {0, 9};
    CHECK_THROWS_WITH_AS(evaluate_solution(foreign, g), "route references unknown vertex 9",
                         Error);

    Solution phantom = s;
    phantom.routes[0].leg_paths[0] = {0, 2};
    CHECK_THROWS_WITH_AS(evaluate_solution(phantom, g), "route traverses missing edge 0-2",
                         Error);
}

TEST_CASE("a clean solution passes the feasibility check") {
    RoadGraph g = path_graph(4);
    ClusterSet set;
    set.clusters.push_back(simple_cluster(0, {1, 2, 3}, 4, 3));
    Solution s = build_solution(set, g, 0);
    std::vector<Client> clients{{1, {}, 1}, {2, {}, 1}, {3, {}, 1}};
    FleetSpec fleet{{VehicleType{4, {}}}};
    FeasibilityReport rep = check_feasibility(s, clients, fleet, 0);
    CHECK(rep.feasible());
    CHECK(rep.violations.empty());
}

TEST_CASE("feasibility violations carry the right class") {
    RoadGraph g = path_graph(4);
    ClusterSet set;
    set.clusters.push_back(simple_cluster(0, {1, 2, 3}, 4, 3));
    Solution good = build_solution(set, g, 0);
    std::vector<Client> clients{{1, {}, 1}, {2, {}, 1}, {3, {}, 1}};
    FleetSpec fleet{{VehicleType{4, {}}}};

    SUBCASE("a client visited twice is a degree violation") {
        Solution s = good;
        s.routes[0].stops = {0, 1, 2, 1, 0};
        FeasibilityReport rep = check_feasibility(s, clients, fleet, 0);
        REQUIRE_FALSE(rep.feasible());
        bool twice = false, missed = false;
        for (const Violation& v : rep.violations) {
            CHECK(v.kind == ViolationKind::degree);
            if (v.detail.find("visited 2 times") != std::string::npos) twice = true;
            if (v.detail.find("never visited") != std::string::npos) missed = true;
        }
        CHECK(twice);
        CHECK(missed);
    }

    SUBCASE("demand beyond capacity is a capacity violation") {
        Solution s = good;
        clients[1].demand = 9;
        FeasibilityReport rep = check_feasibility(s, clients, fleet, 0);
        REQUIRE_FALSE(rep.feasible());
        CHECK(rep.violations[0].kind == ViolationKind::capacity);
        CHECK(rep.violations[0].detail.find("exceeds capacity") != std::string::npos);
    }

    SUBCASE("a route that skips the depot is a depot violation") {
        Solution s = good;
        s.routes[0].stops = {1, 2, 3, 0};
        FeasibilityReport rep = check_feasibility(s, clients, fleet, 0);
        REQUIRE_FALSE(rep.feasible());
        CHECK(rep.violations[0].kind == ViolationKind::depot);
    }

    SUBCASE("stopping at the depot mid route is a depot violation") {
        Solution s = good;
        s.routes[0].stops = {0, 1, 0, 2, 3, 0};
        FeasibilityReport rep = check_feasibility(s, clients, fleet, 0);
        REQUIRE_FALSE(rep.feasible());
        bool mid = false;
        for (const Violation& v : rep.violations)
            if (v.kind == ViolationKind::depot &&
                v.detail.find("mid-route") != std::string::npos)
                mid = true;
        CHECK(mid);
    }
}

TEST_CASE("violation kinds print their names") {
    CHECK(to_string(ViolationKind::degree) == std::string("degree"));
    CHECK(to_string(ViolationKind::capacity) == std::string("capacity"));
    CHECK(to_string(ViolationKind::depot) == std::string("depot"));
}

TEST_CASE("the path cache reuses shortest path trees") {
    RoadGraph g = path_graph(5);
    PathCache cache(g);
    const ShortestPathResult& a = cache.from(0);
    const ShortestPathResult& b = cache.from(0);
    CHECK(&a == &b);
    CHECK(cache.from(2).dist.at(4) == 2.0);
}
