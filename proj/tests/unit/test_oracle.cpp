#include "cvrp/oracle.hpp"
#include "cvrp/rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace cvrp;

namespace {

DistanceFn euclid(const std::map<int, GeoPoint>& pts) {
    return [pts](int a, int b) {
        const GeoPoint& p = pts.at(a);
        const GeoPoint& q = pts.at(b);
        return std::hypot(p.lat - q.lat, p.lon - q.lon);
    };
}

}  // namespace

TEST_CASE("all pairs distances on a triangle") {
    RoadGraph g;
    g.vertices = {{0, {}}, {1, {}}, {2, {}}};
    g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 5.0}};
    ApspResult r = apsp_floyd_warshall(g);
    CHECK(r.between(0, 2) == 2.0);
    CHECK(r.between(2, 0) == 2.0);
    CHECK(r.between(0, 0) == 0.0);
}

TEST_CASE("all pairs distances without edges are infinite off the diagonal") {
    RoadGraph g;
    g.vertices = {{0, {}}, {1, {}}};
    ApspResult r = apsp_floyd_warshall(g);
    CHECK(r.between(0, 0) == 0.0);
    CHECK(std::isinf(r.between(0, 1)));
}

TEST_CASE("all pairs oracle refuses oversized graphs") {
    RoadGraph g;
    for (int i = 0; i < 13; ++i) g.vertices.push_back({i, {}});
    CHECK_THROWS_AS(apsp_floyd_warshall(g), Error);
}

TEST_CASE("a single stop tour is out and back") {
    std::map<int, GeoPoint> pts{{0, {0.0, 0.0}}, {1, {3.0, 4.0}}};
    TourResult t = exact_tour(0, {1}, euclid(pts));
    CHECK(t.order == std::vector<int>{1});
    CHECK(t.cost == doctest::Approx(10.0));
}

TEST_CASE("two stops visit the cheaper order first") {
    std::map<int, GeoPoint> pts{{0, {0.0, 0.0}}, {1, {1.0, 0.0}}, {2, {2.0, 0.0}}};
    TourResult t = exact_tour(0, {2, 1}, euclid(pts));
    CHECK(t.order == std::vector<int>{1, 2});
    CHECK(t.cost == doctest::Approx(4.0));
}

TEST_CASE("dynamic programming matches brute force permutation search") {
    std::mt19937_64 rng(splitmix64(314));
    for (int trial = 0; trial < 6; ++trial) {
        std::map<int, GeoPoint> pts{{0, {0.0, 0.0}}};
        std::vector<int> stops;
        for (int i = 1; i <= 8; ++i) {
            pts[i] = {10.0 * uniform_unit(rng), 10.0 * uniform_unit(rng)};
            stops.push_back(i);
        }
        DistanceFn d = euclid(pts);
        TourResult dp = exact_tour(0, stops, d);
        TourResult brute = exact_tour_brute(0, stops, d);
        CHECK(std::abs(dp.cost - brute.cost) <= 1e-12 * std::max(1.0, brute.cost));
    }
}

TEST_CASE("tour oracle enforces its stop budget") {
    std::map<int, GeoPoint> pts{{0, {0.0, 0.0}}};
    std::vector<int> stops;
    for (int i = 1; i <= 11; ++i) {
        pts[i] = {static_cast<double>(i), 0.0};
        stops.push_back(i);
    }
    CHECK_THROWS_AS(exact_tour(0, stops, euclid(pts)), Error);
    OracleBudget wide;
    wide.max_tour_stops = 11;
    CHECK_NOTHROW(exact_tour(0, stops, euclid(pts), wide));
}

TEST_CASE("tour oracle rejects unreachable stops") {
    DistanceFn d = [](int, int) { return std::numeric_limits<double>::infinity(); };
    CHECK_THROWS_WITH_AS(exact_tour(0, {1}, d), "no feasible tour: stops unreachable", Error);
}

TEST_CASE("partition objective sums squared distances to group centroids") {
    Metric planar{DistanceMode::planar, {}};
    std::vector<std::pair<int, GeoPoint>> pts{
        {1, {0.0, 0.0}}, {2, {2.0, 0.0}}, {3, {10.0, 0.0}}};
    std::map<int, int> assign{{1, 0}, {2, 0}, {3, 1}};
    // group 0 centroid (1,0): 1 + 1; group 1 exact: 0
    CHECK(partition_objective(pts, assign, planar) == doctest::Approx(2.0));

    std::map<int, int> missing{{1, 0}, {3, 1}};
    CHECK_THROWS_WITH_AS(partition_objective(pts, missing, planar),
                         "missing assignment for point 2", Error);
}

TEST_CASE("the best bipartition of two points separates them") {
    std::vector<std::pair<int, GeoPoint>> pts{{1, {0.0, 0.0}}, {2, {5.0, 5.0}}};
    BipartitionResult r = best_bipartition(pts);
    CHECK(r.objective_j == 0.0);
    CHECK(r.assignments.at(1) != r.assignments.at(2));
}

TEST_CASE("the best bipartition recovers well separated groups") {
    Metric planar{DistanceMode::planar, {}};
    std::vector<std::pair<int, GeoPoint>> pts{
        {1, {0.0, 0.0}}, {2, {0.1, 0.0}}, {3, {0.0, 0.1}},
        {4, {9.0, 9.0}}, {5, {9.1, 9.0}}, {6, {9.0, 9.1}}};
    BipartitionResult r = best_bipartition(pts, planar);
    CHECK(r.assignments.at(1) == r.assignments.at(2));
    CHECK(r.assignments.at(2) == r.assignments.at(3));
    CHECK(r.assignments.at(4) == r.assignments.at(5));
    CHECK(r.assignments.at(5) == r.assignments.at(6));
    CHECK(r.assignments.at(1) != r.assignments.at(4));

    // no hand built split beats the optimum
    std::mt19937_64 rng(splitmix64(42));
    for (int trial = 0; trial < 50; ++trial) {
        std::map<int, int> alt;
        for (const auto& [id, p] : pts) alt[id] = static_cast<int>(uniform_index(rng, 2));
        CHECK(r.objective_j <= partition_objective(pts, alt, planar) + 1e-12);
    }
}

TEST_CASE("bipartition oracle guards its budget and inputs") {
    std::vector<std::pair<int, GeoPoint>> big;
    for (int i = 0; i < 13; ++i) big.push_back({i, {static_cast<double>(i), 0.0}});
    CHECK_THROWS_AS(best_bipartition(big), Error);
    CHECK_THROWS_WITH_AS(best_bipartition({{1, {0.0, 0.0}}}),
                         "bipartition needs at least 2 points", Error);
}

TEST_CASE("exact fleet enumeration finds minimal slack plans") {
    FleetSpec spec{{VehicleType{4, {}}, VehicleType{6, {}}}};
    FleetPlan p = exact_fleet(10, spec);
    CHECK(p.counts == std::vector<int>{1, 1});
    CHECK(p.slack == 0);
    CHECK(p.total_capacity == 10);

    FleetPlan zero = exact_fleet(0, spec);
    CHECK(zero.counts == std::vector<int>{0, 0});
    CHECK(zero.total_vehicles() == 0);
}

TEST_CASE("exact fleet enumeration prefers fewer vehicles then lexicographic counts") {
    FleetSpec spec{{VehicleType{4, {}}, VehicleType{6, {}}}};
    FleetPlan p = exact_fleet(12, spec);
    CHECK(p.slack == 0);
    CHECK(p.counts == std::vector<int>{0, 2});  // 2 vehicles beat 3x4

    FleetSpec twin{{VehicleType{4, {}}, VehicleType{4, {}}}};
    FleetPlan q = exact_fleet(8, twin);
    CHECK(q.counts == std::vector<int>{0, 2});  // lex smallest among equals
}

TEST_CASE("exact fleet enumeration respects availability caps") {
    FleetSpec spec{{VehicleType{4, 2}, VehicleType{6, 1}}};
    FleetPlan p = exact_fleet(14, spec);
    CHECK(p.counts == std::vector<int>{2, 1});
    CHECK_THROWS_WITH_AS(exact_fleet(20, spec),
                         "infeasible fleet: available capacity cannot cover 20", Error);
}

TEST_CASE("oracle budgets must be positive") {
    OracleBudget b;
    b.max_vertices = 0;
    CHECK_THROWS_WITH_AS(b.validate(), "oracle budgets must be positive", Error);
}
