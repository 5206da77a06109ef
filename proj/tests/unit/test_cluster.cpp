#include "cvrp/cluster.hpp"
#include "cvrp/oracle.hpp"
#include "cvrp/rng.hpp"
#include "cvrp/serialize.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

using namespace cvrp;

namespace {

std::vector<std::pair<int, GeoPoint>> scatter(std::mt19937_64& rng, int n, GeoPoint center,
                                              double spread) {
    std::vector<std::pair<int, GeoPoint>> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back({i, {center.lat + spread * (uniform_unit(rng) - 0.5),
                           center.lon + spread * (uniform_unit(rng) - 0.5)}});
    return pts;
}

std::vector<Client> unit_clients(const std::vector<GeoPoint>& locs) {
    std::vector<Client> clients;
    for (std::size_t i = 0; i < locs.size(); ++i)
        clients.push_back({static_cast<int>(i) + 1, locs[i], 1});
    return clients;
}

}  // namespace

TEST_CASE("kmeans with one cluster averages everything") {
    std::vector<std::pair<int, GeoPoint>> pts{
        {1, {10.0, 20.0}}, {2, {11.0, 21.0}}, {3, {12.0, 25.0}}};
    KMeansResult r = kmeans(pts, 1, 42);
    CHECK(r.iterations == 1);
    REQUIRE(r.centroids.size() == 1);
    CHECK(r.centroids[0].lat == doctest::Approx(11.0));
    CHECK(r.centroids[0].lon == doctest::Approx(22.0));
    for (const auto& [id, c] : r.assignments) CHECK(c == 0);
    REQUIRE(r.objective_trace.size() == 2);
    CHECK(r.objective_trace.back() == r.objective_j);
}

TEST_CASE("kmeans with k equal to n drives the objective to zero") {
    std::mt19937_64 rng(splitmix64(7));
    auto pts = scatter(rng, 6, {40.0, -3.0}, 2.0);
    KMeansResult r = kmeans(pts, 6, 99);
    CHECK(r.objective_j == 0.0);
    std::set<int> used;
    for (const auto& [id, c] : r.assignments) used.insert(c);
    CHECK(used.size() == 6);
}

TEST_CASE("kmeans counts every distance evaluation in the assignment passes") {
    std::mt19937_64 rng(splitmix64(13));
    auto pts = scatter(rng, 20, {48.0, 11.0}, 1.5);
    KMeansResult r = kmeans(pts, 3, 5);
    CHECK(r.assign_distance_evals ==
          static_cast<std::size_t>(r.iterations + 1) * 3u * pts.size());
}

TEST_CASE("kmeans objective never increases between passes") {
    std::mt19937_64 rng(splitmix64(31));
    for (int trial = 0; trial < 20; ++trial) {
        int n = 8 + static_cast<int>(uniform_index(rng, 30));
        int k = 2 + static_cast<int>(uniform_index(rng, 4));
        if (k > n) k = n;
        auto pts = scatter(rng, n, {30.0 + uniform_unit(rng) * 20.0, uniform_unit(rng) * 40.0},
                           4.0);
        KMeansResult r = kmeans(pts, k, derive_seed(500, trial));
        for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
            CHECK(r.objective_trace[i] <=
                  r.objective_trace[i - 1] + 1e-9 * std::max(1.0, r.objective_trace[i - 1]));
    }
}

TEST_CASE("kmeans separates two tight groups") {
    std::mt19937_64 rng(splitmix64(77));
    for (uint64_t seed = 0; seed < 10; ++seed) {
        auto a = scatter(rng, 8, {10.0, 10.0}, 0.2);
        auto b = scatter(rng, 8, {12.0, 14.0}, 0.2);
        std::vector<std::pair<int, GeoPoint>> pts = a;
        for (auto& [id, p] : b) pts.push_back({id + 100, p});
        KMeansResult r = kmeans(pts, 2, seed);
        int group_a = r.assignments.at(a[0].first);
        int group_b = r.assignments.at(b[0].first + 100);
        CHECK(group_a != group_b);
        for (const auto& [id, p] : a) CHECK(r.assignments.at(id) == group_a);
        for (const auto& [id, p] : b) CHECK(r.assignments.at(id + 100) == group_b);
    }
}

TEST_CASE("kmeans input validation") {
    std::vector<std::pair<int, GeoPoint>> pts{{1, {0.0, 0.0}}, {2, {1.0, 1.0}}};
    CHECK_THROWS_AS(kmeans(pts, 0, 1), Error);
    CHECK_THROWS_AS(kmeans(pts, 3, 1), Error);
    CHECK_THROWS_AS(kmeans({}, 1, 1), Error);
    CHECK_THROWS_AS(kmeans(pts, 1, 1, 0), Error);
}

TEST_CASE("kmeans terminates when duplicates make a cluster unrecoverable") {
    std::vector<std::pair<int, GeoPoint>> pts;
    for (int i = 0; i < 5; ++i) pts.push_back({i, {45.0, 9.0}});
    KMeansResult r = kmeans(pts, 2, 3);
    CHECK(r.objective_j == 0.0);
    CHECK(r.iterations <= 100);
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
    std::mt19937_64 rng(splitmix64(101));
    auto pts = scatter(rng, 15, {52.0, 13.0}, 3.0);
    KMeansResult a = kmeans(pts, 3, 12345);
    KMeansResult b = kmeans(pts, 3, 12345);
    CHECK(a.assignments == b.assignments);
    CHECK(a.objective_j == b.objective_j);
    CHECK(a.iterations == b.iterations);
    CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("recursive split stops once a vehicle covers the node") {
    std::vector<Client> clients = unit_clients({{10.0, 10.0}, {10.1, 10.0}, {10.0, 10.1},
                                                {10.1, 10.1}});
    FleetSpec spec{{VehicleType{4, {}}}};
    FleetPlan plan = plan_fleet(4, spec);
    PhaseNode root = recursive_kmeans(clients, spec, plan, 9);
    CHECK(root.is_leaf());
    REQUIRE(root.assigned_vehicle.has_value());
    CHECK(root.assigned_vehicle->type_id == 0);
    CHECK(root.assigned_vehicle->vehicle_index == 0);
    CHECK(root.members.size() == 4);
}

TEST_CASE("recursive split separates far groups into their own vehicles") {
    std::vector<Client> clients = unit_clients({{10.0, 10.0}, {10.1, 10.0}, {10.0, 10.1},
                                                {10.1, 10.1}, {20.0, 30.0}, {20.1, 30.0},
                                                {20.0, 30.1}, {20.1, 30.1}});
    FleetSpec spec{{VehicleType{4, {}}}};
    FleetPlan plan = plan_fleet(8, spec);
    PhaseNode root = recursive_kmeans(clients, spec, plan, 4);
    CHECK_FALSE(root.is_leaf());
    auto leaves = collect_leaves(root);
    REQUIRE(leaves.size() == 2);
    for (const PhaseNode* leaf : leaves) {
        CHECK(leaf->members.size() == 4);
        REQUIRE(leaf->assigned_vehicle.has_value());
    }
    CHECK(leaves[0]->assigned_vehicle->vehicle_index !=
          leaves[1]->assigned_vehicle->vehicle_index);
    std::set<int> first(leaves[0]->members.begin(), leaves[0]->members.end());
    bool near_group = first == std::set<int>{1, 2, 3, 4};
    bool far_group = first == std::set<int>{5, 6, 7, 8};
    CHECK((near_group || far_group));
}

TEST_CASE("recursive split rejects plans that cannot cover demand") {
    std::vector<Client> clients = unit_clients({{0.0, 0.0}, {1.0, 1.0}});
    clients[0].demand = 5;
    clients[1].demand = 5;
    FleetSpec spec{{VehicleType{4, {}}}};
    FleetPlan plan{{2}, 8, 0};
    CHECK_THROWS_WITH_AS(recursive_kmeans(clients, spec, plan, 1),
                         "plan capacity 8 less than total demand 10", Error);
}

TEST_CASE("recursive split reports clients too big for any vehicle") {
    std::vector<Client> clients{{1, {0.0, 0.0}, 5}, {2, {1.0, 1.0}, 3}};
    FleetSpec spec{{VehicleType{4, {}}}};
    FleetPlan plan{{3}, 12, 4};
    CHECK_THROWS_WITH_AS(recursive_kmeans(clients, spec, plan, 1),
                         "unassignable client 1: demand 5 fits no remaining vehicle", Error);
}

TEST_CASE("recursive split validates its inputs") {
    FleetSpec spec{{VehicleType{4, {}}}};
    FleetPlan plan{{1}, 4, 2};
    std::vector<Client> bad_demand{{1, {0.0, 0.0}, 0}, {2, {1.0, 1.0}, 2}};
    CHECK_THROWS_AS(recursive_kmeans(bad_demand, spec, plan, 1), Error);
    std::vector<Client> dup{{1, {0.0, 0.0}, 1}, {1, {1.0, 1.0}, 1}};
    CHECK_THROWS_AS(recursive_kmeans(dup, spec, plan, 1), Error);
}

TEST_CASE("leaves partition the clients and respect vehicle capacity") {
    std::mt19937_64 rng(splitmix64(400));
    for (int trial = 0; trial < 12; ++trial) {
        int n = 6 + static_cast<int>(uniform_index(rng, 25));
        std::vector<Client> clients;
        for (int i = 0; i < n; ++i)
            clients.push_back({i + 1,
                               {20.0 + 10.0 * uniform_unit(rng), 30.0 + 10.0 * uniform_unit(rng)},
                               1 + static_cast<int>(uniform_index(rng, 3))});
        long long demand = 0;
        for (const Client& c : clients) demand += c.demand;
        FleetSpec spec{{VehicleType{4, {}}, VehicleType{6, {}}, VehicleType{8, {}}}};
        // generous plan: geometric splits need slack to pack cleanly
        FleetPlan plan;
        for (const VehicleType& t : spec.types) {
            int count = static_cast<int>((demand + t.capacity - 1) / t.capacity);
            plan.counts.push_back(count);
            plan.total_capacity += static_cast<long long>(count) * t.capacity;
        }
        plan.slack = plan.total_capacity - demand;
        PhaseNode root = recursive_kmeans(clients, spec, plan, derive_seed(7000, trial));
        auto leaves = collect_leaves(root);

        std::set<int> seen;
        std::set<std::pair<int, int>> vehicles;
        for (const PhaseNode* leaf : leaves) {
            REQUIRE(leaf->assigned_vehicle.has_value());
            auto v = *leaf->assigned_vehicle;
            CHECK(vehicles.insert({v.type_id, v.vehicle_index}).second);
            CHECK(v.vehicle_index < plan.counts[v.type_id]);
            long long leaf_demand = 0;
            for (int id : leaf->members) {
                CHECK(seen.insert(id).second);
                leaf_demand += clients[id - 1].demand;
            }
            CHECK(leaf_demand <= spec.types[v.type_id].capacity);
        }
        CHECK(seen.size() == clients.size());
    }
}

TEST_CASE("clustering trees are deterministic for a fixed seed") {
    std::mt19937_64 rng(splitmix64(888));
    std::vector<Client> clients;
    for (int i = 0; i < 17; ++i)
        clients.push_back({i + 1, {35.0 + 5.0 * uniform_unit(rng), 35.0 + 5.0 * uniform_unit(rng)},
                           1 + static_cast<int>(uniform_index(rng, 2))});
    FleetSpec spec{{VehicleType{6, {}}}};
    long long demand = 0;
    for (const Client& c : clients) demand += c.demand;
    FleetPlan plan = plan_fleet(demand, spec);
    PhaseNode a = recursive_kmeans(clients, spec, plan, 2024);
    PhaseNode b = recursive_kmeans(clients, spec, plan, 2024);
    CHECK(tree_to_json(a) == tree_to_json(b));
}

TEST_CASE("leaf assignment prefers the tightest fitting vehicle") {
    std::vector<Client> clients{{1, {10.0, 10.0}, 1}, {2, {10.0, 10.05}, 1},
                                {3, {10.05, 10.0}, 1}};
    FleetSpec spec{{VehicleType{4, {}}, VehicleType{6, {}}}};
    FleetPlan plan{{1, 1}, 10, 7};
    PhaseNode root = recursive_kmeans(clients, spec, plan, 5);
    REQUIRE(root.is_leaf());
    CHECK(root.assigned_vehicle->type_id == 0);
}

TEST_CASE("collect_leaves walks left to right") {
    std::vector<Client> clients = unit_clients({{10.0, 10.0}, {10.1, 10.1}, {20.0, 30.0},
                                                {20.1, 30.1}, {40.0, 50.0}, {40.1, 50.1}});
    FleetSpec spec{{VehicleType{2, {}}}};
    FleetPlan plan = plan_fleet(6, spec);
    PhaseNode root = recursive_kmeans(clients, spec, plan, 77);
    auto leaves = collect_leaves(root);
    ClusterSet set = clusters_from_tree(root, spec, clients);
    REQUIRE(leaves.size() == set.clusters.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        CHECK(set.clusters[i].cluster_id == static_cast<int>(i));
        CHECK(set.clusters[i].members == leaves[i]->members);
    }
}
