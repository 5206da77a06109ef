#pragma once

#include <optional>
#include <vector>

namespace cvrp {

// One vehicle type. type_id is the index into FleetSpec::types.
struct VehicleType {
    int capacity = 0;                 // >= 1
    std::optional<int> max_count{};   // empty = unbounded
};

struct FleetSpec {
    std::vector<VehicleType> types;

    void validate() const;  // throws on empty spec, capacity < 1, max_count < 1
};

// Solved integer vehicle counts. counts[i] pairs with spec.types[i].
struct FleetPlan {
    std::vector<int> counts;
    long long total_capacity = 0;
    long long slack = 0;  // total_capacity - n, >= 0 for an accepted plan

    int total_vehicles() const;
};

struct NewtonConfig {
    double epsilon = 1e-9;
    int max_iterations = 50;
    std::vector<double> x0{};  // empty = zero vector
};

struct NewtonResult {
    std::vector<double> x;
    int iterations = 0;
};

// Root of f(x) = sum_i x_i c_i = n by Newton iteration. The residual
// F(x) = f(x) - n is scalar while x has t components, so the step is the
// least-norm Newton update d = -F(x) J^T / (J J^T) with the constant
// Jacobian row J = (c_1 ... c_t); for t = 1 this is the classical scalar
// step. Linear f means one step lands exactly; the max_iterations guard
// is kept for arbitrary x0 and throws carrying the last iterate in the
// message.
NewtonResult newton_solve(long long n, const FleetSpec& spec, const NewtonConfig& cfg = {});

// Nonnegative integer counts with sum_i x_i c_i >= n, minimizing slack,
// then total vehicle count, then the lexicographically smallest count
// vector, subject to max_count bounds. Implemented as a bounded-knapsack
// reachability DP over totals in [0, n + max capacity), so the result is
// the slack-optimal plan regardless of how the real-valued seed rounds.
// Throws "insufficient fleet" when the bounded fleet cannot cover n.
FleetPlan integerize(const std::vector<double>& x_star, long long n, const FleetSpec& spec);

// newton_solve then integerize, with negative components clamped to zero
// in between. Pass newton_out to capture the real-valued solve.
FleetPlan plan_fleet(long long n, const FleetSpec& spec, const NewtonConfig& cfg = {},
                     NewtonResult* newton_out = nullptr);

}  // namespace cvrp
