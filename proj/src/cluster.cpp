#include "cvrp/cluster.hpp"

#include "cvrp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace cvrp {

namespace {

// k distinct point indices via partial Fisher-Yates on the seeded RNG.
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + uniform_index(rng, n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

GeoPoint mean_point(const std::vector<std::pair<int, GeoPoint>>& points,
                    const std::vector<int>& assign, int cluster) {
    double lat = 0.0, lon = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (assign[i] != cluster) continue;
        lat += points[i].second.lat;
        lon += points[i].second.lon;
        ++count;
    }
    return {lat / static_cast<double>(count), lon / static_cast<double>(count)};
}

}  // namespace

KMeansResult kmeans(const std::vector<std::pair<int, GeoPoint>>& points, int k,
                    std::uint64_t rng_seed, int max_iter, const Metric& metric) {
    const std::size_t n = points.size();
    if (n == 0) throw Error("kmeans: empty point set");
    if (k <= 0) throw Error("kmeans: k must be positive, got " + std::to_string(k));
    if (static_cast<std::size_t>(k) > n)
        throw Error("kmeans: k=" + std::to_string(k) + " exceeds " + std::to_string(n) +
                    " points");
    if (max_iter <= 0) throw Error("kmeans: max_iter must be positive");

    std::mt19937_64 rng(splitmix64(rng_seed));

    KMeansResult res;
    res.centroids.reserve(static_cast<std::size_t>(k));
    for (std::size_t idx : sample_distinct(n, static_cast<std::size_t>(k), rng))
        res.centroids.push_back(points[idx].second);

    std::vector<int> assign(n, -1);

    // Nearest-centroid pass; ties break toward the lower cluster index.
    // Returns whether any point moved and appends J to the trace.
    auto assign_pass = [&]() {
        bool changed = false;
        double j_total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = metric.distance(points[i].second, res.centroids[static_cast<std::size_t>(c)]);
                ++res.assign_distance_evals;
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
            j_total += best_d * best_d;
        }
        res.objective_trace.push_back(j_total);
        return changed;
    };

    // Recompute centroids as member means. Empty clusters are re-seeded to
    // the member point farthest from its current centroid (each point used
    // at most once per pass). Returns whether any re-seed happened.
    auto recompute = [&]() {
        std::vector<std::size_t> size(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) ++size[static_cast<std::size_t>(assign[i])];

        std::vector<std::size_t> taken;
        bool repaired = false;
        for (int c = 0; c < k; ++c) {
            if (size[static_cast<std::size_t>(c)] > 0) {
                res.centroids[static_cast<std::size_t>(c)] = mean_point(points, assign, c);
                continue;
            }
            std::size_t far_idx = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (std::find(taken.begin(), taken.end(), i) != taken.end()) continue;
                double d = metric.distance(points[i].second,
                                           res.centroids[static_cast<std::size_t>(assign[i])]);
                if (d > far_d) {
                    far_d = d;
                    far_idx = i;
                }
            }
            if (far_idx == n) continue;  // fewer distinct points than clusters
            res.centroids[static_cast<std::size_t>(c)] = points[far_idx].second;
            taken.push_back(far_idx);
            repaired = true;
        }
        return repaired;
    };

    auto any_empty = [&]() {
        std::vector<bool> seen(static_cast<std::size_t>(k), false);
        for (std::size_t i = 0; i < n; ++i) seen[static_cast<std::size_t>(assign[i])] = true;
        return std::find(seen.begin(), seen.end(), false) != seen.end();
    };

    assign_pass();
    int repair_failures = 0;
    while (res.iterations < max_iter) {
        bool repaired = recompute();
        bool changed = assign_pass();
        ++res.iterations;
        bool empty = any_empty();
        if (repaired) {
            repair_failures = empty ? repair_failures + 1 : 0;
            if (repair_failures >= 2) break;
        }
        if (!changed && !empty) break;
    }

    res.objective_j = res.objective_trace.back();
    for (std::size_t i = 0; i < n; ++i) res.assignments[points[i].first] = assign[i];
    return res;
}

namespace {

// Remaining vehicles per type during tree construction.
class VehiclePool {
public:
    VehiclePool(const FleetSpec& spec, const FleetPlan& plan) : spec_(spec) {
        if (plan.counts.size() != spec.types.size())
            throw Error("fleet plan does not match fleet spec");
        remaining_ = plan.counts;
        next_index_.assign(spec.types.size(), 0);
    }

    // Smallest remaining capacity that fits the demand; capacity ties go
    // to the lower type id. Empty if nothing fits.
    std::optional<VehicleAssignment> take_best_fit(long long demand) {
        int best = -1;
        for (std::size_t t = 0; t < spec_.types.size(); ++t) {
            if (remaining_[t] <= 0) continue;
            if (spec_.types[t].capacity < demand) continue;
            if (best < 0 || spec_.types[t].capacity < spec_.types[static_cast<std::size_t>(best)].capacity)
                best = static_cast<int>(t);
        }
        if (best < 0) return std::nullopt;
        auto b = static_cast<std::size_t>(best);
        --remaining_[b];
        return VehicleAssignment{best, next_index_[b]++};
    }

    long long max_remaining_capacity() const {
        long long cap = 0;
        for (std::size_t t = 0; t < spec_.types.size(); ++t)
            if (remaining_[t] > 0) cap = std::max(cap, static_cast<long long>(spec_.types[t].capacity));
        return cap;
    }

private:
    const FleetSpec& spec_;
    std::vector<int> remaining_;
    std::vector<int> next_index_;
};

struct TreeBuilder {
    const std::unordered_map<int, const Client*>& by_id;
    VehiclePool& pool;
    int kmeans_max_iter;
    const Metric& metric;

    GeoPoint centroid_of(const std::vector<int>& ids) const {
        double lat = 0.0, lon = 0.0;
        for (int id : ids) {
            lat += by_id.at(id)->location.lat;
            lon += by_id.at(id)->location.lon;
        }
        auto n = static_cast<double>(ids.size());
        return {lat / n, lon / n};
    }

    long long demand_of(const std::vector<int>& ids) const {
        long long d = 0;
        for (int id : ids) d += by_id.at(id)->demand;
        return d;
    }

    // Split into two nonempty halves: kmeans(k=2), one retry with a fresh
    // seed, then a median cut on (lat, lon, id).
    std::pair<std::vector<int>, std::vector<int>> bisect(const std::vector<int>& ids,
                                                         std::uint64_t seed) const {
        std::vector<std::pair<int, GeoPoint>> points;
        points.reserve(ids.size());
        for (int id : ids) points.emplace_back(id, by_id.at(id)->location);

        for (std::uint64_t attempt = 1; attempt <= 2; ++attempt) {
            KMeansResult km = kmeans(points, 2, derive_seed(seed, attempt), kmeans_max_iter, metric);
            std::vector<int> side0, side1;
            for (const auto& [id, c] : km.assignments) (c == 0 ? side0 : side1).push_back(id);
            if (!side0.empty() && !side1.empty()) {
                // map iteration is id-ordered; keep the original input order instead
                auto in_side = [](const std::vector<int>& side, int id) {
                    return std::find(side.begin(), side.end(), id) != side.end();
                };
                std::vector<int> left, right;
                for (int id : ids) (in_side(side0, id) ? left : right).push_back(id);
                return {std::move(left), std::move(right)};
            }
        }

        std::vector<int> sorted = ids;
        std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
            const GeoPoint& pa = by_id.at(a)->location;
            const GeoPoint& pb = by_id.at(b)->location;
            return std::tie(pa.lat, pa.lon, a) < std::tie(pb.lat, pb.lon, b);
        });
        std::size_t half = (sorted.size() + 1) / 2;
        if (half == 0 || half == sorted.size()) throw Error("degenerate geometry: cannot bisect cluster");
        std::vector<int> left(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(half));
        std::vector<int> right(sorted.begin() + static_cast<std::ptrdiff_t>(half), sorted.end());
        return {std::move(left), std::move(right)};
    }

    std::unique_ptr<PhaseNode> build(std::vector<int> ids, std::uint64_t seed) const {
        auto node = std::make_unique<PhaseNode>();
        node->centroid = centroid_of(ids);
        node->members = std::move(ids);

        long long demand = demand_of(node->members);
        if (demand <= pool.max_remaining_capacity()) {
            node->assigned_vehicle = pool.take_best_fit(demand);
            return node;
        }
        if (node->members.size() == 1)
            throw Error("unassignable client " + std::to_string(node->members[0]) +
                        ": demand " + std::to_string(demand) + " fits no remaining vehicle");

        auto [left_ids, right_ids] = bisect(node->members, seed);
        node->left = build(std::move(left_ids), derive_seed(seed, 'L'));
        node->right = build(std::move(right_ids), derive_seed(seed, 'R'));
        return node;
    }
};

}  // namespace

PhaseNode recursive_kmeans(const std::vector<Client>& clients, const FleetSpec& spec,
                           const FleetPlan& plan, std::uint64_t rng_seed, int kmeans_max_iter,
                           const Metric& metric) {
    if (clients.empty()) throw Error("recursive_kmeans: no clients");
    spec.validate();

    std::unordered_map<int, const Client*> by_id;
    long long total_demand = 0;
    for (const Client& c : clients) {
        if (c.demand < 1)
            throw Error("client " + std::to_string(c.id) + " has non-positive demand");
        if (!by_id.emplace(c.id, &c).second)
            throw Error("duplicate client id " + std::to_string(c.id));
        total_demand += c.demand;
    }
    if (total_demand > plan.total_capacity)
        throw Error("plan capacity " + std::to_string(plan.total_capacity) +
                    " less than total demand " + std::to_string(total_demand));

    VehiclePool pool(spec, plan);
    TreeBuilder builder{by_id, pool, kmeans_max_iter, metric};

    std::vector<int> ids;
    ids.reserve(clients.size());
    for (const Client& c : clients) ids.push_back(c.id);

    return std::move(*builder.build(std::move(ids), rng_seed));
}

std::vector<const PhaseNode*> collect_leaves(const PhaseNode& root) {
    std::vector<const PhaseNode*> leaves;
    std::vector<const PhaseNode*> stack{&root};
    while (!stack.empty()) {
        const PhaseNode* node = stack.back();
        stack.pop_back();
        if (node->is_leaf()) {
            leaves.push_back(node);
            continue;
        }
        if (node->right) stack.push_back(node->right.get());
        if (node->left) stack.push_back(node->left.get());
    }
    return leaves;
}

}  // namespace cvrp
