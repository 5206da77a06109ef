#include "cvrp/fleet.hpp"

#include "cvrp/geo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

namespace cvrp {

void FleetSpec::validate() const {
    if (types.empty()) throw Error("fleet spec has no vehicle types");
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (types[i].capacity < 1) {
            throw Error("vehicle type " + std::to_string(i) + " has capacity < 1");
        }
        if (types[i].max_count && *types[i].max_count < 1) {
            throw Error("vehicle type " + std::to_string(i) + " has max_count < 1");
        }
    }
}

int FleetPlan::total_vehicles() const {
    return std::accumulate(counts.begin(), counts.end(), 0);
}

NewtonResult newton_solve(long long n, const FleetSpec& spec, const NewtonConfig& cfg) {
    spec.validate();
    if (n < 0) throw Error("client count must be nonnegative");
    if (cfg.epsilon <= 0.0) throw Error("epsilon must be positive");
    if (cfg.max_iterations < 1) throw Error("max_iterations must be at least 1");

    const std::size_t t = spec.types.size();
    std::vector<double> x = cfg.x0;
    if (x.empty()) {
        x.assign(t, 0.0);
    } else if (x.size() != t) {
        throw Error("x0 dimension does not match vehicle type count");
    }
    for (double v : x)
        if (!std::isfinite(v)) throw Error("x0 must be finite");

    // J = (c_1 ... c_t) is constant; J J^T = sum c_i^2.
    std::vector<double> c(t);
    double jjt = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        c[i] = static_cast<double>(spec.types[i].capacity);
        jjt += c[i] * c[i];
    }

    auto residual = [&] {
        double f = 0.0;
        for (std::size_t i = 0; i < t; ++i) f += x[i] * c[i];
        return f - static_cast<double>(n);
    };

    int iterations = 0;
    double f = residual();
    while (std::abs(f) > cfg.epsilon) {
        if (iterations >= cfg.max_iterations) {
            std::ostringstream msg;
            msg << "newton solve did not reach epsilon within " << cfg.max_iterations
                << " iterations; last iterate (";
            for (std::size_t i = 0; i < t; ++i) msg << (i ? ", " : "") << x[i];
            msg << ")";
            throw Error(msg.str());
        }
        const double scale = -f / jjt;
        for (std::size_t i = 0; i < t; ++i) x[i] += scale * c[i];
        ++iterations;
        f = residual();
    }
    return NewtonResult{std::move(x), iterations};
}

namespace {

// Suffix-feasibility tables for the integerization DP. row(s) is a bitmask
// over vehicle totals v: bit v set means types i..t-1 can reach sum s using
// exactly v vehicles within their count bounds.
class FeasibilityTable {
  public:
    FeasibilityTable(std::size_t sums, std::size_t vmax)
        : words_((vmax + 64) / 64), bits_(sums * words_, 0) {}

    std::uint64_t* row(std::size_t s) { return bits_.data() + s * words_; }
    const std::uint64_t* row(std::size_t s) const { return bits_.data() + s * words_; }
    std::size_t words() const { return words_; }

    void set(std::size_t s, std::size_t v) { row(s)[v / 64] |= 1ULL << (v % 64); }
    bool test(std::size_t s, std::size_t v) const {
        return (row(s)[v / 64] >> (v % 64)) & 1ULL;
    }

    // dst(s) |= src(s0) << shift, word-wise.
    static void or_shifted(std::uint64_t* dst, const std::uint64_t* src, std::size_t words,
                           std::size_t shift) {
        const std::size_t word_shift = shift / 64;
        const std::size_t bit_shift = shift % 64;
        for (std::size_t w = words; w-- > word_shift;) {
            std::uint64_t v = src[w - word_shift] << bit_shift;
            if (bit_shift && w > word_shift) {
                v |= src[w - word_shift - 1] >> (64 - bit_shift);
            }
            dst[w] |= v;
        }
    }

    bool any(std::size_t s) const {
        const std::uint64_t* r = row(s);
        for (std::size_t w = 0; w < words_; ++w) {
            if (r[w]) return true;
        }
        return false;
    }

    int lowest_bit(std::size_t s) const {
        const std::uint64_t* r = row(s);
        for (std::size_t w = 0; w < words_; ++w) {
            if (r[w]) return static_cast<int>(w * 64 + std::countr_zero(r[w]));
        }
        return -1;
    }

  private:
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

}  // namespace

FleetPlan integerize(const std::vector<double>& x_star, long long n, const FleetSpec& spec) {
    spec.validate();
    const std::size_t t = spec.types.size();
    if (x_star.size() != t) throw Error("x* dimension does not match vehicle type count");
    for (double v : x_star) {
        if (v < 0.0) throw Error("x* has a negative component");
    }
    if (n < 0) throw Error("client count must be nonnegative");

    // Per-type search bound: a minimal-slack plan never uses more than
    // ceil(n / c_i) vehicles of type i, since that many alone already cover n.
    std::vector<long long> bound(t);
    long long vmax = 0;
    long long reachable_capacity = 0;
    int cap_max = 0;
    for (std::size_t i = 0; i < t; ++i) {
        const long long c = spec.types[i].capacity;
        long long b = n > 0 ? (n + c - 1) / c : 0;
        if (spec.types[i].max_count) b = std::min(b, static_cast<long long>(*spec.types[i].max_count));
        bound[i] = b;
        vmax += b;
        reachable_capacity += b * c;
        cap_max = std::max(cap_max, spec.types[i].capacity);
    }
    if (reachable_capacity < n) throw Error("insufficient fleet");

    const std::size_t sums = static_cast<std::size_t>(n + cap_max);  // totals 0 .. n+cap_max-1
    if (sums * static_cast<std::size_t>(vmax + 1) > (1ULL << 28)) {
        throw Error("fleet integerization instance too large");
    }

    // fe[i]: what the suffix starting at type i can reach. Built backwards.
    std::vector<FeasibilityTable> fe;
    fe.reserve(t + 1);
    for (std::size_t i = 0; i <= t; ++i) fe.emplace_back(sums, static_cast<std::size_t>(vmax));
    fe[t].set(0, 0);
    for (std::size_t i = t; i-- > 0;) {
        const std::size_t c = static_cast<std::size_t>(spec.types[i].capacity);
        for (std::size_t s = 0; s < sums; ++s) {
            const std::size_t max_x = std::min(static_cast<std::size_t>(bound[i]), s / c);
            for (std::size_t x = 0; x <= max_x; ++x) {
                FeasibilityTable::or_shifted(fe[i].row(s), fe[i + 1].row(s - x * c), fe[i].words(), x);
            }
        }
    }

    // Smallest reachable total >= n, then fewest vehicles for that total.
    std::size_t target = static_cast<std::size_t>(n);
    while (target < sums && !fe[0].any(target)) ++target;
    if (target >= sums) throw Error("insufficient fleet");
    int vehicles = fe[0].lowest_bit(target);

    // Lexicographically smallest counts: take the fewest of each type in
    // turn that leaves the remainder feasible for the suffix.
    FleetPlan plan;
    plan.counts.assign(t, 0);
    std::size_t s = target;
    std::size_t v = static_cast<std::size_t>(vehicles);
    for (std::size_t i = 0; i < t; ++i) {
        const std::size_t c = static_cast<std::size_t>(spec.types[i].capacity);
        for (std::size_t x = 0; x <= std::min(static_cast<std::size_t>(bound[i]), v); ++x) {
            if (x * c > s) break;
            if (fe[i + 1].test(s - x * c, v - x)) {
                plan.counts[i] = static_cast<int>(x);
                s -= x * c;
                v -= x;
                break;
            }
        }
    }

    plan.total_capacity = 0;
    for (std::size_t i = 0; i < t; ++i) {
        plan.total_capacity += static_cast<long long>(plan.counts[i]) * spec.types[i].capacity;
    }
    plan.slack = plan.total_capacity - n;
    return plan;
}

FleetPlan plan_fleet(long long n, const FleetSpec& spec, const NewtonConfig& cfg,
                     NewtonResult* newton_out) {
    NewtonResult nr = newton_solve(n, spec, cfg);
    std::vector<double> clamped = nr.x;
    for (double& v : clamped) v = std::max(v, 0.0);
    if (newton_out) *newton_out = std::move(nr);
    return integerize(clamped, n, spec);
}

}  // namespace cvrp
