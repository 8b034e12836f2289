#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "uavopt/errors.hpp"
#include "uavopt/qaoa.hpp"
#include "uavopt/qubo.hpp"

namespace uavopt {

// A finished aerial route handed to the fleet: duration covers transit plus the
// per-route incidental block.
struct RouteTask {
    int id = 0;
    double duration = 0.0;  // [h]
};

// assignment[i] = drone index of tasks[i].
using Assignment = std::vector<int>;

struct TimelineEntry {
    int route_id = 0;
    double start = 0.0;
    double completion = 0.0;
};

struct ScheduleReport {
    Assignment assignment;
    std::vector<std::vector<TimelineEntry>> timelines;  // one per drone
    double makespan = 0.0;  // [h]
    int drones = 0;
    std::string mode;  // "direct", "pure" or "hybrid"
    bool classical_fallback = false;
};

struct SchedulingConfig {
    double recharge_time = 1.25;  // tau_c [h]
    int pure_variable_budget = 24;
    QaoaConfig qaoa;
};

// Builds the per-drone timelines: consecutive routes on one drone are separated
// by exactly one recharge; there is no recharge after the final route. Queue
// order within a drone follows the task input order (completion is order-free).
inline ScheduleReport makespan(std::span<const RouteTask> tasks, const Assignment& assignment,
                               int drones, double recharge_time) {
    if (drones < 1) throw InputError("makespan: need at least one drone");
    if (assignment.size() != tasks.size())
        throw InputError("makespan: assignment does not cover all routes");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!(tasks[i].duration > 0.0)) throw InputError("makespan: route durations must be positive");
        if (assignment[i] < 0 || assignment[i] >= drones)
            throw InputError("makespan: route " + std::to_string(tasks[i].id) +
                             " has no valid drone assignment");
    }

    ScheduleReport report;
    report.assignment = assignment;
    report.drones = drones;
    report.timelines.assign(static_cast<std::size_t>(drones), {});
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& timeline = report.timelines[static_cast<std::size_t>(assignment[i])];
        const double ready = timeline.empty() ? 0.0 : timeline.back().completion + recharge_time;
        timeline.push_back(TimelineEntry{tasks[i].id, ready, ready + tasks[i].duration});
    }
    for (const auto& timeline : report.timelines)
        if (!timeline.empty()) report.makespan = std::max(report.makespan, timeline.back().completion);
    return report;
}

namespace detail {

inline double total_duration(std::span<const RouteTask> tasks) {
    double t = 0.0;
    for (const RouteTask& task : tasks) t += task.duration;
    return t;
}

inline double max_duration(std::span<const RouteTask> tasks) {
    double t = 0.0;
    for (const RouteTask& task : tasks) t = std::max(t, task.duration);
    return t;
}

}  // namespace detail

// Dense route-to-drone encoding over n*m variables x[i*m + a].
// Penalties: A keeps each route on exactly one drone, U charges every idle
// drone (an indicator, evaluated pseudo-Boolean), and the squared-load term
// pushes the per-drone time loads toward the mean.
struct PureScheduleModel {
    int n = 0;
    int m = 0;
    double assign_weight = 0.0;  // A
    double usage_weight = 0.0;   // U
    double load_weight = 0.0;    // per (maxT)^2 normalization
    std::vector<double> durations;

    int var(int route, int drone) const { return route * m + drone; }

    double evaluate(std::span<const std::uint8_t> x) const {
        const double total = [&] {
            double t = 0.0;
            for (double d : durations) t += d;
            return t;
        }();
        double energy = 0.0;
        for (int i = 0; i < n; ++i) {
            int count = 0;
            for (int a = 0; a < m; ++a) count += x[static_cast<std::size_t>(var(i, a))];
            energy += assign_weight * (count - 1) * (count - 1);
        }
        for (int a = 0; a < m; ++a) {
            bool used = false;
            double load = 0.0;
            for (int i = 0; i < n; ++i) {
                if (x[static_cast<std::size_t>(var(i, a))]) {
                    used = true;
                    load += durations[static_cast<std::size_t>(i)];
                }
            }
            if (!used) energy += usage_weight;
            const double dev = load - total / m;
            energy += load_weight * dev * dev;
        }
        return energy;
    }
};

inline PureScheduleModel build_pure_qubo(std::span<const RouteTask> tasks, int m,
                                         int variable_budget = 24) {
    const int n = static_cast<int>(tasks.size());
    if (m < 1) throw InputError("build_pure_qubo: need at least one drone");
    if (n * m > variable_budget)
        throw CapacityError("build_pure_qubo: " + std::to_string(n * m) +
                            " variables exceed the pure-mode budget of " +
                            std::to_string(variable_budget));
    PureScheduleModel model;
    model.n = n;
    model.m = m;
    for (const RouteTask& t : tasks) model.durations.push_back(t.duration);

    const double max_t = std::max(detail::max_duration(tasks), 1e-12);
    const double scale = detail::total_duration(tasks) / max_t;  // dimensionless load bound
    model.load_weight = 1.0 / (max_t * max_t);
    model.usage_weight = scale * scale + 1.0;
    model.assign_weight = model.usage_weight + scale * scale + 1.0;
    return model;
}

inline CostModel as_cost_model(const PureScheduleModel& model) {
    return CostModel{model.n * model.m,
                     [model](std::span<const std::uint8_t> x) { return model.evaluate(x); }};
}

// Decodes a pure-model bitstring; routes with zero or multiple set drones come
// back as -1 for the repair step.
inline std::vector<int> decode_pure(const PureScheduleModel& model, std::span<const std::uint8_t> x) {
    std::vector<int> raw(static_cast<std::size_t>(model.n), -1);
    for (int i = 0; i < model.n; ++i) {
        int chosen = -1;
        bool unique = true;
        for (int a = 0; a < model.m; ++a) {
            if (!x[static_cast<std::size_t>(model.var(i, a))]) continue;
            if (chosen >= 0) unique = false;
            chosen = a;
        }
        raw[static_cast<std::size_t>(i)] = unique ? chosen : -1;
    }
    return raw;
}

// Logarithmic encoding: ceil(log2 m) bits per route, decoded as a binary drone
// index. Invalid indices (>= m) are penalized, not forbidden.
struct HybridEncoding {
    int n = 0;
    int m = 0;
    int bits_per_route = 0;
    double invalid_penalty = 0.0;  // P
    double balance_weight = 0.0;   // w_bal, route-count balancing
    double time_weight = 1.0;      // w_time, duration balancing
    std::vector<double> durations;

    int var(int route, int bit) const { return route * bits_per_route + bit; }
    int n_vars() const { return n * bits_per_route; }

    int decode_route(int route, std::span<const std::uint8_t> x) const {
        int value = 0;
        for (int b = 0; b < bits_per_route; ++b)
            value |= x[static_cast<std::size_t>(var(route, b))] << b;
        return value;
    }

    double evaluate(std::span<const std::uint8_t> x) const {
        const double total = [&] {
            double t = 0.0;
            for (double d : durations) t += d;
            return t;
        }();
        std::vector<int> counts(static_cast<std::size_t>(m), 0);
        std::vector<double> loads(static_cast<std::size_t>(m), 0.0);
        double energy = 0.0;
        for (int i = 0; i < n; ++i) {
            const int drone = decode_route(i, x);
            if (drone >= m) {
                energy += invalid_penalty;
                continue;
            }
            ++counts[static_cast<std::size_t>(drone)];
            loads[static_cast<std::size_t>(drone)] += durations[static_cast<std::size_t>(i)];
        }
        for (int a = 0; a < m; ++a) {
            const double count_dev = counts[static_cast<std::size_t>(a)] - static_cast<double>(n) / m;
            energy += balance_weight * count_dev * count_dev;
            const double load_dev = loads[static_cast<std::size_t>(a)] - total / m;
            energy += time_weight * load_dev * load_dev;
        }
        return energy;
    }
};

inline HybridEncoding build_hybrid_qubo(std::span<const RouteTask> tasks, int m) {
    if (m < 2) throw InputError("build_hybrid_qubo: log encoding requires at least two drones");
    HybridEncoding enc;
    enc.n = static_cast<int>(tasks.size());
    enc.m = m;
    enc.bits_per_route = static_cast<int>(std::ceil(std::log2(static_cast<double>(m))));
    for (const RouteTask& t : tasks) enc.durations.push_back(t.duration);

    const double total = detail::total_duration(tasks);
    const double mean = enc.n > 0 ? total / enc.n : 0.0;
    enc.invalid_penalty = 10.0 * std::max(total, 1e-12);
    enc.balance_weight = mean * mean;
    enc.time_weight = 1.0;
    return enc;
}

inline CostModel as_cost_model(const HybridEncoding& enc) {
    return CostModel{enc.n_vars(),
                     [enc](std::span<const std::uint8_t> x) { return enc.evaluate(x); }};
}

inline std::vector<int> decode_hybrid(const HybridEncoding& enc, std::span<const std::uint8_t> x) {
    if (static_cast<int>(x.size()) != enc.n_vars())
        throw InputError("decode_hybrid: bit vector length does not match encoding");
    std::vector<int> raw(static_cast<std::size_t>(enc.n));
    for (int i = 0; i < enc.n; ++i) raw[static_cast<std::size_t>(i)] = enc.decode_route(i, x);
    return raw;
}

// Classical correction. First every route with an invalid drone goes to the
// least-loaded drone (load includes recharge overhead; ties pick the lowest
// index). Then, while a drone sits idle and a donor has two or more routes, the
// shortest route of the most-loaded drone moves to the idle one.
inline Assignment repair(std::vector<int> raw, std::span<const RouteTask> tasks, int m,
                         double recharge_time) {
    const int n = static_cast<int>(tasks.size());
    if (static_cast<int>(raw.size()) != n) throw InputError("repair: raw assignment size mismatch");
    if (m < 1) throw InputError("repair: need at least one drone");

    std::vector<double> duration_sum(static_cast<std::size_t>(m), 0.0);
    std::vector<int> count(static_cast<std::size_t>(m), 0);
    auto load_of = [&](int a) {
        return count[static_cast<std::size_t>(a)] == 0
                   ? 0.0
                   : duration_sum[static_cast<std::size_t>(a)] +
                         recharge_time * (count[static_cast<std::size_t>(a)] - 1);
    };
    auto place = [&](int i, int a) {
        raw[static_cast<std::size_t>(i)] = a;
        duration_sum[static_cast<std::size_t>(a)] += tasks[static_cast<std::size_t>(i)].duration;
        ++count[static_cast<std::size_t>(a)];
    };
    auto remove = [&](int i) {
        const int a = raw[static_cast<std::size_t>(i)];
        duration_sum[static_cast<std::size_t>(a)] -= tasks[static_cast<std::size_t>(i)].duration;
        --count[static_cast<std::size_t>(a)];
    };

    for (int i = 0; i < n; ++i)
        if (raw[static_cast<std::size_t>(i)] >= 0 && raw[static_cast<std::size_t>(i)] < m)
            place(i, raw[static_cast<std::size_t>(i)]);

    for (int i = 0; i < n; ++i) {
        if (raw[static_cast<std::size_t>(i)] >= 0 && raw[static_cast<std::size_t>(i)] < m) continue;
        int best = 0;
        for (int a = 1; a < m; ++a)
            if (load_of(a) < load_of(best)) best = a;
        place(i, best);
    }

    while (true) {
        int idle = -1;
        for (int a = 0; a < m; ++a)
            if (count[static_cast<std::size_t>(a)] == 0) {
                idle = a;
                break;
            }
        if (idle < 0) break;
        int donor = -1;
        for (int a = 0; a < m; ++a) {
            if (count[static_cast<std::size_t>(a)] < 2) continue;
            if (donor < 0 || load_of(a) > load_of(donor)) donor = a;
        }
        if (donor < 0) break;  // not enough routes to occupy every drone
        int shortest = -1;
        for (int i = 0; i < n; ++i) {
            if (raw[static_cast<std::size_t>(i)] != donor) continue;
            if (shortest < 0 ||
                tasks[static_cast<std::size_t>(i)].duration < tasks[static_cast<std::size_t>(shortest)].duration)
                shortest = i;
        }
        remove(shortest);
        place(shortest, idle);
    }
    return raw;
}

struct BruteScheduleResult {
    Assignment assignment;
    double makespan = 0.0;
};

// Exhaustive makespan minimum over all m^n assignments (lexicographically
// smallest winner on ties). Enumeration is capped at one million candidates.
inline BruteScheduleResult brute_force_schedule(std::span<const RouteTask> tasks, int m,
                                                double recharge_time,
                                                std::uint64_t cap = 1000000) {
    const int n = static_cast<int>(tasks.size());
    if (m < 1) throw InputError("brute_force_schedule: need at least one drone");
    double combos = 1.0;
    for (int i = 0; i < n; ++i) combos *= m;
    if (combos > static_cast<double>(cap))
        throw CapacityError("brute_force_schedule: m^n exceeds enumeration cap");

    Assignment assignment(static_cast<std::size_t>(n), 0);
    BruteScheduleResult best;
    best.makespan = std::numeric_limits<double>::infinity();
    std::vector<double> duration_sum(static_cast<std::size_t>(m));
    std::vector<int> count(static_cast<std::size_t>(m));
    while (true) {
        std::fill(duration_sum.begin(), duration_sum.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (int i = 0; i < n; ++i) {
            duration_sum[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])] +=
                tasks[static_cast<std::size_t>(i)].duration;
            ++count[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
        }
        double mk = 0.0;
        for (int a = 0; a < m; ++a)
            if (count[static_cast<std::size_t>(a)] > 0)
                mk = std::max(mk, duration_sum[static_cast<std::size_t>(a)] +
                                      recharge_time * (count[static_cast<std::size_t>(a)] - 1));
        if (mk < best.makespan) best = BruteScheduleResult{assignment, mk};

        // advance the mixed-radix odometer; the last position is least
        // significant, so candidates appear in lexicographic order
        int pos = n - 1;
        while (pos >= 0 && assignment[static_cast<std::size_t>(pos)] == m - 1) {
            assignment[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++assignment[static_cast<std::size_t>(pos)];
    }
    return best;
}

enum class ScheduleMode { Pure, Hybrid };

// Full scheduling pipeline: encode, minimize, decode, repair, timeline.
// A single drone needs no optimization; pure mode refuses to exceed its
// variable budget while hybrid mode always produces a schedule.
inline ScheduleReport schedule(std::span<const RouteTask> tasks, int m, ScheduleMode mode,
                               const SchedulingConfig& config) {
    if (m < 1) throw InputError("schedule: need at least one drone");
    if (tasks.empty()) throw InputError("schedule: no routes to schedule");

    if (m == 1) {
        Assignment all_zero(tasks.size(), 0);
        ScheduleReport report = makespan(tasks, all_zero, m, config.recharge_time);
        report.mode = "direct";
        return report;
    }

    std::vector<int> raw;
    bool fallback = false;
    if (mode == ScheduleMode::Pure) {
        const PureScheduleModel model = build_pure_qubo(tasks, m, config.pure_variable_budget);
        const QaoaResult res = qaoa_minimize(as_cost_model(model), config.qaoa);
        fallback = res.classical_fallback;
        raw = decode_pure(model, res.best_bits);
    } else {
        const HybridEncoding enc = build_hybrid_qubo(tasks, m);
        const QaoaResult res = qaoa_minimize(as_cost_model(enc), config.qaoa);
        fallback = res.classical_fallback;
        raw = decode_hybrid(enc, res.best_bits);
    }

    const Assignment repaired = repair(std::move(raw), tasks, m, config.recharge_time);
    ScheduleReport report = makespan(tasks, repaired, m, config.recharge_time);
    report.mode = mode == ScheduleMode::Pure ? "pure" : "hybrid";
    report.classical_fallback = fallback;
    return report;
}

}  // namespace uavopt
