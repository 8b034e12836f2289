#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uavopt/drone.hpp"
#include "uavopt/errors.hpp"
#include "uavopt/qaoa.hpp"
#include "uavopt/qubo.hpp"

namespace uavopt {

inline constexpr double kTimeEps = 1e-9;
inline constexpr double kLoadEps = 1e-9;

struct NodePoint {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
};

// Depot-anchored delivery problem: node 0 is the depot, nodes 1..n are customers.
struct RoutingInstance {
    std::vector<NodePoint> nodes;
    std::vector<double> demands;  // demands[0] == 0
    std::vector<std::vector<double>> dist;
    DroneParams params;

    int n_customers() const { return static_cast<int>(nodes.size()) - 1; }
    double distance(int i, int j) const {
        return dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
};

inline RoutingInstance build_instance(std::vector<NodePoint> nodes, std::vector<double> demands,
                                      DroneParams params) {
    params.validate();
    if (nodes.empty()) throw InputError("build_instance: no nodes");
    if (nodes.size() != demands.size())
        throw InputError("build_instance: node and demand counts differ");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!std::isfinite(nodes[i].x) || !std::isfinite(nodes[i].y))
            throw InputError("build_instance: non-finite coordinate at node " + std::to_string(i));
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i].id == nodes[j].id)
                throw InputError("build_instance: duplicate node id " + std::to_string(nodes[i].id));
    }
    if (demands[0] != 0.0) throw InputError("build_instance: depot must have zero demand");
    for (std::size_t i = 1; i < demands.size(); ++i) {
        if (!(demands[i] > 0.0))
            throw InputError("build_instance: customer " + std::to_string(i) +
                             " must have positive demand");
        if (demands[i] > params.payload_capacity + kLoadEps)
            throw InfeasibleError("build_instance: demand " + std::to_string(demands[i]) +
                                  " of customer " + std::to_string(i) + " exceeds payload capacity");
    }

    RoutingInstance inst;
    inst.params = params;
    inst.demands = std::move(demands);
    const std::size_t n = nodes.size();
    inst.dist.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::hypot(nodes[i].x - nodes[j].x, nodes[i].y - nodes[j].y);
            inst.dist[i][j] = d;
            inst.dist[j][i] = d;
        }
    inst.nodes = std::move(nodes);
    return inst;
}

// Ordered customer indices; the depot endpoints are implicit.
struct Route {
    std::vector<int> customers;
};

struct BatchOfRoutes {
    std::vector<Route> routes;
    double total_time = 0.0;  // cached batch objective [h]
};

inline double route_load(const RoutingInstance& inst, const Route& r) {
    double load = 0.0;
    for (int c : r.customers) load += inst.demands[static_cast<std::size_t>(c)];
    return load;
}

inline std::vector<double> route_demands(const RoutingInstance& inst, const Route& r) {
    std::vector<double> d;
    d.reserve(r.customers.size());
    for (int c : r.customers) d.push_back(inst.demands[static_cast<std::size_t>(c)]);
    return d;
}

inline std::vector<double> route_leg_distances(const RoutingInstance& inst, const Route& r) {
    std::vector<double> legs;
    legs.reserve(r.customers.size() + 1);
    int prev = 0;
    for (int c : r.customers) {
        legs.push_back(inst.distance(prev, c));
        prev = c;
    }
    legs.push_back(inst.distance(prev, 0));
    return legs;
}

inline double route_transit(const RoutingInstance& inst, const Route& r) {
    return route_transit_time(inst.params, route_leg_distances(inst, r), route_demands(inst, r));
}

inline double route_energy(const RoutingInstance& inst, const Route& r) {
    return route_energy(inst.params, route_leg_distances(inst, r), route_demands(inst, r));
}

inline double batch_time(const RoutingInstance& inst, std::span<const Route> routes) {
    std::vector<double> transits;
    transits.reserve(routes.size());
    for (const Route& r : routes) transits.push_back(route_transit(inst, r));
    return batch_total_time(inst.params, transits);
}

inline BatchOfRoutes make_batch(const RoutingInstance& inst, std::vector<Route> routes) {
    BatchOfRoutes b;
    b.total_time = batch_time(inst, routes);
    b.routes = std::move(routes);
    return b;
}

// Clarke-Wright parallel savings construction. Merges only happen when they keep
// both the payload and the battery constraint satisfied.
inline BatchOfRoutes savings_init(const RoutingInstance& inst) {
    const int n = inst.n_customers();
    std::vector<Route> routes;
    routes.reserve(static_cast<std::size_t>(n));
    for (int c = 1; c <= n; ++c) {
        Route r{{c}};
        if (route_energy(inst, r) > inst.params.battery_capacity + kLoadEps)
            throw InfeasibleError("savings_init: customer " + std::to_string(c) +
                                  " cannot be served within battery capacity");
        routes.push_back(std::move(r));
    }

    struct Saving {
        int i, j;
        double value;
    };
    std::vector<Saving> savings;
    savings.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            savings.push_back({i, j, inst.distance(0, i) + inst.distance(0, j) - inst.distance(i, j)});
    std::sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) {
        if (a.value != b.value) return a.value > b.value;
        return std::pair{a.i, a.j} < std::pair{b.i, b.j};
    });

    std::vector<int> route_of(static_cast<std::size_t>(n) + 1, -1);
    for (std::size_t z = 0; z < routes.size(); ++z) route_of[static_cast<std::size_t>(routes[z].customers[0])] = static_cast<int>(z);

    auto try_merge = [&](int head_route, int tail_route) -> bool {
        Route merged;
        merged.customers = routes[static_cast<std::size_t>(head_route)].customers;
        merged.customers.insert(merged.customers.end(),
                                routes[static_cast<std::size_t>(tail_route)].customers.begin(),
                                routes[static_cast<std::size_t>(tail_route)].customers.end());
        if (route_load(inst, merged) > inst.params.payload_capacity + kLoadEps) return false;
        if (route_energy(inst, merged) > inst.params.battery_capacity + kLoadEps) return false;
        for (int c : routes[static_cast<std::size_t>(tail_route)].customers)
            route_of[static_cast<std::size_t>(c)] = head_route;
        routes[static_cast<std::size_t>(head_route)].customers = std::move(merged.customers);
        routes[static_cast<std::size_t>(tail_route)].customers.clear();
        return true;
    };

    for (const Saving& s : savings) {
        const int ri = route_of[static_cast<std::size_t>(s.i)];
        const int rj = route_of[static_cast<std::size_t>(s.j)];
        if (ri == rj) continue;
        const auto& ci = routes[static_cast<std::size_t>(ri)].customers;
        const auto& cj = routes[static_cast<std::size_t>(rj)].customers;
        if (ci.back() == s.i && cj.front() == s.j) {
            try_merge(ri, rj);
        } else if (cj.back() == s.j && ci.front() == s.i) {
            try_merge(rj, ri);
        }
    }

    std::vector<Route> kept;
    for (Route& r : routes)
        if (!r.customers.empty()) kept.push_back(std::move(r));
    return make_batch(inst, std::move(kept));
}

// Exact transit-time change of inserting customer o_star before position pos of
// the given route (which must not already contain o_star). Full recomputation:
// the added payload slows every upstream leg, not just the replaced edge.
inline double insertion_delta(const RoutingInstance& inst, const Route& route, int o_star, int pos) {
    if (pos < 0 || pos > static_cast<int>(route.customers.size()))
        throw InputError("insertion_delta: position out of range");
    if (route_load(inst, route) + inst.demands[static_cast<std::size_t>(o_star)] >
        inst.params.payload_capacity + kLoadEps)
        throw InfeasibleError("insertion_delta: slot violates payload capacity");
    Route inserted = route;
    inserted.customers.insert(inserted.customers.begin() + pos, o_star);
    return route_transit(inst, inserted) - route_transit(inst, route);
}

struct RelocationSlot {
    int route = 0;     // index into the batch's route list
    int position = 0;  // insertion position in that route (source route taken without o_star)
    double delta = 0.0;  // exact transit-time change of the target route [h]
    bool is_current = false;
};

struct RelocationQubo {
    int target = 0;  // customer being repositioned
    std::vector<RelocationSlot> slots;  // slot k <-> QUBO variable k
    double lambda = 0.0;
    double removal_credit = 0.0;  // transit saved by taking the customer out of its route [h]
    int source_route = 0;
    bool source_becomes_empty = false;
};

// One-hot selection QUBO: H(x) = sum_k delta_k x_k + lambda (sum_k x_k - 1)^2.
inline QuboModel one_hot_qubo(std::span<const double> deltas, double lambda) {
    QuboModel q(static_cast<int>(deltas.size()));
    q.add_constant(lambda);
    for (int k = 0; k < q.n_vars; ++k) q.add_linear(k, deltas[static_cast<std::size_t>(k)] - lambda);
    for (int a = 0; a < q.n_vars; ++a)
        for (int b = a + 1; b < q.n_vars; ++b) q.add_quadratic(a, b, 2.0 * lambda);
    return q;
}

inline std::pair<int, int> locate_customer(const BatchOfRoutes& batch, int customer) {
    for (std::size_t z = 0; z < batch.routes.size(); ++z) {
        const auto& cs = batch.routes[z].customers;
        const auto it = std::find(cs.begin(), cs.end(), customer);
        if (it != cs.end()) return {static_cast<int>(z), static_cast<int>(it - cs.begin())};
    }
    throw InputError("customer " + std::to_string(customer) + " not present in batch");
}

// Enumerates every payload-feasible insertion slot for o_star (its current
// position included, so "no move" stays representable) and builds the
// penalized one-hot QUBO over them.
inline std::pair<RelocationQubo, QuboModel> build_relocation_qubo(const RoutingInstance& inst,
                                                                  const BatchOfRoutes& batch,
                                                                  int o_star) {
    const auto [source, source_pos] = locate_customer(batch, o_star);
    Route reduced = batch.routes[static_cast<std::size_t>(source)];
    reduced.customers.erase(reduced.customers.begin() + source_pos);

    RelocationQubo rq;
    rq.target = o_star;
    rq.source_route = source;
    rq.source_becomes_empty = reduced.customers.empty();
    rq.removal_credit =
        route_transit(inst, batch.routes[static_cast<std::size_t>(source)]) - route_transit(inst, reduced);

    const double r_star = inst.demands[static_cast<std::size_t>(o_star)];
    for (std::size_t z = 0; z < batch.routes.size(); ++z) {
        const Route& target_route = static_cast<int>(z) == source ? reduced : batch.routes[z];
        if (route_load(inst, target_route) + r_star > inst.params.payload_capacity + kLoadEps) continue;
        for (int pos = 0; pos <= static_cast<int>(target_route.customers.size()); ++pos) {
            RelocationSlot slot;
            slot.route = static_cast<int>(z);
            slot.position = pos;
            slot.delta = insertion_delta(inst, target_route, o_star, pos);
            slot.is_current = static_cast<int>(z) == source && pos == source_pos;
            rq.slots.push_back(slot);
        }
    }
    if (rq.slots.empty())
        throw InfeasibleError("build_relocation_qubo: no feasible slot for customer " +
                              std::to_string(o_star));

    double max_abs = 0.0;
    std::vector<double> deltas;
    deltas.reserve(rq.slots.size());
    for (const RelocationSlot& s : rq.slots) {
        deltas.push_back(s.delta);
        max_abs = std::max(max_abs, std::abs(s.delta));
    }
    rq.lambda = 10.0 * std::max(max_abs, 1e-6);
    QuboModel qubo = one_hot_qubo(deltas, rq.lambda);
    return {std::move(rq), std::move(qubo)};
}

// Applies one relocation slot. Payload feasibility is guaranteed by slot
// construction; the battery constraint is verified here and a violating move
// is rejected by returning nullopt. Emptied routes are pruned.
inline std::optional<BatchOfRoutes> apply_relocation(const RoutingInstance& inst,
                                                     const BatchOfRoutes& batch, int o_star,
                                                     const RelocationSlot& slot) {
    const auto [source, source_pos] = locate_customer(batch, o_star);
    std::vector<Route> routes = batch.routes;
    routes[static_cast<std::size_t>(source)].customers.erase(
        routes[static_cast<std::size_t>(source)].customers.begin() + source_pos);
    auto& target = routes[static_cast<std::size_t>(slot.route)].customers;
    target.insert(target.begin() + slot.position, o_star);

    if (route_energy(inst, routes[static_cast<std::size_t>(slot.route)]) >
        inst.params.battery_capacity + kLoadEps)
        return std::nullopt;

    std::vector<Route> kept;
    kept.reserve(routes.size());
    for (Route& r : routes)
        if (!r.customers.empty()) kept.push_back(std::move(r));
    return make_batch(inst, std::move(kept));
}

struct MoveRecord {
    int customer = 0;
    int from_route = 0;
    int to_route = 0;
    int position = 0;
    double total_before = 0.0;
    double total_after = 0.0;
};

struct RoutingConfig {
    std::uint64_t seed = 0;
    int iterations = 50;  // local-search passes per run; 1000 reproduces the full-budget setting
    QaoaConfig qaoa;
    bool log_moves = false;
};

namespace detail {

inline int one_hot_index(const Bits& bits) {
    int idx = -1;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (!bits[k]) continue;
        if (idx >= 0) return -1;
        idx = static_cast<int>(k);
    }
    return idx;
}

}  // namespace detail

struct LocalSearchResult {
    BatchOfRoutes batch;
    bool improved = false;
};

// One sweep of the QAOA relocation neighborhood: customers are visited in a
// seeded random order; for each, the slot QUBO is solved, sampled one-hots are
// tried in energy order, and a move is kept only when the recomputed batch
// objective strictly drops (battery rejections fall through to the next sample).
inline LocalSearchResult local_search_pass(const RoutingInstance& inst, BatchOfRoutes batch,
                                           const RoutingConfig& config, std::mt19937_64& rng,
                                           std::vector<MoveRecord>* move_log = nullptr) {
    std::vector<int> order(static_cast<std::size_t>(inst.n_customers()));
    for (int c = 1; c <= inst.n_customers(); ++c) order[static_cast<std::size_t>(c - 1)] = c;
    std::shuffle(order.begin(), order.end(), rng);

    bool improved = false;
    for (int o_star : order) {
        auto [rq, qubo] = build_relocation_qubo(inst, batch, o_star);
        if (rq.slots.size() <= 1) continue;

        QaoaConfig qc = config.qaoa;
        qc.seed = rng();
        const QaoaResult res = qaoa_minimize(qubo, qc);

        // Moves can also win by pruning an emptied route, worth one incidental
        // block on top of the removal credit.
        const double gain_cap = rq.removal_credit +
                                (rq.source_becomes_empty ? inst.params.incidental_time : 0.0);

        auto consider = [&](const Bits& bits) -> bool {
            // returns true when the scan should stop
            const int idx = detail::one_hot_index(bits);
            if (idx < 0) return false;
            const RelocationSlot& slot = rq.slots[static_cast<std::size_t>(idx)];
            if (slot.delta >= gain_cap - kTimeEps) return true;  // later one-hots only get worse
            if (slot.is_current) return false;
            const auto moved = apply_relocation(inst, batch, o_star, slot);
            if (!moved) return false;  // battery-rejected; try the next sample
            if (moved->total_time < batch.total_time - kTimeEps) {
                if (move_log)
                    move_log->push_back(MoveRecord{o_star, rq.source_route, slot.route, slot.position,
                                                   batch.total_time, moved->total_time});
                batch = *moved;
                improved = true;
                return true;
            }
            return false;
        };

        bool saw_one_hot = false;
        bool done = false;
        for (const Sample& s : res.samples.samples) {
            if (detail::one_hot_index(s.bits) >= 0) saw_one_hot = true;
            if (consider(s.bits)) {
                done = true;
                break;
            }
        }
        if (!done && !saw_one_hot) {
            // The penalty makes the global optimum a one-hot, so the exact
            // minimizer always yields a decodable move proposal.
            const MinimizeResult exact = brute_force_minimize(qubo);
            consider(exact.bits);
        }
    }
    return {std::move(batch), improved};
}

// Ruin-and-recreate kick: remove `strength` random customers, greedily reinsert
// each at its cheapest feasible slot scanning routes in random order.
inline BatchOfRoutes perturb(const RoutingInstance& inst, const BatchOfRoutes& batch, int strength,
                             std::mt19937_64& rng) {
    if (strength <= 0) return batch;
    std::vector<int> customers(static_cast<std::size_t>(inst.n_customers()));
    for (int c = 1; c <= inst.n_customers(); ++c) customers[static_cast<std::size_t>(c - 1)] = c;
    std::shuffle(customers.begin(), customers.end(), rng);
    customers.resize(static_cast<std::size_t>(std::min<int>(strength, inst.n_customers())));

    std::vector<Route> routes = batch.routes;
    for (Route& r : routes)
        std::erase_if(r.customers, [&](int c) {
            return std::find(customers.begin(), customers.end(), c) != customers.end();
        });
    std::erase_if(routes, [](const Route& r) { return r.customers.empty(); });

    for (int c : customers) {
        std::vector<int> route_order(routes.size());
        for (std::size_t z = 0; z < routes.size(); ++z) route_order[z] = static_cast<int>(z);
        std::shuffle(route_order.begin(), route_order.end(), rng);

        const double demand = inst.demands[static_cast<std::size_t>(c)];
        int best_route = -1, best_pos = 0;
        double best_delta = 0.0;
        for (int z : route_order) {
            Route& r = routes[static_cast<std::size_t>(z)];
            if (route_load(inst, r) + demand > inst.params.payload_capacity + kLoadEps) continue;
            for (int pos = 0; pos <= static_cast<int>(r.customers.size()); ++pos) {
                const double delta = insertion_delta(inst, r, c, pos);
                if (best_route >= 0 && delta >= best_delta) continue;
                Route candidate = r;
                candidate.customers.insert(candidate.customers.begin() + pos, c);
                if (route_energy(inst, candidate) > inst.params.battery_capacity + kLoadEps) continue;
                best_route = z;
                best_pos = pos;
                best_delta = delta;
            }
        }
        if (best_route >= 0) {
            auto& cs = routes[static_cast<std::size_t>(best_route)].customers;
            cs.insert(cs.begin() + best_pos, c);
        } else {
            routes.push_back(Route{{c}});
        }
    }
    return make_batch(inst, std::move(routes));
}

struct RoutingResult {
    BatchOfRoutes batch;
    std::uint64_t seed = 0;
    int iterations = 0;
    std::vector<MoveRecord> moves;
};

// Multi-start driver: savings construction, repeated relocation passes, and a
// ruin-and-recreate restart from the incumbent after two stale passes.
inline RoutingResult multi_start_route(const RoutingInstance& inst, const RoutingConfig& config) {
    if (config.iterations < 1) throw InputError("multi_start_route: iterations must be >= 1");
    std::mt19937_64 rng(config.seed);

    RoutingResult result;
    result.seed = config.seed;
    result.iterations = config.iterations;

    BatchOfRoutes current = savings_init(inst);
    BatchOfRoutes best = current;
    int stale_passes = 0;
    const int strength = std::max(2, inst.n_customers() / 10);

    for (int iter = 0; iter < config.iterations; ++iter) {
        LocalSearchResult pass =
            local_search_pass(inst, std::move(current), config, rng,
                              config.log_moves ? &result.moves : nullptr);
        current = std::move(pass.batch);
        if (current.total_time < best.total_time - kTimeEps) best = current;
        stale_passes = pass.improved ? 0 : stale_passes + 1;
        if (stale_passes >= 2 && iter + 1 < config.iterations) {
            current = perturb(inst, best, strength, rng);
            stale_passes = 0;
        }
    }
    result.batch = std::move(best);
    return result;
}

struct ValidationEntry {
    std::string constraint;
    bool ok = true;
    std::vector<int> offending_routes;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool ok = true;
};

// Constraint audit of a batch; never throws.
inline ValidationReport validate_batch(const RoutingInstance& inst, const BatchOfRoutes& batch) {
    ValidationReport report;

    ValidationEntry visit{"visit-once", true, {}, ""};
    std::vector<int> seen(static_cast<std::size_t>(inst.n_customers()) + 1, 0);
    for (std::size_t z = 0; z < batch.routes.size(); ++z) {
        for (int c : batch.routes[z].customers) {
            if (c < 1 || c > inst.n_customers()) {
                visit.ok = false;
                visit.offending_routes.push_back(static_cast<int>(z));
                visit.detail += "invalid id " + std::to_string(c) + "; ";
                continue;
            }
            if (++seen[static_cast<std::size_t>(c)] > 1) {
                visit.ok = false;
                visit.offending_routes.push_back(static_cast<int>(z));
                visit.detail += "customer " + std::to_string(c) + " repeated; ";
            }
        }
    }
    for (int c = 1; c <= inst.n_customers(); ++c)
        if (seen[static_cast<std::size_t>(c)] == 0) {
            visit.ok = false;
            visit.detail += "customer " + std::to_string(c) + " unserved; ";
        }
    report.entries.push_back(std::move(visit));

    ValidationEntry payload{"payload-capacity", true, {}, ""};
    for (std::size_t z = 0; z < batch.routes.size(); ++z)
        if (route_load(inst, batch.routes[z]) > inst.params.payload_capacity + kLoadEps) {
            payload.ok = false;
            payload.offending_routes.push_back(static_cast<int>(z));
        }
    report.entries.push_back(std::move(payload));

    ValidationEntry battery{"battery-capacity", true, {}, ""};
    for (std::size_t z = 0; z < batch.routes.size(); ++z)
        if (route_energy(inst, batch.routes[z]) > inst.params.battery_capacity + kLoadEps) {
            battery.ok = false;
            battery.offending_routes.push_back(static_cast<int>(z));
        }
    report.entries.push_back(std::move(battery));

    ValidationEntry anchored{"depot-anchored", true, {}, ""};
    for (std::size_t z = 0; z < batch.routes.size(); ++z)
        if (batch.routes[z].customers.empty()) {
            anchored.ok = false;
            anchored.offending_routes.push_back(static_cast<int>(z));
            anchored.detail += "empty route; ";
        }
    report.entries.push_back(std::move(anchored));

    ValidationEntry cache{"total-time-cache", true, {}, ""};
    const double recomputed = batch_time(inst, batch.routes);
    if (std::abs(recomputed - batch.total_time) > 1e-6) {
        cache.ok = false;
        cache.detail = "cached " + std::to_string(batch.total_time) + " vs recomputed " +
                       std::to_string(recomputed);
    }
    report.entries.push_back(std::move(cache));

    for (const ValidationEntry& e : report.entries) report.ok = report.ok && e.ok;
    return report;
}

}  // namespace uavopt
