#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uavopt/errors.hpp"
#include "uavopt/qubo.hpp"

namespace uavopt {

using StateVector = std::vector<std::complex<double>>;

struct QaoaParams {
    std::vector<double> gammas;  // cost-phase angles, radians
    std::vector<double> betas;   // mixer angles, radians

    int depth() const { return static_cast<int>(gammas.size()); }

    void validate() const {
        if (gammas.size() != betas.size())
            throw InputError("QaoaParams: gammas and betas must have equal length");
    }
};

struct QaoaConfig {
    int depth = 1;
    int optimizer_max_evals = 150;
    int shots = 1024;
    std::uint64_t seed = 0;
    int qubit_cap = 20;  // statevector limit; larger problems fall back classically

    void validate() const {
        if (qubit_cap < 0 || qubit_cap > kBruteForceCap)
            throw InputError("QaoaConfig: qubit_cap must be in [0, 26]");
        if (depth < 0) throw InputError("QaoaConfig: negative depth");
        if (shots < 1) throw InputError("QaoaConfig: shots must be >= 1");
        if (optimizer_max_evals < 1) throw InputError("QaoaConfig: optimizer_max_evals must be >= 1");
    }
};

struct Sample {
    Bits bits;
    int count = 0;
    double energy = 0.0;
};

// Measurement outcomes sorted by energy ascending (ties by bitstring); counts sum to shots.
struct SampleSet {
    std::vector<Sample> samples;
    int shots = 0;
};

struct QaoaResult {
    Bits best_bits;
    double best_energy = 0.0;
    SampleSet samples;
    bool classical_fallback = false;
};

// Basis-state convention: qubit j is bit j of the amplitude index, x_j = (index >> j) & 1.
inline Bits index_to_bits(std::uint64_t index, int n) {
    Bits x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((index >> j) & 1U);
    return x;
}

inline StateVector uniform_state(int n, int qubit_cap = 20) {
    if (n < 0) throw InputError("uniform_state: negative qubit count");
    if (n > qubit_cap)
        throw CapacityError("uniform_state: " + std::to_string(n) + " qubits exceed cap " +
                            std::to_string(qubit_cap));
    const std::size_t dim = std::size_t{1} << n;
    return StateVector(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

// Energies of all 2^n basis states, indexed by the convention above.
inline std::vector<double> energy_table(const CostModel& cost) {
    const int n = cost.n_vars;
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<double> table(dim);
    Bits x(static_cast<std::size_t>(n), 0);
    for (std::uint64_t i = 0; i < dim; ++i) {
        for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((i >> j) & 1U);
        table[i] = cost.evaluate(x);
    }
    return table;
}

// Diagonal evolution exp(-i*gamma*E(x)) per basis state; moduli are untouched.
inline StateVector apply_cost_phase(StateVector state, std::span<const double> energies, double gamma) {
    if (state.size() != energies.size())
        throw InputError("apply_cost_phase: state dimension does not match energy table");
    for (std::size_t i = 0; i < state.size(); ++i)
        state[i] *= std::polar(1.0, -gamma * energies[i]);
    return state;
}

inline StateVector apply_cost_phase(StateVector state, const CostModel& cost, double gamma) {
    if (state.size() != (std::size_t{1} << cost.n_vars))
        throw InputError("apply_cost_phase: state dimension does not match cost model");
    return apply_cost_phase(std::move(state), energy_table(cost), gamma);
}

// Transverse mixer exp(-i*beta*sum_j X_j): the single-qubit rotation
// [[cos b, -i sin b], [-i sin b, cos b]] applied to every qubit.
inline StateVector apply_mixer(StateVector state, double beta) {
    const double c = std::cos(beta);
    const std::complex<double> ms(0.0, -std::sin(beta));
    const std::size_t dim = state.size();
    for (std::size_t stride = 1; stride < dim; stride <<= 1) {
        for (std::size_t base = 0; base < dim; base += stride << 1) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const std::complex<double> a0 = state[i];
                const std::complex<double> a1 = state[i + stride];
                state[i] = c * a0 + ms * a1;
                state[i + stride] = ms * a0 + c * a1;
            }
        }
    }
    return state;
}

inline StateVector simulate(const CostModel& cost, const QaoaParams& params, int qubit_cap = 20) {
    params.validate();
    StateVector state = uniform_state(cost.n_vars, qubit_cap);
    if (params.depth() == 0) return state;
    const std::vector<double> table = energy_table(cost);
    for (int layer = 0; layer < params.depth(); ++layer) {
        state = apply_cost_phase(std::move(state), table, params.gammas[static_cast<std::size_t>(layer)]);
        state = apply_mixer(std::move(state), params.betas[static_cast<std::size_t>(layer)]);
    }
    return state;
}

inline double expected_energy(const StateVector& state, std::span<const double> energies) {
    if (state.size() != energies.size())
        throw InputError("expected_energy: state dimension does not match energy table");
    double e = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) e += std::norm(state[i]) * energies[i];
    return e;
}

inline double expected_energy(const StateVector& state, const CostModel& cost) {
    if (state.size() != (std::size_t{1} << cost.n_vars))
        throw InputError("expected_energy: state dimension does not match cost model");
    return expected_energy(state, energy_table(cost));
}

namespace detail {

// Derivative-free Nelder-Mead simplex with standard coefficients. The callable
// is charged one unit of budget per evaluation; the best point ever evaluated
// is tracked by the caller through the callable itself.
template <typename F>
void nelder_mead(F&& f, std::vector<double> x0, int budget) {
    const std::size_t d = x0.size();
    if (d == 0 || budget <= 0) return;
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
    const double step = 0.5;

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::pair<double, std::vector<double>>> simplex;
    simplex.reserve(d + 1);
    simplex.emplace_back(eval(x0), x0);
    for (std::size_t i = 0; i < d && evals < budget; ++i) {
        std::vector<double> v = x0;
        v[i] += step;
        simplex.emplace_back(eval(v), std::move(v));
    }

    while (evals < budget && simplex.size() == d + 1) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i].second[j] / static_cast<double>(d);

        const auto& worst = simplex.back();
        std::vector<double> reflected(d);
        for (std::size_t j = 0; j < d; ++j)
            reflected[j] = centroid[j] + kReflect * (centroid[j] - worst.second[j]);
        const double fr = eval(reflected);

        if (fr < simplex.front().first) {
            if (evals >= budget) {
                simplex.back() = {fr, std::move(reflected)};
                continue;
            }
            std::vector<double> expanded(d);
            for (std::size_t j = 0; j < d; ++j)
                expanded[j] = centroid[j] + kExpand * (reflected[j] - centroid[j]);
            const double fe = eval(expanded);
            simplex.back() = fe < fr ? std::make_pair(fe, std::move(expanded))
                                     : std::make_pair(fr, std::move(reflected));
        } else if (fr < simplex[d - 1].first) {
            simplex.back() = {fr, std::move(reflected)};
        } else {
            if (evals >= budget) break;
            std::vector<double> contracted(d);
            for (std::size_t j = 0; j < d; ++j)
                contracted[j] = centroid[j] + kContract * (worst.second[j] - centroid[j]);
            const double fc = eval(contracted);
            if (fc < worst.first) {
                simplex.back() = {fc, std::move(contracted)};
            } else {
                for (std::size_t i = 1; i <= d && evals < budget; ++i) {
                    for (std::size_t j = 0; j < d; ++j)
                        simplex[i].second[j] =
                            simplex[0].second[j] + kShrink * (simplex[i].second[j] - simplex[0].second[j]);
                    simplex[i].first = eval(simplex[i].second);
                }
            }
        }
    }
}

// Annealing-style ramp: cost angles grow with depth, mixer angles shrink.
inline QaoaParams ramp_params(int depth, double g, double b) {
    QaoaParams p;
    p.gammas.resize(static_cast<std::size_t>(depth));
    p.betas.resize(static_cast<std::size_t>(depth));
    for (int j = 0; j < depth; ++j) {
        const double frac = (j + 0.5) / depth;
        p.gammas[static_cast<std::size_t>(j)] = g * frac;
        p.betas[static_cast<std::size_t>(j)] = b * (1.0 - frac);
    }
    return p;
}

}  // namespace detail

// Classical optimization of the 2p angles: Nelder-Mead restarted from three
// fixed initial points, sharing the evaluation budget. Deterministic; the best
// parameters over every evaluation (including the initial guesses) are returned.
inline QaoaParams optimize_params(const CostModel& cost, const QaoaConfig& config) {
    config.validate();
    if (cost.n_vars > config.qubit_cap)
        throw CapacityError("optimize_params: " + std::to_string(cost.n_vars) +
                            " variables exceed qubit cap " + std::to_string(config.qubit_cap));
    const int p = std::max(config.depth, 1);
    const std::vector<double> table = energy_table(cost);

    QaoaParams best;
    double best_energy = std::numeric_limits<double>::infinity();
    auto objective = [&](const std::vector<double>& theta) {
        QaoaParams params;
        params.gammas.assign(theta.begin(), theta.begin() + p);
        params.betas.assign(theta.begin() + p, theta.end());
        StateVector state = uniform_state(cost.n_vars, config.qubit_cap);
        for (int layer = 0; layer < p; ++layer) {
            state = apply_cost_phase(std::move(state), table, params.gammas[static_cast<std::size_t>(layer)]);
            state = apply_mixer(std::move(state), params.betas[static_cast<std::size_t>(layer)]);
        }
        const double e = expected_energy(state, table);
        if (e < best_energy) {
            best_energy = e;
            best = params;
        }
        return e;
    };

    constexpr std::pair<double, double> kStarts[] = {{0.4, 0.35}, {1.2, 2.2}, {2.4, 1.0}};
    const int per_start = std::max(config.optimizer_max_evals / 3, 2 * p + 2);
    for (const auto& [g, b] : kStarts) {
        const QaoaParams init = detail::ramp_params(p, g, b);
        std::vector<double> theta(init.gammas);
        theta.insert(theta.end(), init.betas.begin(), init.betas.end());
        detail::nelder_mead(objective, std::move(theta), per_start);
    }
    return best;
}

// Multinomial measurement of |amplitude|^2, seeded and reproducible.
inline SampleSet sample(const StateVector& state, const CostModel& cost, int shots, std::uint64_t seed) {
    if (shots < 1) throw InputError("sample: shots must be >= 1");
    if (state.size() != (std::size_t{1} << cost.n_vars))
        throw InputError("sample: state dimension does not match cost model");
    std::vector<double> cumulative(state.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        acc += std::norm(state[i]);
        cumulative[i] = acc;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::map<std::uint64_t, int> counts;
    for (int s = 0; s < shots; ++s) {
        const double u = unit(rng) * acc;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::uint64_t idx = static_cast<std::uint64_t>(
            std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                     static_cast<std::ptrdiff_t>(state.size()) - 1));
        ++counts[idx];
    }

    SampleSet out;
    out.shots = shots;
    out.samples.reserve(counts.size());
    for (const auto& [idx, count] : counts) {
        Bits bits = index_to_bits(idx, cost.n_vars);
        const double e = cost.evaluate(bits);
        out.samples.push_back(Sample{std::move(bits), count, e});
    }
    std::sort(out.samples.begin(), out.samples.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });
    return out;
}

namespace detail {

// Steepest-descent single-bit flips from seeded random starts; used only when
// the problem exceeds both the statevector and enumeration caps.
inline MinimizeResult greedy_bit_descent(const CostModel& cost, std::uint64_t seed, int restarts = 4) {
    std::mt19937_64 rng(seed);
    const int n = cost.n_vars;
    MinimizeResult best;
    best.energy = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Bits x(static_cast<std::size_t>(n));
        for (auto& bit : x) bit = static_cast<std::uint8_t>(rng() & 1U);
        double e = cost.evaluate(x);
        bool moved = true;
        while (moved) {
            moved = false;
            int best_flip = -1;
            double best_e = e;
            for (int j = 0; j < n; ++j) {
                x[static_cast<std::size_t>(j)] ^= 1U;
                const double cand = cost.evaluate(x);
                x[static_cast<std::size_t>(j)] ^= 1U;
                if (cand < best_e) {
                    best_e = cand;
                    best_flip = j;
                }
            }
            if (best_flip >= 0) {
                x[static_cast<std::size_t>(best_flip)] ^= 1U;
                e = best_e;
                moved = true;
            }
        }
        if (e < best.energy || (e == best.energy && x < best.bits)) best = MinimizeResult{x, e};
    }
    return best;
}

}  // namespace detail

// Full pipeline: optimize angles, evolve, measure, return the lowest-energy
// sampled bitstring. Oversized problems are solved classically instead
// (exhaustively up to the enumeration cap, greedy descent beyond) and flagged.
inline QaoaResult qaoa_minimize(const CostModel& cost, const QaoaConfig& config) {
    config.validate();
    const int n = cost.n_vars;
    QaoaResult result;

    if (n == 0) {
        result.best_bits = {};
        result.best_energy = cost.evaluate(result.best_bits);
        result.samples.shots = config.shots;
        result.samples.samples = {Sample{{}, config.shots, result.best_energy}};
        return result;
    }

    if (n <= config.qubit_cap) {
        QaoaParams params;
        if (config.depth >= 1) {
            params = optimize_params(cost, config);
        } else {
            params = QaoaParams{};
        }
        const StateVector state = simulate(cost, params, config.qubit_cap);
        result.samples = sample(state, cost, config.shots, config.seed);
        result.best_bits = result.samples.samples.front().bits;
        result.best_energy = result.samples.samples.front().energy;
        return result;
    }

    result.classical_fallback = true;
    const MinimizeResult fallback = n <= kBruteForceCap
                                        ? brute_force_minimize(cost)
                                        : detail::greedy_bit_descent(cost, config.seed);
    result.best_bits = fallback.bits;
    result.best_energy = fallback.energy;
    result.samples.shots = config.shots;
    result.samples.samples = {Sample{fallback.bits, config.shots, fallback.energy}};
    return result;
}

// Explicit-QUBO entry point. Identical behavior; the exact-enumeration
// fallback window (qubit cap < n <= 26) runs the Gray-code specialization
// instead of re-evaluating the whole model per state.
inline QaoaResult qaoa_minimize(const QuboModel& model, const QaoaConfig& config) {
    config.validate();
    const int n = model.n_vars;
    if (n <= config.qubit_cap || n > kBruteForceCap)
        return qaoa_minimize(as_cost_model(model), config);
    QaoaResult result;
    result.classical_fallback = true;
    const MinimizeResult exact = brute_force_minimize(model);
    result.best_bits = exact.bits;
    result.best_energy = exact.energy;
    result.samples.shots = config.shots;
    result.samples.samples = {Sample{exact.bits, config.shots, exact.energy}};
    return result;
}

}  // namespace uavopt
