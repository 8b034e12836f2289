#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uavopt/errors.hpp"

namespace uavopt {

using Bits = std::vector<std::uint8_t>;
using Spins = std::vector<std::int8_t>;

inline constexpr int kBruteForceCap = 26;

// Quadratic pseudo-Boolean objective
//   E(x) = sum_{j<k} Q[j,k] x_j x_k + sum_j b_j x_j + C,   x_j in {0,1}.
// Quadratic coefficients are stored upper-triangular: adding (k,j) or (j,k)
// accumulates into the same (j,k) entry, so symmetric double counting cannot occur.
struct QuboModel {
    int n_vars = 0;
    std::map<std::pair<int, int>, double> quadratic;  // keys (j,k) with j < k
    std::vector<double> linear;                       // size n_vars
    double constant = 0.0;

    explicit QuboModel(int n = 0) : n_vars(n), linear(static_cast<std::size_t>(n), 0.0) {
        if (n < 0) throw InputError("QuboModel: negative variable count");
    }

    void add_linear(int j, double v) {
        check_index(j);
        check_finite(v);
        linear[static_cast<std::size_t>(j)] += v;
    }

    void add_quadratic(int j, int k, double v) {
        check_index(j);
        check_index(k);
        check_finite(v);
        if (j == k) throw InputError("QuboModel: quadratic entry with j == k");
        if (j > k) std::swap(j, k);
        quadratic[{j, k}] += v;
    }

    void add_constant(double v) {
        check_finite(v);
        constant += v;
    }

private:
    void check_index(int j) const {
        if (j < 0 || j >= n_vars)
            throw InputError("QuboModel: variable index " + std::to_string(j) + " out of range");
    }
    static void check_finite(double v) {
        if (!std::isfinite(v)) throw InputError("QuboModel: non-finite coefficient");
    }
};

inline double qubo_energy(const QuboModel& model, std::span<const std::uint8_t> x) {
    if (static_cast<int>(x.size()) != model.n_vars)
        throw InputError("qubo_energy: bitstring length " + std::to_string(x.size()) +
                         " does not match n_vars " + std::to_string(model.n_vars));
    double e = model.constant;
    for (int j = 0; j < model.n_vars; ++j)
        if (x[static_cast<std::size_t>(j)]) e += model.linear[static_cast<std::size_t>(j)];
    for (const auto& [jk, v] : model.quadratic)
        if (x[static_cast<std::size_t>(jk.first)] && x[static_cast<std::size_t>(jk.second)]) e += v;
    return e;
}

// Spin (+1/-1) form of a QuboModel under x_j = (1 - z_j) / 2.
struct IsingModel {
    int n_vars = 0;
    std::map<std::pair<int, int>, double> couplings;  // keys (j,k) with j < k
    std::vector<double> fields;                       // size n_vars
    double offset = 0.0;
};

// Substituting x_j = (1 - z_j)/2 termwise:
//   q x_j x_k -> q/4 (1 - z_j - z_k + z_j z_k)
//   b x_j     -> b/2 (1 - z_j)
inline IsingModel to_ising(const QuboModel& model) {
    IsingModel ising;
    ising.n_vars = model.n_vars;
    ising.fields.assign(static_cast<std::size_t>(model.n_vars), 0.0);
    ising.offset = model.constant;
    for (int j = 0; j < model.n_vars; ++j) {
        const double b = model.linear[static_cast<std::size_t>(j)];
        ising.offset += b / 2.0;
        ising.fields[static_cast<std::size_t>(j)] -= b / 2.0;
    }
    for (const auto& [jk, q] : model.quadratic) {
        ising.couplings[jk] = q / 4.0;
        ising.offset += q / 4.0;
        ising.fields[static_cast<std::size_t>(jk.first)] -= q / 4.0;
        ising.fields[static_cast<std::size_t>(jk.second)] -= q / 4.0;
    }
    return ising;
}

inline double ising_energy(const IsingModel& model, std::span<const std::int8_t> z) {
    if (static_cast<int>(z.size()) != model.n_vars)
        throw InputError("ising_energy: spin vector length does not match n_vars");
    for (std::int8_t s : z)
        if (s != 1 && s != -1) throw InputError("ising_energy: spin values must be +1 or -1");
    double e = model.offset;
    for (int j = 0; j < model.n_vars; ++j)
        e += model.fields[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)];
    for (const auto& [jk, v] : model.couplings)
        e += v * z[static_cast<std::size_t>(jk.first)] * z[static_cast<std::size_t>(jk.second)];
    return e;
}

inline Spins spins_from_bits(std::span<const std::uint8_t> x) {
    Spins z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = static_cast<std::int8_t>(1 - 2 * x[i]);
    return z;
}

// Arbitrary pseudo-Boolean objective; a QuboModel is the quadratic special case.
// The evaluator must be deterministic and total over {0,1}^n_vars.
struct CostModel {
    int n_vars = 0;
    std::function<double(std::span<const std::uint8_t>)> evaluate;
};

inline CostModel as_cost_model(QuboModel model) {
    const int n = model.n_vars;
    return CostModel{n, [m = std::move(model)](std::span<const std::uint8_t> x) {
                         return qubo_energy(m, x);
                     }};
}

struct MinimizeResult {
    Bits bits;
    double energy = 0.0;
};

// Exhaustive minimization; ties broken by the lexicographically smallest bitstring
// (x_0 compared first). Enumeration order is chosen so the first strict minimum
// seen is already the lexicographic winner.
inline MinimizeResult brute_force_minimize(const CostModel& cost, int cap = kBruteForceCap) {
    const int n = cost.n_vars;
    if (n > cap)
        throw CapacityError("brute_force_minimize: " + std::to_string(n) +
                            " variables exceed cap " + std::to_string(cap));
    Bits x(static_cast<std::size_t>(n), 0);
    MinimizeResult best{x, cost.evaluate(x)};
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t m = 1; m < total; ++m) {
        for (int j = 0; j < n; ++j)
            x[static_cast<std::size_t>(j)] =
                static_cast<std::uint8_t>((m >> (n - 1 - j)) & 1U);
        const double e = cost.evaluate(x);
        if (e < best.energy) best = MinimizeResult{x, e};
    }
    return best;
}

// Explicit-QUBO specialization: walks the states in Gray-code order so each
// step flips a single bit and the energy updates from that variable's
// adjacency alone. Candidates within the float-noise window of the incumbent
// are re-evaluated exactly, keeping the result (value and lexicographic
// tie-break) identical to the generic enumerator.
inline MinimizeResult brute_force_minimize(const QuboModel& model, int cap = kBruteForceCap) {
    const int n = model.n_vars;
    if (n > cap)
        throw CapacityError("brute_force_minimize: " + std::to_string(n) +
                            " variables exceed cap " + std::to_string(cap));
    Bits x(static_cast<std::size_t>(n), 0);
    if (n == 0) return {x, model.constant};

    std::vector<std::vector<std::pair<int, double>>> adjacency(static_cast<std::size_t>(n));
    for (const auto& [jk, v] : model.quadratic) {
        adjacency[static_cast<std::size_t>(jk.first)].emplace_back(jk.second, v);
        adjacency[static_cast<std::size_t>(jk.second)].emplace_back(jk.first, v);
    }

    double energy = model.constant;
    MinimizeResult best{x, energy};
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < total; ++step) {
        const int j = std::countr_zero(step);
        double delta = model.linear[static_cast<std::size_t>(j)];
        for (const auto& [k, v] : adjacency[static_cast<std::size_t>(j)])
            if (x[static_cast<std::size_t>(k)]) delta += v;
        x[static_cast<std::size_t>(j)] ^= 1U;
        energy += x[static_cast<std::size_t>(j)] ? delta : -delta;
        if ((step & 0xffffU) == 0) energy = qubo_energy(model, x);  // kill drift periodically

        const double tol = 1e-7 * std::max(1.0, std::abs(best.energy));
        if (energy < best.energy + tol) {
            const double exact = qubo_energy(model, x);
            energy = exact;
            if (exact < best.energy || (exact == best.energy && x < best.bits))
                best = MinimizeResult{x, exact};
        }
    }
    return best;
}

}  // namespace uavopt
