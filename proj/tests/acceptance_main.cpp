// Acceptance suite: one self-contained check per shipping criterion, each
// printed as a single [PASS]/[FAIL] line with its measured numbers and wall
// time. The process exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "uavopt/uavopt.hpp"

using namespace uavopt;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title)
        : number_(number), title_(std::move(title)), start_(std::chrono::steady_clock::now()) {}

    void finish(bool ok, const std::string& detail, double runtime_limit_s = 0.0) {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        bool pass = ok;
        std::string note = detail;
        if (runtime_limit_s > 0.0 && elapsed > runtime_limit_s) {
            pass = false;
            note += " [runtime " + format_fixed(elapsed, 1) + "s exceeds " +
                    format_fixed(runtime_limit_s, 0) + "s]";
        }
        if (!pass) ++g_failures;
        std::printf("[%s] criterion %2d: %s (%s; t=%.1fs)\n", pass ? "PASS" : "FAIL", number_,
                    title_.c_str(), note.c_str(), elapsed);
        std::fflush(stdout);
    }

private:
    int number_;
    std::string title_;
    std::chrono::steady_clock::time_point start_;
};

QuboModel random_qubo(std::mt19937_64& rng, int n, double scale = 5.0) {
    std::uniform_real_distribution<double> coeff(-scale, scale);
    QuboModel q(n);
    q.add_constant(coeff(rng));
    for (int j = 0; j < n; ++j) q.add_linear(j, coeff(rng));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) q.add_quadratic(j, k, coeff(rng));
    return q;
}

std::string data_file(const std::string& name) {
    return std::string(UAVOPT_DATA_DIR) + "/" + name;
}

RawInstance load_fixture(const std::string& name) {
    std::ifstream in(data_file(name));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_vrp(text.str());
}

// --- criterion 1: QUBO <-> Ising fidelity over 1000 random models ---------

void criterion_ising_fidelity() {
    Criterion c(1, "Ising fidelity on 1000 random QUBOs (n <= 10)");
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const QuboModel q = random_qubo(rng, n);
        const IsingModel ising = to_ising(q);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            Bits x(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = (mask >> j) & 1U;
            const double gap = std::abs(qubo_energy(q, x) - ising_energy(ising, spins_from_bits(x)));
            worst = std::max(worst, gap);
        }
    }
    c.finish(worst <= 1e-9, "max |E_qubo - E_ising| = " + std::to_string(worst), 10.0);
}

// --- criterion 2: QAOA sanity on 50 random 8-var QUBOs --------------------

void criterion_qaoa_sanity() {
    Criterion c(2, "QAOA best sample between optimum and random median, 50 models");
    std::mt19937_64 rng(202);
    int beats_median = 0;
    bool never_below_optimum = true;
    for (int rep = 0; rep < 50; ++rep) {
        const QuboModel q = random_qubo(rng, 8);
        const CostModel cost = as_cost_model(q);
        QaoaConfig cfg;
        cfg.depth = 1;
        cfg.shots = 1024;
        cfg.seed = rng();
        const QaoaResult res = qaoa_minimize(cost, cfg);
        const MinimizeResult exact = brute_force_minimize(cost);
        if (res.best_energy < exact.energy - 1e-9) never_below_optimum = false;

        std::vector<double> random_energies;
        random_energies.reserve(1024);
        for (int s = 0; s < 1024; ++s) {
            Bits x(8);
            for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1U);
            random_energies.push_back(cost.evaluate(x));
        }
        std::nth_element(random_energies.begin(), random_energies.begin() + 512,
                         random_energies.end());
        if (res.best_energy <= random_energies[512] + 1e-12) ++beats_median;
    }
    const bool ok = beats_median >= 48 && never_below_optimum;  // 95% of 50 = 47.5
    c.finish(ok,
             "beats median on " + std::to_string(beats_median) + "/50, optimum bound " +
                 (never_below_optimum ? "held" : "VIOLATED"),
             120.0);
}

// --- criterion 3: flight physics point values -----------------------------

void criterion_physics_points() {
    Criterion c(3, "velocity / flight time / edge energy point checks");
    const DroneParams p;
    const double v = velocity(p, 0.0);
    const double t = flight_time(p, 10.0, 2.5);
    const double e = edge_energy(p, 10.0, 2.5);
    const bool ok = std::abs(v - 37.0) <= 1e-6 && std::abs(t - 0.360360) <= 1e-6 &&
                    std::abs(e - 0.216216) <= 1e-6;
    c.finish(ok, "v=" + format_fixed(v, 6) + " t=" + format_fixed(t, 6) + " e=" + format_fixed(e, 6));
}

// --- criterion 4: small-instance routing optimality ------------------------

void criterion_small_routing() {
    Criterion c(4, "5-customer multi-start vs exhaustive optimum, 20 seeds");
    std::mt19937_64 gen(404);
    int exact_hits = 0;
    double worst_ratio = 1.0;
    for (int rep = 0; rep < 20; ++rep) {
        const RoutingInstance inst = uavopt::testing::random_instance(gen, 5);
        RoutingConfig config;
        config.seed = static_cast<std::uint64_t>(rep);
        config.iterations = 100;
        const RoutingResult result = multi_start_route(inst, config);
        const double oracle = uavopt::testing::exhaustive_best_time(inst);
        const double ratio = result.batch.total_time / oracle;
        worst_ratio = std::max(worst_ratio, ratio);
        if (result.batch.total_time <= oracle + 1e-9) ++exact_hits;
    }
    const bool ok = exact_hits >= 16 && worst_ratio <= 1.05;
    c.finish(ok,
             "optimum found on " + std::to_string(exact_hits) + "/20, worst ratio " +
                 format_fixed(worst_ratio, 4),
             300.0);
}

// --- criteria 5 and 8: the P-N16-K8 experiment -----------------------------

void criteria_benchmark(const RawInstance& fixture) {
    Criterion c5(5, "P-N16-K8 average routing time vs 436 min target (k=50, 3 trials)");
    ExperimentConfig cfg;
    cfg.trials = 3;
    cfg.master_seed = 20250809;
    cfg.iterations = 50;
    cfg.fleet_sizes = {2, 3};
    cfg.mode = ScheduleMode::Hybrid;

    std::vector<ResultRow> rows;
    std::string failure;
    try {
        rows = run_experiment(cfg, fixture);
    } catch (const std::exception& e) {
        failure = e.what();
    }

    if (!failure.empty()) {
        c5.finish(false, "experiment aborted: " + failure, 1800.0);
        Criterion c8(8, "P-N16-K8 fleet trend: makespan(m=3) < makespan(m=2)");
        c8.finish(false, "no experiment data");
        return;
    }

    const ResultRow& avg = rows.back();
    const bool time_ok = avg.route_min <= 436.0;
    c5.finish(time_ok,
              "avg total " + format_fixed(avg.route_min) +
                  " min vs target 436.00 min; all 3 trial batches validated",
              1800.0);

    Criterion c8(8, "P-N16-K8 fleet trend: makespan(m=3) < makespan(m=2)");
    double mk2 = 0.0, mk3 = 0.0;
    for (const auto& [m, mk] : avg.makespans) {
        if (m == 2) mk2 = mk;
        if (m == 3) mk3 = mk;
    }
    c8.finish(mk3 < mk2,
              "avg makespan m=2: " + format_fixed(mk2) + " h, m=3: " + format_fixed(mk3) + " h");
}

// --- criterion 6: scheduling oracle bound ----------------------------------

void criterion_schedule_oracle() {
    Criterion c(6, "hybrid schedule vs brute force on 100 random task sets");
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> dur(0.5, 4.0);
    int equal = 0;
    bool bound_held = true;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const int m = 2 + static_cast<int>(rng() % 2);
        std::vector<RouteTask> tasks;
        for (int i = 0; i < n; ++i) tasks.push_back(RouteTask{i, dur(rng)});

        SchedulingConfig sc;
        sc.qaoa.seed = rng();
        const ScheduleReport report = schedule(tasks, m, ScheduleMode::Hybrid, sc);
        const BruteScheduleResult oracle = brute_force_schedule(tasks, m, sc.recharge_time);
        if (report.makespan < oracle.makespan - 1e-9) bound_held = false;
        if (report.makespan <= oracle.makespan + 1e-9) ++equal;
    }
    const bool ok = bound_held && equal >= 50;
    c.finish(ok,
             std::string("lower bound ") + (bound_held ? "held" : "VIOLATED") + ", optimal on " +
                 std::to_string(equal) + "/100",
             120.0);
}

// --- criterion 7: recharge accounting hand case -----------------------------

void criterion_recharge_hand_case() {
    Criterion c(7, "durations (2,3,4) h on 2 drones: optimum 6.25 h, hybrid within 1 h");
    const std::vector<RouteTask> tasks{{0, 2.0}, {1, 3.0}, {2, 4.0}};
    const BruteScheduleResult oracle = brute_force_schedule(tasks, 2, 1.25);
    SchedulingConfig sc;
    sc.qaoa.seed = 7;
    const ScheduleReport report = schedule(tasks, 2, ScheduleMode::Hybrid, sc);
    const bool ok = std::abs(oracle.makespan - 6.25) < 1e-12 && report.makespan >= 6.25 - 1e-9 &&
                    report.makespan <= 7.25 + 1e-9;
    c.finish(ok, "brute " + format_fixed(oracle.makespan) + " h, hybrid " +
                     format_fixed(report.makespan) + " h");
}

// --- criterion 9: demand adaptation point values ----------------------------

void criterion_demand_adaptation() {
    Criterion c(9, "demand adaptation d in {1,5,19} -> r in {1.0,1.5,1.5}");
    const double r1 = adapt_demand(1.0, 2.5);
    const double r5 = adapt_demand(5.0, 2.5);
    const double r19 = adapt_demand(19.0, 2.5);
    const bool ok = r1 == 1.0 && r5 == 1.5 && r19 == 1.5;
    c.finish(ok, "r(1)=" + format_fixed(r1, 1) + " r(5)=" + format_fixed(r5, 1) +
                     " r(19)=" + format_fixed(r19, 1));
}

// --- criterion 10: CLI solve determinism ------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void criterion_solve_determinism() {
    Criterion c(10, "solve twice with a fixed seed: byte-identical JSON");
    const std::string out1 = std::string(UAVOPT_TMP_DIR) + "/acc_solve_a.json";
    const std::string out2 = std::string(UAVOPT_TMP_DIR) + "/acc_solve_b.json";
    const std::string base = std::string(UAVOPT_CLI_BIN) + " solve --instance " +
                             data_file("P-n16-k8.vrp") +
                             " --drones 2 --seed 404 --iterations 3 --out ";
    const std::string log = std::string(UAVOPT_TMP_DIR) + "/acc_solve.log";
    const int rc1 = std::system((base + out1 + " > " + log + " 2>&1").c_str());
    const int rc2 = std::system((base + out2 + " > " + log + " 2>&1").c_str());
    const std::string doc1 = slurp(out1);
    const bool ok = rc1 == 0 && rc2 == 0 && !doc1.empty() && doc1 == slurp(out2);
    c.finish(ok, ok ? std::to_string(doc1.size()) + " identical bytes"
                    : "outputs differ or solve failed");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_ising_fidelity();
    criterion_qaoa_sanity();
    criterion_physics_points();
    criterion_small_routing();
    criteria_benchmark(load_fixture("P-n16-k8.vrp"));
    criterion_schedule_oracle();
    criterion_recharge_hand_case();
    criterion_demand_adaptation();
    criterion_solve_determinism();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
