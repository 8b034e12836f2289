#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uavopt/errors.hpp"
#include "uavopt/routing.hpp"
#include "uavopt/scheduling.hpp"
#include "uavopt/serialize.hpp"
#include "uavopt/vrp_io.hpp"

namespace uavopt {

struct ExperimentConfig {
    std::string instance_path;
    int trials = 3;
    std::uint64_t master_seed = 0;
    int iterations = 50;  // multi-start passes per trial
    QaoaConfig qaoa;
    std::vector<int> fleet_sizes = {2, 3};
    ScheduleMode mode = ScheduleMode::Hybrid;
    int pure_variable_budget = 24;
    DroneParams params;

    void validate() const {
        if (trials < 1) throw InputError("ExperimentConfig: trials must be >= 1");
        if (fleet_sizes.empty()) throw InputError("ExperimentConfig: no fleet sizes");
        for (int m : fleet_sizes)
            if (m < 1) throw InputError("ExperimentConfig: fleet sizes must be >= 1");
    }
};

struct ResultRow {
    std::string instance;
    int trial = 0;  // -1 marks the averaged summary row
    std::uint64_t seed = 0;
    double route_min = 0.0;
    double route_kwh = 0.0;
    std::vector<std::pair<int, double>> makespans;  // fleet size -> hours
    std::string mode;
    double wall_s = 0.0;
};

inline ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("instance")) cfg.instance_path = j.at("instance").get<std::string>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("iterations")) cfg.iterations = j.at("iterations").get<int>();
    if (j.contains("fleet_sizes")) cfg.fleet_sizes = j.at("fleet_sizes").get<std::vector<int>>();
    if (j.contains("mode")) {
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "pure") cfg.mode = ScheduleMode::Pure;
        else if (mode == "hybrid") cfg.mode = ScheduleMode::Hybrid;
        else throw InputError("ExperimentConfig: mode must be 'pure' or 'hybrid'");
    }
    if (j.contains("pure_variable_budget"))
        cfg.pure_variable_budget = j.at("pure_variable_budget").get<int>();
    if (j.contains("qaoa")) {
        const json& q = j.at("qaoa");
        if (q.contains("depth")) cfg.qaoa.depth = q.at("depth").get<int>();
        if (q.contains("shots")) cfg.qaoa.shots = q.at("shots").get<int>();
        if (q.contains("max_evals")) cfg.qaoa.optimizer_max_evals = q.at("max_evals").get<int>();
        if (q.contains("qubit_cap")) cfg.qaoa.qubit_cap = q.at("qubit_cap").get<int>();
    }
    if (j.contains("drone")) cfg.params = drone_params_from_json(j.at("drone"));
    cfg.validate();
    return cfg;
}

// Trial seeds are a pure function of the master seed; scheduling runs derive a
// further offset per fleet size so repeated fleets stay independent.
inline std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
    return master_seed + static_cast<std::uint64_t>(trial);
}

inline std::vector<RouteTask> tasks_from_batch(const RoutingInstance& inst,
                                               const BatchOfRoutes& batch) {
    std::vector<RouteTask> tasks;
    tasks.reserve(batch.routes.size());
    for (std::size_t z = 0; z < batch.routes.size(); ++z)
        tasks.push_back(RouteTask{static_cast<int>(z),
                                  route_transit(inst, batch.routes[z]) + inst.params.incidental_time});
    return tasks;
}

inline std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                             const RawInstance& raw) {
    config.validate();
    const RoutingInstance inst = adapt_demands(raw, config.params);

    std::vector<ResultRow> rows;
    for (int trial = 0; trial < config.trials; ++trial) {
        const auto started = std::chrono::steady_clock::now();
        const std::uint64_t seed = trial_seed(config.master_seed, trial);

        RoutingConfig rc;
        rc.seed = seed;
        rc.iterations = config.iterations;
        rc.qaoa = config.qaoa;
        const RoutingResult routed = multi_start_route(inst, rc);

        const ValidationReport report = validate_batch(inst, routed.batch);
        if (!report.ok)
            throw InfeasibleError("run_experiment: trial " + std::to_string(trial) +
                                  " produced an invalid batch: " +
                                  validation_report_to_json(report).dump());

        ResultRow row;
        row.instance = raw.name;
        row.trial = trial;
        row.seed = seed;
        row.route_min = routed.batch.total_time * 60.0;
        row.mode = config.mode == ScheduleMode::Pure ? "pure" : "hybrid";
        for (const Route& r : routed.batch.routes) row.route_kwh += route_energy(inst, r);

        const std::vector<RouteTask> tasks = tasks_from_batch(inst, routed.batch);
        for (int m : config.fleet_sizes) {
            SchedulingConfig sc;
            sc.recharge_time = inst.params.recharge_time;
            sc.pure_variable_budget = config.pure_variable_budget;
            sc.qaoa = config.qaoa;
            sc.qaoa.seed = seed + 1000003ULL * static_cast<std::uint64_t>(m);
            const ScheduleReport sched = schedule(tasks, m, config.mode, sc);
            row.makespans.emplace_back(m, sched.makespan);
        }

        row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        rows.push_back(std::move(row));
    }

    // averaged summary row
    ResultRow avg;
    avg.instance = raw.name;
    avg.trial = -1;
    avg.seed = config.master_seed;
    avg.mode = rows.front().mode;
    for (const auto& [m, _] : rows.front().makespans) avg.makespans.emplace_back(m, 0.0);
    for (const ResultRow& row : rows) {
        avg.route_min += row.route_min / config.trials;
        avg.route_kwh += row.route_kwh / config.trials;
        avg.wall_s += row.wall_s / config.trials;
        for (std::size_t k = 0; k < row.makespans.size(); ++k)
            avg.makespans[k].second += row.makespans[k].second / config.trials;
    }
    rows.push_back(std::move(avg));
    return rows;
}

inline std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    std::ifstream in(config.instance_path);
    if (!in) throw InputError("run_experiment: cannot open instance " + config.instance_path);
    std::ostringstream text;
    text << in.rdbuf();
    return run_experiment(config, parse_vrp(text.str()));
}

enum class EmitFormat { Csv, Json };

// CSV: one line per (row, fleet size); minutes/hours/kWh rendered to two
// decimals. JSON: the row list verbatim at full precision.
inline std::string emit(const std::vector<ResultRow>& rows, EmitFormat format) {
    if (rows.empty()) throw InputError("emit: no rows");
    if (format == EmitFormat::Json) {
        json out = json::array();
        for (const ResultRow& row : rows) {
            json makespans = json::array();
            for (const auto& [m, mk] : row.makespans) makespans.push_back({{"m", m}, {"makespan_h", mk}});
            out.push_back({{"instance", row.instance},
                           {"trial", row.trial},
                           {"seed", row.seed},
                           {"route_min", row.route_min},
                           {"route_kwh", row.route_kwh},
                           {"mode", row.mode},
                           {"makespans", makespans},
                           {"wall_s", row.wall_s}});
        }
        return out.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "instance,trial,seed,route_min,route_kwh,m,mode,makespan_h,wall_s\n";
    for (const ResultRow& row : rows) {
        const std::string trial = row.trial < 0 ? "avg" : std::to_string(row.trial);
        for (const auto& [m, mk] : row.makespans) {
            out << row.instance << ',' << trial << ',' << row.seed << ','
                << format_fixed(row.route_min) << ',' << format_fixed(row.route_kwh) << ',' << m
                << ',' << row.mode << ',' << format_fixed(mk) << ',' << format_fixed(row.wall_s)
                << '\n';
        }
    }
    return out.str();
}

}  // namespace uavopt
