// Command-line front end for the UAV routing and scheduling toolkit.
//
// Subcommands: route, schedule, solve, qubo, bench. Exit codes: 0 success,
// 1 infeasible input or validation failure, 2 usage or parse error. Only data
// goes to stdout; diagnostics go to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "uavopt/uavopt.hpp"

namespace {

using namespace uavopt;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("UAVOPT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric UAVOPT_SEED\n";
        }
    }
    return 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_output(const json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError("cannot write " + out_path);
    out << text;
}

struct RouteFlags {
    std::string instance;
    std::string out;
    std::string params_path;
    std::uint64_t seed = default_seed();
    int iterations = 50;
    int depth = 1;
    int shots = 1024;
    int max_evals = 150;
    int qubit_cap = 20;
    bool log_moves = false;
};

DroneParams load_params(const std::string& path) {
    if (path.empty()) return DroneParams{};
    return drone_params_from_json(json::parse(read_file(path)));
}

void add_qaoa_flags(CLI::App* cmd, RouteFlags& f) {
    cmd->add_option("--params", f.params_path, "Drone parameter JSON (defaults embedded)");
    cmd->add_option("--seed", f.seed, "Random seed (UAVOPT_SEED env used when omitted)");
    cmd->add_option("--iterations", f.iterations, "Local-search passes")->check(CLI::PositiveNumber);
    cmd->add_option("--qaoa-depth", f.depth, "QAOA depth p")->check(CLI::NonNegativeNumber);
    cmd->add_option("--shots", f.shots, "Measurement shots")->check(CLI::PositiveNumber);
    cmd->add_option("--max-evals", f.max_evals, "Optimizer evaluation budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--qubit-cap", f.qubit_cap, "Statevector qubit cap")->check(CLI::Range(0, 26));
}

RoutingConfig routing_config(const RouteFlags& f) {
    RoutingConfig rc;
    rc.seed = f.seed;
    rc.iterations = f.iterations;
    rc.qaoa.depth = f.depth;
    rc.qaoa.shots = f.shots;
    rc.qaoa.optimizer_max_evals = f.max_evals;
    rc.qaoa.qubit_cap = f.qubit_cap;
    rc.log_moves = f.log_moves;
    return rc;
}

std::pair<RoutingInstance, RoutingResult> run_route(const RouteFlags& f, std::string* name) {
    const RawInstance raw = parse_vrp(read_file(f.instance));
    if (name) *name = raw.name;
    RoutingInstance inst = adapt_demands(raw, load_params(f.params_path));
    const RoutingResult result = multi_start_route(inst, routing_config(f));
    const ValidationReport report = validate_batch(inst, result.batch);
    if (!report.ok)
        throw InfeasibleError("routing produced an invalid batch: " +
                              validation_report_to_json(report).dump());
    return {std::move(inst), result};
}

std::vector<RouteTask> tasks_from_routes_json(const json& doc, double incidental_time) {
    if (!doc.contains("routes") || !doc.at("routes").is_array() || doc.at("routes").empty())
        throw InputError("routes JSON carries no routes");
    std::vector<RouteTask> tasks;
    int id = 0;
    for (const json& r : doc.at("routes")) {
        double duration;
        if (r.contains("duration_h")) duration = r.at("duration_h").get<double>();
        else if (r.contains("transit_min"))
            duration = r.at("transit_min").get<double>() / 60.0 + incidental_time;
        else throw InputError("route entry lacks duration_h / transit_min");
        tasks.push_back(RouteTask{id++, duration});
    }
    return tasks;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Hybrid quantum-classical UAV routing and scheduling toolkit"};
    app.require_subcommand(1);

    // ---- route ----
    RouteFlags rf;
    CLI::App* route_cmd = app.add_subcommand("route", "Build delivery routes for one instance");
    route_cmd->add_option("--instance", rf.instance, "CVRP-style instance file")->required();
    route_cmd->add_option("--out", rf.out, "Write the routing solution JSON here");
    route_cmd->add_flag("--log-moves", rf.log_moves, "Record accepted relocation moves");
    add_qaoa_flags(route_cmd, rf);

    // ---- schedule ----
    struct {
        std::string routes;
        std::string out;
        std::string mode = "hybrid";
        int drones = 0;
        std::uint64_t seed = default_seed();
        double recharge_time = 1.25;
        double incidental_time = 0.15;
        int shots = 1024;
        int max_evals = 150;
        int depth = 1;
        int qubit_cap = 20;
        int budget = 24;
    } sf;
    CLI::App* sched_cmd = app.add_subcommand("schedule", "Assign finished routes to a drone fleet");
    sched_cmd->add_option("--routes", sf.routes, "Routing solution JSON from `route`")->required();
    sched_cmd->add_option("--drones", sf.drones, "Fleet size")->required()->check(CLI::PositiveNumber);
    sched_cmd->add_option("--mode", sf.mode, "QUBO form")->check(CLI::IsMember({"pure", "hybrid"}));
    sched_cmd->add_option("--seed", sf.seed, "Random seed");
    sched_cmd->add_option("--out", sf.out, "Write the schedule report JSON here");
    sched_cmd->add_option("--recharge-time", sf.recharge_time, "Recharge gap between routes [h]");
    sched_cmd->add_option("--pure-budget", sf.budget, "Pure-mode variable budget");

    // ---- solve ----
    RouteFlags vf;
    struct {
        int drones = 2;
        std::string mode = "hybrid";
        std::string out;
    } xf;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Route an instance, then schedule the fleet");
    solve_cmd->add_option("--instance", vf.instance, "CVRP-style instance file")->required();
    solve_cmd->add_option("--drones", xf.drones, "Fleet size")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--mode", xf.mode, "QUBO form")->check(CLI::IsMember({"pure", "hybrid"}));
    solve_cmd->add_option("--out", xf.out, "Write the combined report JSON here");
    solve_cmd->add_flag("--log-moves", vf.log_moves, "Record accepted relocation moves");
    add_qaoa_flags(solve_cmd, vf);

    // ---- qubo ----
    struct {
        std::string model;
        std::string method = "brute";
        std::uint64_t seed = default_seed();
        int shots = 1024;
        int depth = 1;
        int max_evals = 150;
    } qf;
    CLI::App* qubo_cmd = app.add_subcommand("qubo", "Minimize a QUBO model (debug surface)");
    qubo_cmd->add_option("--model", qf.model, "QuboModel JSON file")->required();
    qubo_cmd->add_option("--method", qf.method, "Solver")->check(CLI::IsMember({"qaoa", "brute"}));
    qubo_cmd->add_option("--seed", qf.seed, "Random seed");
    qubo_cmd->add_option("--shots", qf.shots, "Measurement shots")->check(CLI::PositiveNumber);
    qubo_cmd->add_option("--qaoa-depth", qf.depth, "QAOA depth p")->check(CLI::NonNegativeNumber);
    qubo_cmd->add_option("--max-evals", qf.max_evals, "Optimizer evaluation budget");

    // ---- bench ----
    struct {
        std::string config;
        std::string format = "csv";
    } bf;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run the multi-trial experiment protocol");
    bench_cmd->add_option("--config", bf.config, "Experiment config JSON")->required();
    bench_cmd->add_option("--format", bf.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints the usage message
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (route_cmd->parsed()) {
        std::string name;
        const auto [inst, result] = run_route(rf, &name);
        const json doc = routing_solution_to_json(inst, result, name);
        write_output(doc, rf.out);
        if (!rf.out.empty())
            std::cout << "total_min=" << format_fixed(doc.at("total_min").get<double>())
                      << " total_kwh=" << format_fixed(doc.at("total_kwh").get<double>()) << "\n";
        return kExitOk;
    }

    if (sched_cmd->parsed()) {
        const json doc = json::parse(read_file(sf.routes));
        const std::vector<RouteTask> tasks = tasks_from_routes_json(doc, sf.incidental_time);
        SchedulingConfig sc;
        sc.recharge_time = sf.recharge_time;
        sc.pure_variable_budget = sf.budget;
        sc.qaoa.seed = sf.seed;
        sc.qaoa.depth = sf.depth;
        sc.qaoa.shots = sf.shots;
        sc.qaoa.optimizer_max_evals = sf.max_evals;
        sc.qaoa.qubit_cap = sf.qubit_cap;
        const ScheduleMode mode = sf.mode == "pure" ? ScheduleMode::Pure : ScheduleMode::Hybrid;
        const ScheduleReport report = schedule(tasks, sf.drones, mode, sc);
        write_output(schedule_report_to_json(report, tasks), sf.out);
        if (!sf.out.empty()) std::cout << "makespan_h=" << format_fixed(report.makespan) << "\n";
        return kExitOk;
    }

    if (solve_cmd->parsed()) {
        std::string name;
        const auto [inst, result] = run_route(vf, &name);
        const json routing_doc = routing_solution_to_json(inst, result, name);

        const std::vector<RouteTask> tasks =
            tasks_from_routes_json(routing_doc, inst.params.incidental_time);
        SchedulingConfig sc;
        sc.recharge_time = inst.params.recharge_time;
        sc.qaoa = routing_config(vf).qaoa;
        sc.qaoa.seed = vf.seed + 1000003ULL * static_cast<std::uint64_t>(xf.drones);
        const ScheduleMode mode = xf.mode == "pure" ? ScheduleMode::Pure : ScheduleMode::Hybrid;
        const ScheduleReport report = schedule(tasks, xf.drones, mode, sc);

        json doc{{"routing", routing_doc}, {"schedule", schedule_report_to_json(report, tasks)}};
        write_output(doc, xf.out);
        if (!xf.out.empty())
            std::cout << "total_min=" << format_fixed(routing_doc.at("total_min").get<double>())
                      << " makespan_h=" << format_fixed(report.makespan) << "\n";
        return kExitOk;
    }

    if (qubo_cmd->parsed()) {
        const QuboModel model = qubo_from_json(json::parse(read_file(qf.model)));
        const CostModel cost = as_cost_model(model);
        if (qf.method == "brute") {
            const MinimizeResult best = brute_force_minimize(cost);
            write_output(json{{"method", "brute"},
                              {"bits", bits_to_string(best.bits)},
                              {"energy", best.energy}},
                         "");
        } else {
            QaoaConfig cfg;
            cfg.seed = qf.seed;
            cfg.shots = qf.shots;
            cfg.depth = qf.depth;
            cfg.optimizer_max_evals = qf.max_evals;
            const QaoaResult res = qaoa_minimize(cost, cfg);
            write_output(json{{"method", "qaoa"},
                              {"bits", bits_to_string(res.best_bits)},
                              {"energy", res.best_energy},
                              {"classical_fallback", res.classical_fallback},
                              {"samples", sample_set_to_json(res.samples)}},
                         "");
        }
        return kExitOk;
    }

    if (bench_cmd->parsed()) {
        const ExperimentConfig cfg = experiment_config_from_json(json::parse(read_file(bf.config)));
        const auto rows = run_experiment(cfg);
        std::cout << emit(rows, bf.format == "json" ? EmitFormat::Json : EmitFormat::Csv);
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const CapacityError& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
}
