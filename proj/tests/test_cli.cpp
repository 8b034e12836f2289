#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// End-to-end checks driving the built binary.

namespace {

struct CliOutcome {
    int exit_code = -1;
    std::string stdout_text;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

CliOutcome run_cli(const std::string& args, const std::string& tag) {
    const std::string out_path = std::string(CLI_TMP_DIR) + "/" + tag + ".stdout";
    const std::string cmd = std::string(UAVOPT_CLI_BIN) + " " + args + " > " + out_path + " 2> " +
                            out_path + ".err";
    const int status = std::system(cmd.c_str());
    CliOutcome outcome;
    outcome.exit_code = WEXITSTATUS(status);
    outcome.stdout_text = slurp(out_path);
    return outcome;
}

std::string data_file(const std::string& name) {
    return std::string(UAVOPT_DATA_DIR) + "/" + name;
}

std::string tmp_file(const std::string& name) {
    return std::string(CLI_TMP_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("route subcommand") {
    SECTION("valid instance writes JSON and summarizes") {
        const std::string out = tmp_file("route.json");
        const CliOutcome r = run_cli(
            "route --instance " + data_file("P-n16-k8.vrp") + " --seed 7 --iterations 2 --out " + out,
            "route_ok");
        CHECK(r.exit_code == 0);
        CHECK(r.stdout_text.find("total_min=") != std::string::npos);
        const nlohmann::json doc = nlohmann::json::parse(slurp(out));
        CHECK(doc.at("instance") == "P-n16-k8");
        CHECK(doc.at("routes").size() >= 7);
    }

    SECTION("missing file exits 2") {
        const CliOutcome r = run_cli("route --instance /nonexistent.vrp", "route_missing");
        CHECK(r.exit_code == 2);
    }

    SECTION("same seed twice gives byte-identical JSON") {
        const std::string out1 = tmp_file("route_a.json");
        const std::string out2 = tmp_file("route_b.json");
        run_cli("route --instance " + data_file("P-n16-k8.vrp") + " --seed 3 --iterations 2 --out " +
                    out1,
                "route_det_a");
        run_cli("route --instance " + data_file("P-n16-k8.vrp") + " --seed 3 --iterations 2 --out " +
                    out2,
                "route_det_b");
        CHECK(slurp(out1) == slurp(out2));
        CHECK(!slurp(out1).empty());
    }
}

TEST_CASE("schedule subcommand") {
    const std::string routes = tmp_file("sched_routes.json");
    run_cli("route --instance " + data_file("P-n16-k8.vrp") + " --seed 5 --iterations 2 --out " +
                routes,
            "sched_prep");

    SECTION("hybrid schedule on two drones") {
        const CliOutcome r =
            run_cli("schedule --routes " + routes + " --drones 2 --mode hybrid --seed 5 --out " +
                        tmp_file("sched.json"),
                    "sched_ok");
        CHECK(r.exit_code == 0);
        CHECK(r.stdout_text.find("makespan_h=") != std::string::npos);
        const nlohmann::json doc = nlohmann::json::parse(slurp(tmp_file("sched.json")));
        CHECK(doc.at("drones") == 2);
        CHECK(doc.at("makespan_h").get<double>() > 0.0);
    }

    SECTION("zero drones is a usage error") {
        const CliOutcome r = run_cli("schedule --routes " + routes + " --drones 0", "sched_zero");
        CHECK(r.exit_code == 2);
    }

    SECTION("oversized pure mode names the budget") {
        // 8+ routes on 4 drones exceeds the 24-variable pure budget
        const CliOutcome r = run_cli(
            "schedule --routes " + routes + " --drones 4 --mode pure --seed 5", "sched_budget");
        CHECK(r.exit_code == 1);
        const std::string err = slurp(tmp_file("sched_budget.stdout.err"));
        CHECK(err.find("budget") != std::string::npos);
    }
}

TEST_CASE("solve subcommand produces byte-identical output under a fixed seed") {
    const std::string out1 = tmp_file("solve_a.json");
    const std::string out2 = tmp_file("solve_b.json");
    const std::string flags = "solve --instance " + data_file("P-n16-k8.vrp") +
                              " --drones 2 --seed 11 --iterations 2 --out ";
    const CliOutcome a = run_cli(flags + out1, "solve_a");
    const CliOutcome b = run_cli(flags + out2, "solve_b");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    const std::string doc1 = slurp(out1);
    CHECK(!doc1.empty());
    CHECK(doc1 == slurp(out2));
    const nlohmann::json doc = nlohmann::json::parse(doc1);
    CHECK(doc.contains("routing"));
    CHECK(doc.contains("schedule"));
}

TEST_CASE("qubo subcommand") {
    const std::string model = tmp_file("model.json");
    {
        std::ofstream out(model);
        out << R"({"n_vars":1,"quadratic":[],"linear":[1.0],"constant":0.0})";
    }

    SECTION("brute force prints the zero minimizer") {
        const CliOutcome r = run_cli("qubo --model " + model + " --method brute", "qubo_brute");
        CHECK(r.exit_code == 0);
        const nlohmann::json doc = nlohmann::json::parse(r.stdout_text);
        CHECK(doc.at("bits") == "0");
        CHECK(doc.at("energy") == 0.0);
    }

    SECTION("qaoa emits a sample set and never beats brute force") {
        const CliOutcome r =
            run_cli("qubo --model " + model + " --method qaoa --seed 3", "qubo_qaoa");
        CHECK(r.exit_code == 0);
        const nlohmann::json doc = nlohmann::json::parse(r.stdout_text);
        CHECK(doc.at("energy").get<double>() >= 0.0);
        CHECK(doc.at("samples").at("shots") == 1024);
    }

    SECTION("invalid JSON exits 2") {
        const std::string broken = tmp_file("broken.json");
        {
            std::ofstream out(broken);
            out << "{not json";
        }
        const CliOutcome r = run_cli("qubo --model " + broken, "qubo_broken");
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("UAVOPT_SEED env var sets the default seed but flags win") {
    const std::string out_env = tmp_file("env_seed.json");
    const std::string out_flag = tmp_file("flag_seed.json");
    const std::string out_plain = tmp_file("plain_seed.json");
    const std::string instance = data_file("P-n16-k8.vrp");

    const std::string env_cmd = "UAVOPT_SEED=9 " + std::string(UAVOPT_CLI_BIN) +
                                " route --instance " + instance + " --iterations 2 --out " +
                                out_env + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
    const std::string flag_cmd = "UAVOPT_SEED=3 " + std::string(UAVOPT_CLI_BIN) +
                                 " route --instance " + instance +
                                 " --seed 9 --iterations 2 --out " + out_flag +
                                 " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(flag_cmd.c_str())) == 0);
    run_cli("route --instance " + instance + " --seed 9 --iterations 2 --out " + out_plain,
            "env_plain");

    CHECK(slurp(out_env) == slurp(out_plain));   // env supplies the default
    CHECK(slurp(out_flag) == slurp(out_plain));  // explicit flag overrides env
}

TEST_CASE("bench subcommand") {
    const std::string config = tmp_file("bench_config.json");
    {
        std::ofstream out(config);
        out << R"({"instance":")" << data_file("P-n16-k8.vrp") << R"(",
                   "trials":1,"master_seed":2,"iterations":2,"fleet_sizes":[2],"mode":"hybrid"})";
    }

    SECTION("small config emits CSV on stdout") {
        const CliOutcome r = run_cli("bench --config " + config, "bench_ok");
        CHECK(r.exit_code == 0);
        CHECK(r.stdout_text.rfind("instance,trial,seed,", 0) == 0);
        CHECK(r.stdout_text.find("P-n16-k8,0,2,") != std::string::npos);
        CHECK(r.stdout_text.find("P-n16-k8,avg,") != std::string::npos);
    }

    SECTION("unknown instance path errors") {
        const std::string bad = tmp_file("bench_bad.json");
        {
            std::ofstream out(bad);
            out << R"({"instance":"/nope.vrp","trials":1})";
        }
        const CliOutcome r = run_cli("bench --config " + bad, "bench_bad");
        CHECK(r.exit_code != 0);
    }

    SECTION("reruns agree on every data column except wall time") {
        const CliOutcome a = run_cli("bench --config " + config, "bench_det_a");
        const CliOutcome b = run_cli("bench --config " + config, "bench_det_b");
        auto strip_wall = [](const std::string& csv) {
            std::istringstream lines(csv);
            std::string line, kept;
            while (std::getline(lines, line))
                kept += line.substr(0, line.rfind(',')) + "\n";
            return kept;
        };
        CHECK(strip_wall(a.stdout_text) == strip_wall(b.stdout_text));
    }
}
