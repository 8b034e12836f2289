#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uavopt/drone.hpp"
#include "uavopt/errors.hpp"
#include "uavopt/qaoa.hpp"
#include "uavopt/qubo.hpp"
#include "uavopt/routing.hpp"
#include "uavopt/scheduling.hpp"

namespace uavopt {

using json = nlohmann::json;

inline std::string bits_to_string(const Bits& bits) {
    std::string s;
    s.reserve(bits.size());
    for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline Bits bits_from_string(const std::string& s) {
    Bits bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw InputError("bitstring must contain only 0 and 1");
        bits.push_back(c == '1');
    }
    return bits;
}

inline json qubo_to_json(const QuboModel& model) {
    json quad = json::array();
    for (const auto& [jk, v] : model.quadratic) quad.push_back({jk.first, jk.second, v});
    return json{{"n_vars", model.n_vars},
                {"quadratic", quad},
                {"linear", model.linear},
                {"constant", model.constant}};
}

inline QuboModel qubo_from_json(const json& j) {
    if (!j.contains("n_vars")) throw InputError("QUBO JSON: missing n_vars");
    QuboModel model(j.at("n_vars").get<int>());
    if (j.contains("constant")) model.add_constant(j.at("constant").get<double>());
    if (j.contains("linear")) {
        const auto linear = j.at("linear").get<std::vector<double>>();
        if (static_cast<int>(linear.size()) != model.n_vars)
            throw InputError("QUBO JSON: linear length does not match n_vars");
        for (int k = 0; k < model.n_vars; ++k) model.add_linear(k, linear[static_cast<std::size_t>(k)]);
    }
    if (j.contains("quadratic"))
        for (const auto& entry : j.at("quadratic")) {
            if (!entry.is_array() || entry.size() != 3)
                throw InputError("QUBO JSON: quadratic entries must be [j, k, value]");
            model.add_quadratic(entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>());
        }
    return model;
}

inline json sample_set_to_json(const SampleSet& set) {
    json samples = json::array();
    for (const Sample& s : set.samples)
        samples.push_back(
            {{"bits", bits_to_string(s.bits)}, {"count", s.count}, {"energy", s.energy}});
    return json{{"shots", set.shots}, {"samples", samples}};
}

inline DroneParams drone_params_from_json(const json& j) {
    DroneParams p;
    auto get = [&](const char* key, double& field) {
        if (j.contains(key)) field = j.at(key).get<double>();
    };
    get("weight", p.weight);
    get("payload_capacity", p.payload_capacity);
    get("motor_efficiency", p.motor_efficiency);
    get("lift_to_drag", p.lift_to_drag);
    get("electronics_power", p.electronics_power);
    get("battery_capacity", p.battery_capacity);
    get("max_power", p.max_power);
    get("recharge_time", p.recharge_time);
    get("incidental_time", p.incidental_time);
    get("incidental_energy", p.incidental_energy);
    p.validate();
    return p;
}

inline json drone_params_to_json(const DroneParams& p) {
    return json{{"weight", p.weight},
                {"payload_capacity", p.payload_capacity},
                {"motor_efficiency", p.motor_efficiency},
                {"lift_to_drag", p.lift_to_drag},
                {"electronics_power", p.electronics_power},
                {"battery_capacity", p.battery_capacity},
                {"max_power", p.max_power},
                {"recharge_time", p.recharge_time},
                {"incidental_time", p.incidental_time},
                {"incidental_energy", p.incidental_energy}};
}

// Routing solution document: ordered routes with per-route transit minutes and
// energy, batch totals, and the seed/iteration provenance.
inline json routing_solution_to_json(const RoutingInstance& inst, const RoutingResult& result,
                                     const std::string& instance_name) {
    json routes = json::array();
    double total_kwh = 0.0;
    for (const Route& r : result.batch.routes) {
        const double transit = route_transit(inst, r);
        const double kwh = route_energy(inst, r);
        total_kwh += kwh;
        routes.push_back({{"customers", r.customers},
                          {"transit_min", transit * 60.0},
                          {"duration_h", transit + inst.params.incidental_time},
                          {"energy_kwh", kwh}});
    }
    json doc{{"instance", instance_name},
             {"seed", result.seed},
             {"iterations", result.iterations},
             {"routes", routes},
             {"total_min", result.batch.total_time * 60.0},
             {"total_kwh", total_kwh}};
    if (!result.moves.empty()) {
        json moves = json::array();
        for (const MoveRecord& m : result.moves)
            moves.push_back({{"customer", m.customer},
                             {"from_route", m.from_route},
                             {"to_route", m.to_route},
                             {"position", m.position},
                             {"total_before_h", m.total_before},
                             {"total_after_h", m.total_after}});
        doc["moves"] = std::move(moves);
    }
    return doc;
}

inline json schedule_report_to_json(const ScheduleReport& report,
                                    const std::vector<RouteTask>& tasks) {
    json assignment = json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i)
        assignment.push_back({tasks[i].id, report.assignment[i]});
    json timelines = json::array();
    for (const auto& timeline : report.timelines) {
        json drone = json::array();
        for (const TimelineEntry& e : timeline)
            drone.push_back({{"route", e.route_id}, {"start_h", e.start}, {"end_h", e.completion}});
        timelines.push_back(std::move(drone));
    }
    return json{{"drones", report.drones},
                {"mode", report.mode},
                {"makespan_h", report.makespan},
                {"assignment", assignment},
                {"timelines", timelines},
                {"classical_fallback", report.classical_fallback}};
}

inline json validation_report_to_json(const ValidationReport& report) {
    json entries = json::array();
    for (const ValidationEntry& e : report.entries)
        entries.push_back({{"constraint", e.constraint},
                           {"ok", e.ok},
                           {"routes", e.offending_routes},
                           {"detail", e.detail}});
    return json{{"ok", report.ok}, {"constraints", entries}};
}

inline std::string format_fixed(double value, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

}  // namespace uavopt
