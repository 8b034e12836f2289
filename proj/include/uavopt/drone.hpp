#pragma once

#include <span>
#include <string>
#include <vector>

#include "uavopt/errors.hpp"

namespace uavopt {

// Homogeneous-fleet drone parameters. Units: kg, km, h, kW, kWh.
// battery_capacity is an energy budget compared against route energy.
struct DroneParams {
    double weight = 7.5;             // W, airframe mass [kg]
    double payload_capacity = 2.5;   // L [kg]
    double motor_efficiency = 0.5;   // phi, motor+propeller conversion efficiency
    double lift_to_drag = 3.0;       // gamma
    double electronics_power = 0.1;  // p_e [kW]
    double battery_capacity = 1.7;   // B [kWh]
    double max_power = 0.6;          // P_H [kW]
    double recharge_time = 1.25;     // tau_c [h]
    double incidental_time = 0.15;   // tau, loading/takeoff/landing/delivery [h]
    double incidental_energy = 0.015;  // xi, takeoff/landing/delivery [kWh]

    void validate() const {
        const double fields[] = {weight,          payload_capacity, motor_efficiency,
                                 lift_to_drag,    electronics_power, battery_capacity,
                                 max_power,       recharge_time,     incidental_time,
                                 incidental_energy};
        for (double v : fields)
            if (!(v > 0.0)) throw InputError("DroneParams: all parameters must be positive");
        if (max_power <= electronics_power)
            throw InputError("DroneParams: max_power must exceed electronics_power");
    }

    // 370 * phi * gamma * (P_H - p_e): km/h per unit of total mass fraction.
    double velocity_numerator() const {
        return 370.0 * motor_efficiency * lift_to_drag * (max_power - electronics_power);
    }
};

// Cruise speed at maximum power with the given payload mass [km/h].
inline double velocity(const DroneParams& p, double payload_kg) {
    if (payload_kg < 0) throw InputError("velocity: negative payload");
    return p.velocity_numerator() / (p.weight + payload_kg);
}

// Time to cover distance_km while carrying payload_kg [h].
inline double flight_time(const DroneParams& p, double distance_km, double payload_kg) {
    if (distance_km < 0) throw InputError("flight_time: negative distance");
    return distance_km * (p.weight + payload_kg) / p.velocity_numerator();
}

// Energy drawn over one leg at max power [kWh].
inline double edge_energy(const DroneParams& p, double distance_km, double payload_kg) {
    return p.max_power * flight_time(p, distance_km, payload_kg);
}

// Payload carried on each leg of a route serving the given demands in order.
// Leg i runs from stop i to stop i+1 (stop 0 = depot) and carries the demands
// not yet delivered; the return leg carries zero. Size is demands.size() + 1.
inline std::vector<double> payload_profile(std::span<const double> demands) {
    for (double r : demands)
        if (!(r > 0.0)) throw InputError("payload_profile: demands must be positive");
    std::vector<double> profile(demands.size() + 1, 0.0);
    double remaining = 0.0;
    for (std::size_t i = demands.size(); i-- > 0;) {
        remaining += demands[i];
        profile[i] = remaining;
    }
    return profile;
}

namespace detail {
inline void check_leg_shape(std::span<const double> leg_distances, std::span<const double> demands) {
    if (leg_distances.size() != demands.size() + 1)
        throw InputError("route legs must number demands + 1 (got " +
                         std::to_string(leg_distances.size()) + " legs for " +
                         std::to_string(demands.size()) + " demands)");
}
}  // namespace detail

// Total flight time of a depot-anchored route given its leg distances [h].
inline double route_transit_time(const DroneParams& p, std::span<const double> leg_distances,
                                 std::span<const double> demands) {
    detail::check_leg_shape(leg_distances, demands);
    const std::vector<double> loads = payload_profile(demands);
    double t = 0.0;
    for (std::size_t i = 0; i < leg_distances.size(); ++i)
        t += flight_time(p, leg_distances[i], loads[i]);
    return t;
}

// Route energy: flight legs at max power plus the fixed incidental draw [kWh].
inline double route_energy(const DroneParams& p, std::span<const double> leg_distances,
                           std::span<const double> demands) {
    return p.max_power * route_transit_time(p, leg_distances, demands) + p.incidental_energy;
}

// Batch objective: summed transit plus (M+1) incidental blocks [h].
inline double batch_total_time(const DroneParams& p, std::span<const double> route_transits) {
    double t = 0.0;
    for (double v : route_transits) t += v;
    return t + (static_cast<double>(route_transits.size()) + 1.0) * p.incidental_time;
}

}  // namespace uavopt
