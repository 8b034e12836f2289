#pragma once

// Umbrella header for the hybrid quantum-classical UAV routing and scheduling
// toolkit: QUBO modeling, QAOA statevector simulation, drone flight physics,
// savings + QAOA-relocation routing, fleet makespan scheduling, and the
// benchmark harness.

#include "uavopt/bench.hpp"
#include "uavopt/drone.hpp"
#include "uavopt/errors.hpp"
#include "uavopt/qaoa.hpp"
#include "uavopt/qubo.hpp"
#include "uavopt/routing.hpp"
#include "uavopt/scheduling.hpp"
#include "uavopt/serialize.hpp"
#include "uavopt/vrp_io.hpp"
