#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hydrosurr/geometry/vehicle.hpp"
#include "hydrosurr/validation/trace.hpp"

namespace hydrosurr::validation {

/// Ramp-flat-ramp wading run: a level approach, a descending ramp into the
/// channel, the flat floor, and a climbing ramp out. Slope changes are blended
/// over `fillet` metres so position and orientation stay smooth.
struct SyntheticTrial {
    std::string id = "synthetic";
    double depth = 0.1;             // m
    double speed = 1.0;             // horizontal speed, m/s
    Direction direction = Direction::ramp_in;  // ramp-out runs the channel in -x
    double ramp_angle_deg = 8.0;
    double clearance = 0.15;        // ramp top above the water surface (m)
    double fillet = 0.4;            // m
    double lead = 0.5;              // level run before and after the ramps (m)
    double flat_length = 3.0;       // m
    double rate = 120.0;            // Hz
    double jitter = 0.0;            // max timestamp jitter (s), below half a period
    double floor_z = 0.0;
    std::uint64_t seed = 0;
};

struct SyntheticTruth {
    double flat_t0 = 0.0;  // time window in which the floor is exactly level
    double flat_t1 = 0.0;
    double duration = 0.0;
    std::vector<double> vz;  // exact world vertical velocity of the body origin per sample
};

/// Body origin sits -z_0 above the ground, as in the vehicle frame.
TrialTrace synthetic_trial(const SyntheticTrial& cfg, const geometry::VehicleSpec& spec,
                           SyntheticTruth* truth = nullptr);

}  // namespace hydrosurr::validation
