#pragma once

#include <vector>

#include "hydrosurr/core/quat.hpp"
#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/geometry/vehicle.hpp"
#include "hydrosurr/validation/trace.hpp"

namespace hydrosurr::validation {

/// v_COM = v_marker + omega x r_CP, all in one frame.
inline Vec3 com_velocity(const Vec3& v_marker, const Vec3& omega, const Vec3& r_cp) {
    return v_marker + cross(omega, r_cp);
}

/// World-frame angular velocity 2 (qdot * q^-1), vector part.
Vec3 angular_velocity(const Quat& q, const Quat& qdot);

/// Body-frame water level per step: the world water surface (floor_z + depth)
/// minus the world height of the body origin, which sits at the marker plus
/// the orientation-rotated marker-to-origin offset.
std::vector<double> water_level_series(const TrialTrace& trace, double quiescent_depth,
                                       const geometry::VehicleSpec& spec);

struct KinematicsOptions {
    int window = 9;
    int polyorder = 2;
};

/// Smoothed and differentiated kinematics on a uniform trace.
struct Kinematics {
    std::vector<double> t;
    std::vector<Quat> orientation;   // smoothed, unit norm
    std::vector<Vec3> v_world;       // COM velocity, world frame
    std::vector<Vec3> v_body;        // COM velocity, vehicle frame
    std::vector<Vec3> omega_body;
    std::vector<double> z_water;     // body-frame water level
};

Kinematics compute_kinematics(const TrialTrace& uniform, const geometry::VehicleSpec& spec,
                              const KinematicsOptions& options = {});

}  // namespace hydrosurr::validation
