#include "hydrosurr/validation/kinematics.hpp"

#include <cmath>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/validation/savgol.hpp"

namespace hydrosurr::validation {

Vec3 angular_velocity(const Quat& q, const Quat& qdot) { return (qdot * q.conjugate()).vec() * 2.0; }

std::vector<double> water_level_series(const TrialTrace& trace, double quiescent_depth,
                                       const geometry::VehicleSpec& spec) {
    const double surface = trace.floor_z + quiescent_depth;
    std::vector<double> z(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const Vec3 origin = trace.position[i] + trace.orientation[i].rotate(spec.marker_to_origin);
        z[i] = surface - origin.z;
    }
    return z;
}

Kinematics compute_kinematics(const TrialTrace& uniform, const geometry::VehicleSpec& spec,
                              const KinematicsOptions& options) {
    uniform.validate();
    const std::size_t n = uniform.size();
    if (n < 2) throw DataError("trace " + uniform.id + " is too short for differentiation");
    const double dt = (uniform.t.back() - uniform.t.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(uniform.t[i] - uniform.t[i - 1] - dt) > 1e-6 * dt)
            throw DataError("trace " + uniform.id + " is not uniformly sampled; resample first");

    std::vector<Quat> q = uniform.orientation;
    align_hemispheres(q);
    std::vector<double> col(n);
    auto filter = [&](auto get, int deriv) {
        for (std::size_t i = 0; i < n; ++i) col[i] = get(i);
        return savgol(col, options.window, options.polyorder, deriv, dt);
    };
    std::vector<double> pos[3], vel[3], qs[4], qd[4];
    for (int a = 0; a < 3; ++a) {
        vel[a] = filter([&](std::size_t i) { return uniform.position[i][a]; }, 1);
        pos[a] = filter([&](std::size_t i) { return uniform.position[i][a]; }, 0);
    }
    auto qc = [&](std::size_t i, int c) { return c == 0 ? q[i].w : c == 1 ? q[i].x : c == 2 ? q[i].y : q[i].z; };
    for (int c = 0; c < 4; ++c) {
        qs[c] = filter([&](std::size_t i) { return qc(i, c); }, 0);
        qd[c] = filter([&](std::size_t i) { return qc(i, c); }, 1);
    }

    Kinematics k;
    k.t = uniform.t;
    k.orientation.resize(n);
    k.v_world.resize(n);
    k.v_body.resize(n);
    k.omega_body.resize(n);
    TrialTrace smoothed = uniform;
    for (std::size_t i = 0; i < n; ++i) {
        const Quat qi = Quat{qs[0][i], qs[1][i], qs[2][i], qs[3][i]}.normalized();
        const Quat qdi{qd[0][i], qd[1][i], qd[2][i], qd[3][i]};
        const Mat3 R = qi.to_matrix();
        const Vec3 omega_world = angular_velocity(qi, qdi);
        const Vec3 v_marker_world{vel[0][i], vel[1][i], vel[2][i]};
        k.orientation[i] = qi;
        k.v_world[i] = com_velocity(v_marker_world, omega_world, R * spec.r_cp);
        k.v_body[i] = R.transposed() * k.v_world[i];
        k.omega_body[i] = R.transposed() * omega_world;
        smoothed.position[i] = {pos[0][i], pos[1][i], pos[2][i]};
        smoothed.orientation[i] = qi;
    }
    k.z_water = water_level_series(smoothed, uniform.depth, spec);
    return k;
}

}  // namespace hydrosurr::validation
