#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hydrosurr/core/vec3.hpp"

namespace hydrosurr::dataset {

struct CaseParams {
    double U = 0.0;        // free-stream speed (m/s)
    double phi_deg = 90.0; // flow angle in the solver X-Z plane; 90 is head-on
    double rho = 1000.0;   // kg/m^3
    double H = 0.0;        // quiescent water depth (m)
};

enum class Frame { solver, vehicle };

/// Per-case force history at a uniform timestep.
struct CaseRecord {
    std::string case_id;
    std::string vehicle;
    CaseParams params;
    Frame frame = Frame::solver;
    double dt = 0.0;
    std::vector<std::string> surfaces;
    std::vector<double> t;
    std::vector<double> forces;  // [step][surface][xyz], N

    std::size_t steps() const { return t.size(); }
    Vec3 force(std::size_t step, std::size_t surface) const {
        const double* f = forces.data() + (step * surfaces.size() + surface) * 3;
        return {f[0], f[1], f[2]};
    }
    void set_force(std::size_t step, std::size_t surface, const Vec3& f) {
        double* o = forces.data() + (step * surfaces.size() + surface) * 3;
        o[0] = f.x;
        o[1] = f.y;
        o[2] = f.z;
    }
};

/// Fluid velocity in the solver frame: (U cos phi, 0, U sin phi).
Vec3 solver_fluid_velocity(const CaseParams& p);
/// Velocity of the vehicle through still fluid, body axes.
Vec3 vehicle_velocity(const CaseParams& p);

Vec3 solver_to_vehicle_force(const Vec3& f);
Vec3 vehicle_to_solver_force(const Vec3& f);

/// Permutes force axes into the body frame. Throws DataError if already converted.
CaseRecord to_vehicle_frame(const CaseRecord& record);

/// Delimited text: a '# hydrosurr-case v1 key=value ...' line, a column header
/// 't,<surface>:Fx,<surface>:Fy,<surface>:Fz,...', then one row per step.
void write_case_csv(const std::filesystem::path& path, const CaseRecord& record);
CaseRecord read_case_csv(const std::filesystem::path& path);

}  // namespace hydrosurr::dataset
