#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hydrosurr/core/quat.hpp"
#include "hydrosurr/core/vec3.hpp"

namespace hydrosurr::validation {

enum class Direction { ramp_in, ramp_out };
std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

/// Motion-capture record of one wading trial. Positions and orientations
/// describe the marker frame in the world frame (z up); orientations map
/// marker (vehicle) axes to world axes.
struct TrialTrace {
    std::string id;
    double depth = 0.0;          // quiescent water depth over the flat floor (m)
    Direction direction = Direction::ramp_in;
    double command_speed = 0.0;  // m/s
    double floor_z = 0.0;        // world height of the flat channel floor (m)

    std::vector<double> t;
    std::vector<Vec3> position;
    std::vector<Quat> orientation;

    std::size_t size() const { return t.size(); }
    /// Throws DataError on length mismatch, non-increasing time or non-unit quaternions.
    void validate() const;
};

/// Uniform-rate copy: positions linear in t, orientations slerped along the
/// shortest arc and renormalized. Gaps wider than 5 mean input periods throw.
TrialTrace resample_uniform(const TrialTrace& trace, double rate = 111.0);

/// Flips quaternion signs so consecutive samples lie in the same hemisphere.
void align_hemispheres(std::vector<Quat>& q);

void write_trace_csv(const std::filesystem::path& path, const TrialTrace& trace);
TrialTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace hydrosurr::validation
