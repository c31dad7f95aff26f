#pragma once

#include <span>
#include <vector>

#include "hydrosurr/validation/kinematics.hpp"

namespace hydrosurr::validation {

struct SectionOptions {
    double min_duration = 0.2;  // s, strict
    double vz_limit = 0.05;     // m/s, strict
};

/// Steady run on the flat floor. Index range is [begin, end).
struct PlanarSection {
    std::size_t begin = 0;
    std::size_t end = 0;
    double duration = 0.0;
    double mean_speed = 0.0;  // mean body-frame |v|
    double mean_v2 = 0.0;     // mean body-frame |v|^2
    double mean_vz = 0.0;     // mean world vertical velocity
    std::vector<double> fx, fz;  // per-step predicted net forces (N), filled by the suite
    double mean_fx = 0.0;
    double mean_fz = 0.0;
};

/// Maximal runs with |vz| < limit at every step whose duration t[last] - t[first]
/// exceeds min_duration and whose mean |vz| stays below the limit.
std::vector<std::pair<std::size_t, std::size_t>> planar_runs(std::span<const double> t, std::span<const double> vz,
                                                             const SectionOptions& options = {});

/// Sections of a trial, using the world vertical COM velocity as the flatness
/// signal; body-frame v_z stays near zero on a ramp, so it cannot separate ramp from floor.
std::vector<PlanarSection> extract_planar_sections(const Kinematics& k, const SectionOptions& options = {});

}  // namespace hydrosurr::validation
