#include "hydrosurr/validation/sections.hpp"

#include <cmath>

#include "hydrosurr/core/error.hpp"

namespace hydrosurr::validation {

std::vector<std::pair<std::size_t, std::size_t>> planar_runs(std::span<const double> t, std::span<const double> vz,
                                                             const SectionOptions& o) {
    if (t.size() != vz.size()) throw DataError("section extraction: time and velocity lengths differ");
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    const std::size_t n = t.size();
    std::size_t i = 0;
    while (i < n) {
        if (!(std::abs(vz[i]) < o.vz_limit)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double sum = 0.0;
        while (j < n && std::abs(vz[j]) < o.vz_limit) sum += vz[j++];
        const double mean = sum / static_cast<double>(j - i);
        if (t[j - 1] - t[i] > o.min_duration && std::abs(mean) < o.vz_limit) runs.emplace_back(i, j);
        i = j;
    }
    return runs;
}

std::vector<PlanarSection> extract_planar_sections(const Kinematics& k, const SectionOptions& o) {
    std::vector<double> vz(k.v_world.size());
    for (std::size_t i = 0; i < vz.size(); ++i) vz[i] = k.v_world[i].z;
    std::vector<PlanarSection> out;
    for (const auto& [b, e] : planar_runs(k.t, vz, o)) {
        PlanarSection s;
        s.begin = b;
        s.end = e;
        s.duration = k.t[e - 1] - k.t[b];
        for (std::size_t i = b; i < e; ++i) {
            s.mean_speed += norm(k.v_body[i]);
            s.mean_v2 += dot(k.v_body[i], k.v_body[i]);
            s.mean_vz += vz[i];
        }
        const double c = static_cast<double>(e - b);
        s.mean_speed /= c;
        s.mean_v2 /= c;
        s.mean_vz /= c;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace hydrosurr::validation
