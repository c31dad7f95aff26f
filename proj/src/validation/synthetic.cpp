#include "hydrosurr/validation/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"

namespace hydrosurr::validation {
namespace {

/// Slope varies linearly from s0 to s1 over the segment.
struct Segment {
    double length;
    double s0;
    double s1;
};

struct Profile {
    std::vector<Segment> segs;
    double total() const {
        double t = 0.0;
        for (const auto& s : segs) t += s.length;
        return t;
    }
    /// Height relative to the start and slope at horizontal distance x.
    void eval(double x, double& h, double& slope) const {
        h = 0.0;
        for (const auto& s : segs) {
            if (x <= s.length) {
                slope = s.s0 + (s.s1 - s.s0) * x / s.length;
                h += s.s0 * x + (s.s1 - s.s0) * x * x / (2.0 * s.length);
                return;
            }
            h += s.length * 0.5 * (s.s0 + s.s1);
            x -= s.length;
        }
        slope = segs.back().s1;
    }
};

}  // namespace

TrialTrace synthetic_trial(const SyntheticTrial& c, const geometry::VehicleSpec& spec, SyntheticTruth* truth) {
    if (!(c.speed > 0.0) || !(c.rate > 0.0) || c.depth < 0.0) throw ConfigError("synthetic trial needs positive speed and rate");
    if (c.jitter < 0.0 || c.jitter >= 0.5 / c.rate) throw ConfigError("synthetic jitter must stay below half a period");
    const double m = std::tan(c.ramp_angle_deg * std::numbers::pi / 180.0);
    const double drop = c.depth + c.clearance;
    const double straight = drop / m - c.fillet;
    if (straight < 0.0) throw ConfigError("synthetic ramp too short for its fillets");

    Profile p;
    p.segs = {{c.lead, 0.0, 0.0},     {c.fillet, 0.0, -m}, {straight, -m, -m}, {c.fillet, -m, 0.0},
              {c.flat_length, 0.0, 0.0}, {c.fillet, 0.0, m},  {straight, m, m},   {c.fillet, m, 0.0},
              {c.lead, 0.0, 0.0}};
    const double total = p.total();
    const double flat_x0 = c.lead + 2.0 * c.fillet + straight;

    const double sign = c.direction == Direction::ramp_in ? 1.0 : -1.0;
    const Quat yaw = c.direction == Direction::ramp_in ? Quat{} : Quat::from_axis_angle({0, 0, 1}, std::numbers::pi);
    const double origin_height = -spec.z_0;

    TrialTrace tr;
    tr.id = c.id;
    tr.depth = c.depth;
    tr.direction = c.direction;
    tr.command_speed = c.speed;
    tr.floor_z = c.floor_z;
    Rng rng(derive_seed(c.seed, 0));
    if (truth) truth->vz.clear();
    const double duration = total / c.speed;
    const auto n = static_cast<std::size_t>(std::floor(duration * c.rate)) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / c.rate;
        if (c.jitter > 0.0 && i > 0 && i + 1 < n) t += c.jitter * (2.0 * uniform01(rng) - 1.0);
        const double x = c.speed * t;
        double h, slope;
        p.eval(x, h, slope);
        const Quat q = yaw * Quat::from_axis_angle({0, 1, 0}, std::atan(-slope));
        const Vec3 origin{sign * x, 0.0, c.floor_z + drop + h + origin_height};
        tr.t.push_back(t);
        tr.orientation.push_back(q);
        tr.position.push_back(origin - q.rotate(spec.marker_to_origin));
        if (truth) truth->vz.push_back(c.speed * slope);
    }
    if (truth) {
        truth->flat_t0 = flat_x0 / c.speed;
        truth->flat_t1 = (flat_x0 + c.flat_length) / c.speed;
        truth->duration = duration;
    }
    return tr;
}

}  // namespace hydrosurr::validation
