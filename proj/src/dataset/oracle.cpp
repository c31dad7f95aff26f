#include "hydrosurr/dataset/oracle.hpp"

#include <cmath>
#include <cstdio>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/parallel.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/dataset/sample.hpp"
#include "hydrosurr/features/features.hpp"

namespace hydrosurr::dataset {

using geometry::SurfaceType;

double oracle_drag_coefficient(SurfaceType type) {
    switch (type) {
        case SurfaceType::bottom: return 0.4;
        case SurfaceType::front: return 1.1;
        case SurfaceType::rear: return 0.9;
        case SurfaceType::side: return 0.7;
        case SurfaceType::wheel: return 1.0;
    }
    return 0.0;
}

std::vector<Vec3> oracle_forces_clean(std::span<const geometry::SurfacePatch> patches,
                                      const geometry::VehicleSpec& spec, const Vec3& v, double rho,
                                      double z_water, double g) {
    std::vector<Vec3> out(patches.size());
    const double speed = norm(v);
    for (std::size_t s = 0; s < patches.size(); ++s) {
        const auto& p = patches[s];
        const auto sub = features::submergence_metrics(p.depth_samples, z_water, spec.H_sub);
        if (sub.sub_frac == 0.0) continue;
        const double a_proj = features::projected_area(p.normal, p.area, v);
        const Vec3 drag = v * (-0.5 * rho * oracle_drag_coefficient(p.type) * a_proj * sub.sub_frac * speed);
        const Vec3 buoy{0.0, 0.0, rho * g * p.area * sub.sub_frac * sub.sub_depth_norm * spec.H_sub};
        out[s] = drag + buoy;
    }
    return out;
}

void add_oracle_noise(std::vector<Vec3>& forces, double noise_fraction, std::uint64_t seed) {
    Rng rng(seed);
    for (auto& f : forces)
        for (int c = 0; c < 3; ++c) {
            const double z = standard_normal(rng);
            f[c] += noise_fraction * std::abs(f[c]) * z;
        }
}

std::vector<Vec3> oracle_forces(std::span<const geometry::SurfacePatch> patches, const geometry::VehicleSpec& spec,
                                const Vec3& v, double rho, double z_water, double g, std::uint64_t noise_seed,
                                double noise_fraction) {
    auto f = oracle_forces_clean(patches, spec, v, rho, z_water, g);
    add_oracle_noise(f, noise_fraction, noise_seed);
    return f;
}

double oracle_drag_aggregate(const geometry::VehicleGeometry& g, double depth, double rho) {
    const auto f = oracle_forces_clean(g.patches, g.spec, {1.0, 0.0, 0.0}, rho, water_level(g.spec, depth), 9.81);
    double fx = 0.0;
    for (const auto& x : f) fx += x.x;
    return std::abs(fx);
}

double oracle_buoyancy(const geometry::VehicleGeometry& g, double depth, double rho, double grav) {
    const auto f = oracle_forces_clean(g.patches, g.spec, {0.0, 0.0, 0.0}, rho, water_level(g.spec, depth), grav);
    double fz = 0.0;
    for (const auto& x : f) fz += x.z;
    return fz;
}

void CampaignConfig::validate() const {
    const std::pair<const char*, Range> ranges[] = {{"U", U}, {"phi_deg", phi_deg}, {"rho", rho}, {"H", H}};
    for (const auto& [name, r] : ranges)
        if (!(r.lo <= r.hi)) throw ConfigError(std::string("range ") + name + ": min > max");
    if (!(U.lo > 0)) throw ConfigError("U range must be positive");
    if (!(rho.lo > 0)) throw ConfigError("rho range must be positive");
    if (!(H.lo >= 0)) throw ConfigError("H range must be non-negative");
    if (!(phi_deg.lo >= 30.0 && phi_deg.hi <= 90.0)) throw ConfigError("flow angle range must lie within [30, 90] deg");
    if (!(dt > 0 && duration > dt)) throw ConfigError("need 0 < dt < duration");
    if (!(noise_fraction >= 0)) throw ConfigError("noise fraction must be >= 0");
}

CampaignConfig default_campaign(const std::string& vehicle) {
    CampaignConfig c;
    if (vehicle == "mini-warthog") {
        c.U = {0.5, 4.0};
        c.H = {0.10, 0.40};
        c.dt = 0.005;
    } else {
        c.U = {0.2, 1.0};
        c.H = {0.06, 0.20};
        c.dt = 0.02;
    }
    return c;
}

nlohmann::json to_json(const CampaignConfig& c) {
    auto r = [](const Range& x) { return nlohmann::json::array({x.lo, x.hi}); };
    return {{"U", r(c.U)},           {"phi_deg", r(c.phi_deg)}, {"rho", r(c.rho)},
            {"H", r(c.H)},           {"dt", c.dt},              {"duration", c.duration},
            {"noise_fraction", c.noise_fraction}, {"transient_tau", c.transient_tau}, {"g", c.g}};
}

CampaignConfig campaign_from_json(const nlohmann::json& j, const CampaignConfig& defaults) {
    CampaignConfig c = defaults;
    try {
        auto r = [&](const char* key, Range& out) {
            if (!j.contains(key)) return;
            const auto v = j.at(key).get<std::vector<double>>();
            if (v.size() != 2) throw ConfigError(std::string("range ") + key + " needs [min, max]");
            out = {v[0], v[1]};
        };
        r("U", c.U);
        r("phi_deg", c.phi_deg);
        r("rho", c.rho);
        r("H", c.H);
        c.dt = j.value("dt", c.dt);
        c.duration = j.value("duration", c.duration);
        c.noise_fraction = j.value("noise_fraction", c.noise_fraction);
        c.transient_tau = j.value("transient_tau", c.transient_tau);
        c.g = j.value("g", c.g);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid campaign config: ") + e.what());
    }
    c.validate();
    return c;
}

std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::size_t dims, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
    std::vector<std::size_t> perm(n);
    for (std::size_t d = 0; d < dims; ++d) {
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i < n; ++i)
            pts[i][d] = (static_cast<double>(perm[i]) + uniform01(rng)) / static_cast<double>(n);
    }
    return pts;
}

std::vector<CaseRecord> generate_campaign(const geometry::VehicleGeometry& geom, const CampaignConfig& cfg,
                                          std::size_t n_cases, std::uint64_t seed, unsigned jobs) {
    cfg.validate();
    const auto design = latin_hypercube(n_cases, 4, derive_seed(seed, 0));
    const auto steps = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt)) + 1;
    auto lerp = [](const Range& r, double u) { return r.lo + u * (r.hi - r.lo); };

    std::vector<CaseRecord> out(n_cases);
    parallel_for(n_cases, jobs, [&](std::size_t i) {
        CaseRecord& r = out[i];
        char id[32];
        std::snprintf(id, sizeof id, "c%03zu", i);
        r.case_id = id;
        r.vehicle = geom.spec.name;
        r.params = {lerp(cfg.U, design[i][0]), lerp(cfg.phi_deg, design[i][1]), lerp(cfg.rho, design[i][2]),
                    lerp(cfg.H, design[i][3])};
        r.frame = Frame::solver;
        r.dt = cfg.dt;
        for (const auto& p : geom.patches) r.surfaces.push_back(p.name);
        r.t.resize(steps);
        r.forces.assign(steps * geom.K() * 3, 0.0);

        const Vec3 v = vehicle_velocity(r.params);
        const auto clean = oracle_forces_clean(geom.patches, geom.spec, v, r.params.rho,
                                               water_level(geom.spec, r.params.H), cfg.g);
        Rng rng(derive_seed(seed, i + 1));
        for (std::size_t k = 0; k < steps; ++k) {
            r.t[k] = static_cast<double>(k) * cfg.dt;
            const double ramp = cfg.transient_tau > 0 ? 1.0 - std::exp(-r.t[k] / cfg.transient_tau) : 1.0;
            for (std::size_t s = 0; s < geom.K(); ++s) {
                Vec3 f = clean[s] * ramp;
                for (int c = 0; c < 3; ++c) f[c] += cfg.noise_fraction * std::abs(f[c]) * standard_normal(rng);
                r.set_force(k, s, vehicle_to_solver_force(f));
            }
        }
    });
    return out;
}

}  // namespace hydrosurr::dataset
