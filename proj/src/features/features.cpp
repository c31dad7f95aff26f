#include "hydrosurr/features/features.hpp"

#include <algorithm>
#include <cmath>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/simd/kernels.hpp"

namespace hydrosurr::features {

namespace {

constexpr std::array<std::string_view, kGlobalDim> kGlobalNames{
    "speed", "rho", "depth", "v_x", "v_y", "v_z", "Fr_L", "Fr_h", "Re_norm", "L_ref", "W_ref", "H_ref"};

constexpr std::array<std::string_view, kSurfaceDim> kSurfaceNames{
    "is_bottom", "is_front", "is_rear", "is_side", "is_wheel",  "x_over_L", "y_over_W",  "z_over_H",
    "n_x",       "n_y",      "n_z",     "area_norm", "sub_frac", "sub_depth_norm", "proj_area_norm"};

}  // namespace

Submergence submergence_metrics(std::span<const double> z, double z_water, double H_sub) {
    if (z.empty()) throw DataError("submergence metrics need at least one depth sample");
    if (!(H_sub > 0)) throw ConfigError("H_sub must be positive");
    const auto sums = simd::active_kernels().submerged_sums(z.data(), z.size(), z_water);
    if (sums.count == 0) return {};
    const double n = static_cast<double>(sums.count);
    return {n / static_cast<double>(z.size()), (sums.depth_sum / n) / H_sub};
}

double projected_area(const Vec3& normal, double area, const Vec3& v) {
    const double speed = norm(v);
    if (speed == 0.0) return 0.0;
    return area * std::abs(dot(normal, v / speed));
}

std::vector<double> GlobalFeatures::to_vector(bool with_dims) const {
    std::vector<double> out{speed, rho, depth, vx, vy, vz, fr_L, fr_h, re_norm};
    if (with_dims) out.insert(out.end(), {L, W, H});
    return out;
}

GlobalFeatures global_features(const Vec3& v, double rho, double depth, const geometry::VehicleSpec& spec,
                               const PhysicalConstants& k) {
    if (!(rho > 0)) throw DataError("density must be positive");
    if (!(depth >= 0)) throw DataError("depth must be non-negative");
    GlobalFeatures g;
    g.speed = norm(v);
    g.rho = rho;
    g.depth = depth;
    g.vx = v.x;
    g.vy = v.y;
    g.vz = v.z;
    g.fr_L = g.speed / std::sqrt(k.g * spec.L_ref);
    const double root_gd = std::sqrt(k.g * depth);
    g.fr_h = g.speed == 0.0 ? 0.0 : (root_gd == 0.0 ? k.fr_h_max : std::clamp(g.speed / root_gd, 0.0, k.fr_h_max));
    g.re_norm = rho * g.speed * spec.L_ref / k.mu * 1e-6;
    g.L = spec.L_ref;
    g.W = spec.W_ref;
    g.H = spec.H_ref;
    return g;
}

void write_static_block(const geometry::SurfacePatch& p, const geometry::VehicleSpec& spec, double* row) {
    for (int t = 0; t < geometry::kSurfaceTypeCount; ++t) row[kOneHot + t] = 0.0;
    row[kOneHot + static_cast<int>(p.type)] = 1.0;
    row[kCentroid + 0] = p.centroid.x / spec.L_ref;
    row[kCentroid + 1] = p.centroid.y / spec.W_ref;
    row[kCentroid + 2] = p.centroid.z / spec.H_ref;
    row[kNormal + 0] = p.normal.x;
    row[kNormal + 1] = p.normal.y;
    row[kNormal + 2] = p.normal.z;
    row[kArea] = p.area / (spec.L_ref * spec.H_ref);
}

void write_dynamic_block(const geometry::SurfacePatch& p, const geometry::VehicleSpec& spec, double z_water,
                         const Vec3& v, double* row) {
    const auto sub = submergence_metrics(p.depth_samples, z_water, spec.H_sub);
    row[kSubFrac] = sub.sub_frac;
    row[kSubDepth] = sub.sub_depth_norm;
    row[kProjArea] = projected_area(p.normal, p.area, v) / (spec.L_ref * spec.H_ref);
}

SurfaceTensor assemble_surface_features(std::span<const geometry::SurfacePatch> patches,
                                        const geometry::VehicleSpec& spec, double z_water, const Vec3& v) {
    SurfaceTensor t;
    t.K = patches.size();
    t.data.assign(t.K * kSurfaceDim, 0.0);
    for (std::size_t s = 0; s < t.K; ++s) {
        write_static_block(patches[s], spec, t.row(s));
        write_dynamic_block(patches[s], spec, z_water, v, t.row(s));
    }
    return t;
}

std::span<const std::string_view> global_feature_names() { return kGlobalNames; }
std::span<const std::string_view> surface_feature_names() { return kSurfaceNames; }

}  // namespace hydrosurr::features
