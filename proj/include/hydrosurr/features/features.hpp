#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/geometry/patches.hpp"
#include "hydrosurr/geometry/vehicle.hpp"

namespace hydrosurr::features {

/// Bumped whenever the order or meaning of any feature changes.
inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kGlobalDim = 12;
inline constexpr std::size_t kGlobalDimNoDims = 9;
inline constexpr std::size_t kSurfaceDim = 15;

struct PhysicalConstants {
    double mu = 1.002e-3;    // dynamic viscosity (Pa s)
    double g = 9.81;         // magnitude of vertical gravity (m/s^2)
    double fr_h_max = 10.0;  // upper clip for the depth Froude number
};

struct Submergence {
    double sub_frac = 0.0;
    double sub_depth_norm = 0.0;
};

/// Samples at or below z_water count as submerged. Both outputs are 0 for a dry patch.
/// Throws DataError on empty samples, ConfigError when H_sub <= 0.
Submergence submergence_metrics(std::span<const double> z, double z_water, double H_sub);

/// A * |n . v/|v||, defined as 0 at zero velocity.
double projected_area(const Vec3& normal, double area, const Vec3& v);

struct GlobalFeatures {
    double speed = 0, rho = 0, depth = 0;
    double vx = 0, vy = 0, vz = 0;
    double fr_L = 0, fr_h = 0, re_norm = 0;
    double L = 0, W = 0, H = 0;

    /// 12 values in schema order, or the 9 leading ones when `with_dims` is false.
    std::vector<double> to_vector(bool with_dims = true) const;
};

GlobalFeatures global_features(const Vec3& v, double rho, double depth, const geometry::VehicleSpec& spec,
                               const PhysicalConstants& k = {});

/// K x 15 row-major tensor.
struct SurfaceTensor {
    std::size_t K = 0;
    std::vector<double> data;

    double* row(std::size_t s) { return data.data() + s * kSurfaceDim; }
    const double* row(std::size_t s) const { return data.data() + s * kSurfaceDim; }
    double operator()(std::size_t s, std::size_t f) const { return data[s * kSurfaceDim + f]; }
};

/// Column indices within a surface row.
enum SurfaceColumn : std::size_t {
    kOneHot = 0,       // 5 columns: bottom, front, rear, side, wheel
    kCentroid = 5,     // x/L, y/W, z/H
    kNormal = 8,       // nx, ny, nz
    kArea = 11,        // A/(L H)
    kSubFrac = 12,
    kSubDepth = 13,
    kProjArea = 14,    // A_proj/(L H)
};

void write_static_block(const geometry::SurfacePatch& patch, const geometry::VehicleSpec& spec, double* row);
void write_dynamic_block(const geometry::SurfacePatch& patch, const geometry::VehicleSpec& spec, double z_water,
                         const Vec3& v, double* row);

SurfaceTensor assemble_surface_features(std::span<const geometry::SurfacePatch> patches,
                                        const geometry::VehicleSpec& spec, double z_water, const Vec3& v);

std::span<const std::string_view> global_feature_names();
std::span<const std::string_view> surface_feature_names();

}  // namespace hydrosurr::features
