#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/dataset/case_record.hpp"
#include "hydrosurr/geometry/vehicle.hpp"

namespace hydrosurr::dataset {

/// Per-type drag coefficients of the analytic oracle.
double oracle_drag_coefficient(geometry::SurfaceType type);

/// Noise-free per-patch forces (N, body frame):
///   drag     -1/2 rho c_type A_proj sub_frac |v| v
///   buoyancy  rho g A sub_frac sub_depth_norm H_sub z
std::vector<Vec3> oracle_forces_clean(std::span<const geometry::SurfacePatch> patches,
                                      const geometry::VehicleSpec& spec, const Vec3& v, double rho,
                                      double z_water, double g);

/// Adds zero-mean Gaussian noise with sigma = noise_fraction * |component|, in
/// place, drawing in patch-major, component-minor order.
void add_oracle_noise(std::vector<Vec3>& forces, double noise_fraction, std::uint64_t seed);

std::vector<Vec3> oracle_forces(std::span<const geometry::SurfacePatch> patches, const geometry::VehicleSpec& spec,
                                const Vec3& v, double rho, double z_water, double g, std::uint64_t noise_seed,
                                double noise_fraction = 0.03);

/// Closed-form aggregates for straight-ahead travel (v along +x) at quiescent depth d.
/// |F_x| = C v^2 with C returned by oracle_drag_aggregate.
double oracle_drag_aggregate(const geometry::VehicleGeometry& geometry, double depth, double rho);
/// Net vertical buoyancy (N).
double oracle_buoyancy(const geometry::VehicleGeometry& geometry, double depth, double rho, double g = 9.81);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct CampaignConfig {
    Range U, phi_deg{30.0, 90.0}, rho{1000.0, 1900.0}, H;
    double dt = 0.02;
    double duration = 4.0;
    double noise_fraction = 0.03;
    double transient_tau = 0.3;  // force ramp-up time constant (s)
    double g = 9.81;

    /// Throws ConfigError on inverted ranges or non-positive steps.
    void validate() const;
};

/// Table-I style defaults for the two toy vehicles.
CampaignConfig default_campaign(const std::string& vehicle);

nlohmann::json to_json(const CampaignConfig& c);
CampaignConfig campaign_from_json(const nlohmann::json& j, const CampaignConfig& defaults);

/// n points in [0,1)^dims; every 1-D margin has exactly one point per 1/n bin.
std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::size_t dims, std::uint64_t seed);

/// Synthetic force histories (solver frame) for an LHS design over (U, phi, rho, H).
std::vector<CaseRecord> generate_campaign(const geometry::VehicleGeometry& geometry, const CampaignConfig& config,
                                          std::size_t n_cases, std::uint64_t seed, unsigned jobs = 1);

}  // namespace hydrosurr::dataset
