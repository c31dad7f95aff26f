#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/dataset/case_record.hpp"
#include "hydrosurr/features/features.hpp"
#include "hydrosurr/geometry/vehicle.hpp"

namespace hydrosurr::dataset {

enum AugmentationBits : unsigned { kAugNone = 0, kAugMirror = 1, kAugReverse = 2 };

/// "none", "mirror", "reverse" or "mirror+reverse".
std::string augmentation_tag(unsigned bits);
unsigned parse_augmentation_tag(const std::string& tag);

/// One section-averaged training record. Per-surface arrays follow the
/// vehicle's patch order.
struct Sample {
    std::string vehicle;
    std::string case_id;
    int section = 0;
    unsigned augmentation = kAugNone;

    Vec3 v{};                        // vehicle velocity, body frame (m/s)
    double rho = 1000.0;
    double depth = 0.0;              // quiescent water depth H (m)
    Vec3 gravity{0.0, 0.0, -9.81};

    std::vector<double> sub_frac;    // K
    std::vector<double> sub_depth;   // K, normalized by H_sub
    std::vector<double> targets;     // K x 3, F / rho

    std::size_t K() const { return sub_frac.size(); }
    Vec3 target(std::size_t s) const { return {targets[3 * s], targets[3 * s + 1], targets[3 * s + 2]}; }
    Vec3 net_target() const;
};

bool operator==(const Sample& a, const Sample& b);

/// Water level in the body frame for a quiescent depth.
inline double water_level(const geometry::VehicleSpec& spec, double depth) { return spec.z_0 + depth; }

/// Default time cut and section count used by section_average.
inline constexpr double kDefaultTransientCut = 2.0;
inline constexpr int kDefaultSections = 20;

/// Drops steps with t <= t_cut, splits the rest into n_sections equal windows
/// and averages each. Requires a vehicle-frame record. Submergence arrays are
/// left empty; see fill_submergence.
std::vector<Sample> section_average(const CaseRecord& record, double t_cut = kDefaultTransientCut,
                                    int n_sections = kDefaultSections);

void fill_submergence(Sample& sample, const geometry::VehicleGeometry& geometry);

/// Patch permutation and in-place flags for one symmetry operation.
struct SymmetryMap {
    std::vector<std::size_t> partner;  // partner[s] == s for symmetry-plane patches
};

/// Throws DataError for a patch with neither a partner nor a symmetry-plane entry.
SymmetryMap mirror_map(const geometry::VehicleGeometry& geometry);
SymmetryMap reverse_map(const geometry::VehicleGeometry& geometry);

Sample mirror_lateral(const Sample& sample, const SymmetryMap& mirror);
Sample reverse_longitudinal(const Sample& sample, const SymmetryMap& reverse);
Sample mirror_lateral(const Sample& sample, const geometry::VehicleGeometry& geometry);
Sample reverse_longitudinal(const Sample& sample, const geometry::VehicleGeometry& geometry);

/// base, mirror, reverse, mirror+reverse for every sample (4x).
std::vector<Sample> augment(const std::vector<Sample>& base, const geometry::VehicleGeometry& geometry);

/// Global feature vector of a sample (12 values, or 9 without vehicle dimensions).
std::vector<double> sample_global_features(const Sample& sample, const geometry::VehicleSpec& spec,
                                           bool with_dims = true, const features::PhysicalConstants& k = {});

/// Full K x 15 surface tensor: static block from geometry, submergence from the
/// sample and projected area from the sample velocity.
features::SurfaceTensor sample_surface_features(const Sample& sample, const geometry::VehicleGeometry& geometry);

struct Split {
    std::vector<std::size_t> train;  // indices into the sample list
    std::vector<std::size_t> val;
};

/// Seeded split grouped by (vehicle, case_id); round(fraction * groups) go to train.
Split split_dataset(const std::vector<Sample>& samples, double fraction, std::uint64_t seed);

nlohmann::json to_json(const Sample& sample);
Sample sample_from_json(const nlohmann::json& j);

}  // namespace hydrosurr::dataset
