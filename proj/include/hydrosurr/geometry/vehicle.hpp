#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/geometry/mesh.hpp"
#include "hydrosurr/geometry/patches.hpp"

namespace hydrosurr::geometry {

/// Solver frame (Z flow-aligned, Y up) to body frame (X forward, Y left, Z up).
Mat3 solver_to_body_rotation();

using NamePair = std::pair<std::string, std::string>;

struct VehicleSpec {
    std::string name;
    std::size_t patch_count = 0;  // K
    double L_ref = 0.0;
    double W_ref = 0.0;
    double H_ref = 0.0;
    double H_sub = 0.366;  // characteristic submergence scale (m)
    double z_0 = 0.0;      // body-frame height of the quiescent-water datum (ground plane)
    std::optional<double> ground_z;  // depth-sample filter level; default: lowest wheel vertex

    std::vector<NamePair> mirror_pairs;  // (left, right)
    std::vector<NamePair> swap_pairs;    // (front, rear)
    std::vector<std::string> symmetry_plane_patches;
    /// Coarsened tessellation used by the merged-patch ablation: new name -> members.
    std::vector<std::pair<std::string, std::vector<std::string>>> merge_groups;

    std::filesystem::path mesh_path;
    std::filesystem::path labels_path;
    RigidTransform load_transform;
    std::size_t samples_per_patch = 2048;
    std::uint64_t sample_seed = 20240611;

    /// Marker-origin to COM offset, body frame (m).
    Vec3 r_cp{0.2, 0.0, -0.63};
    /// Marker-origin to body-origin offset, body frame (m).
    Vec3 marker_to_origin{0.2, 0.0, -0.63};
};

nlohmann::json to_json(const VehicleSpec& spec);
/// Relative mesh/label paths are resolved against `base_dir`.
VehicleSpec vehicle_spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
VehicleSpec read_vehicle_spec(const std::filesystem::path& path);
void write_vehicle_spec(const std::filesystem::path& path, const VehicleSpec& spec);

/// Prepared per-vehicle geometry: labeled patches with their depth samples.
struct VehicleGeometry {
    VehicleSpec spec;
    std::vector<SurfacePatch> patches;
    std::uint32_t mesh_hash = 0;
    double ground_z = 0.0;

    std::size_t patch_index(const std::string& name) const;  // throws DataError
    bool has_patch(const std::string& name) const;
    std::size_t K() const { return patches.size(); }
};

/// Checks K, pair references and H_sub against the decomposed patches.
void validate_spec(const VehicleSpec& spec, const std::vector<SurfacePatch>& patches);

VehicleGeometry prepare_geometry(const VehicleSpec& spec, const Mesh& mesh,
                                 const std::vector<PatchLabel>& labels);

/// Patch descriptor record with fields name/type/centroid/normal/area (+ samples when asked).
nlohmann::json patch_to_json(const SurfacePatch& patch, bool with_samples);
SurfacePatch patch_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VehicleGeometry& geometry);
VehicleGeometry vehicle_geometry_from_json(const nlohmann::json& j);
VehicleGeometry read_vehicle_geometry(const std::filesystem::path& path);
void write_vehicle_geometry(const std::filesystem::path& path, const VehicleGeometry& geometry);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace hydrosurr::geometry
