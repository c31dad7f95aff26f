#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/geometry/mesh.hpp"

namespace hydrosurr::geometry {

/// Semantic surface vocabulary; the enumerator order is the one-hot order.
enum class SurfaceType { bottom = 0, front = 1, rear = 2, side = 3, wheel = 4 };
inline constexpr int kSurfaceTypeCount = 5;

std::string_view to_string(SurfaceType type);
/// Throws DataError for names outside the vocabulary.
SurfaceType parse_surface_type(std::string_view name);

/// One record of the patch-label sidecar.
struct PatchLabel {
    std::string name;
    SurfaceType type = SurfaceType::side;
    std::vector<std::uint32_t> faces;
};

/// Sidecar text format, one record per line:
///   <name> <type> <face> <face> ...
/// Blank lines and lines starting with '#' are ignored.
std::vector<PatchLabel> parse_patch_labels(std::istream& in, const std::string& where);
std::vector<PatchLabel> read_patch_labels(const std::filesystem::path& path);
void write_patch_labels(const std::filesystem::path& path, const std::vector<PatchLabel>& labels);

struct SurfacePatch {
    std::string name;
    SurfaceType type = SurfaceType::side;
    std::vector<std::uint32_t> face_ids;
    Vec3 centroid{};
    Vec3 normal{};
    double area = 0.0;
    /// Set when the mean face normal nearly cancels (closed wheels) and +X was substituted.
    bool normal_fallback = false;

    std::vector<double> depth_samples;  // z of area-proportionate samples above ground
    std::vector<Vec3> sample_normals;   // local triangle normal per sample
    std::uint64_t sample_seed = 0;
};

inline constexpr double kNormalFallbackThreshold = 1e-6;

/// Per-patch descriptors: area-weighted centroid, normalized mean face normal, total area.
std::vector<SurfacePatch> decompose_patches(const Mesh& mesh, const std::vector<PatchLabel>& labels);

struct DepthSamples {
    std::vector<double> z;
    std::vector<Vec3> normals;
};

/// Draws `count` points with probability proportional to triangle area and keeps
/// those with z >= ground_z. Throws DataError when none survive.
DepthSamples sample_patch_depths(const SurfacePatch& patch, const Mesh& mesh, std::size_t count,
                                 double ground_z, std::uint64_t seed);

}  // namespace hydrosurr::geometry
