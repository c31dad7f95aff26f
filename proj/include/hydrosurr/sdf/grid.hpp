#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/geometry/mesh.hpp"

namespace hydrosurr::sdf {

inline constexpr int kGridDivisions = 64;
inline constexpr double kDefaultMargin = 0.5;

/// Regular grid of signed distances. Node (i, j, k) sits at
/// bounds_min + (i, j, k) * spacing and is stored at values[(i * ny + j) * nz + k].
struct SdfGrid {
    Vec3 bounds_min{};
    Vec3 bounds_max{};  // expanded bounding box; the last node may stop short of it
    double spacing = 0.0;
    double margin = 0.0;
    std::array<std::uint32_t, 3> dims{};
    std::vector<double> values;
    std::vector<std::uint8_t> near_mask;  // |value| < 2 * spacing; stored, not consumed
    std::uint32_t mesh_hash = 0;

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * dims[1] + j) * dims[2] + k;
    }
    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const {
        return bounds_min + Vec3{static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)} * spacing;
    }
    double at(std::size_t i, std::size_t j, std::size_t k) const { return values[index(i, j, k)]; }
    std::size_t size() const { return values.size(); }
};

/// Spacing = largest expanded extent / 64; nodes per axis = floor(extent / spacing) + 1.
/// Every node holds the exact signed distance. Throws DataError if the mesh is not watertight.
SdfGrid build_grid(const geometry::Mesh& mesh, double margin = kDefaultMargin, unsigned jobs = 1);

/// Trilinear interpolation; throws NumericError outside the node lattice.
double sample_trilinear(const SdfGrid& grid, const Vec3& p);

/// Central difference (step = spacing) of the trilinear field. Requires a
/// one-cell margin to the lattice boundary, else NumericError. Not unit length
/// near ridges of the distance field.
Vec3 sdf_gradient(const SdfGrid& grid, const Vec3& p);

/// Little-endian binary layout (see docs/file_formats.md):
///   "HSDF" u32 version u32 0x01020304 u32 dims[3] f64 bounds_min[3] f64 bounds_max[3]
///   f64 spacing f64 margin u32 mesh_hash u64 count f64 values[count] u8 near_mask[count]
void save_grid(const std::filesystem::path& path, const SdfGrid& grid);
SdfGrid load_grid(const std::filesystem::path& path);

}  // namespace hydrosurr::sdf
