#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hydrosurr/core/vec3.hpp"

namespace hydrosurr::geometry {

using Face = std::array<std::uint32_t, 3>;

struct Triangle {
    Vec3 a, b, c;
};

/// Indexed triangle mesh. `frame` names the axis convention of `vertices`.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::string frame = "body";

    Triangle triangle(std::size_t f) const {
        const auto& i = faces[f];
        return {vertices[i[0]], vertices[i[1]], vertices[i[2]]};
    }
    double face_area(std::size_t f) const;
    /// Unit normal from the winding order; zero vector for degenerate faces.
    Vec3 face_normal(std::size_t f) const;
    Vec3 face_centroid(std::size_t f) const;
    double total_area() const;
    std::pair<Vec3, Vec3> bounds() const;
};

/// Undirected edges not shared by exactly two faces.
std::vector<std::pair<std::uint32_t, std::uint32_t>> boundary_edges(const Mesh& mesh);

/// Throws DataError on non-finite vertices, zero-area faces (naming the face
/// index) or non-manifold/open edges (listing them).
void validate_watertight(const Mesh& mesh);

/// Reads binary or ASCII STL (auto-detected). Throws IoError/DataError.
std::vector<Triangle> read_stl(const std::filesystem::path& path);

void write_stl_ascii(const std::filesystem::path& path, const Mesh& mesh, const std::string& solid_name);
void write_stl_binary(const std::filesystem::path& path, const Mesh& mesh);

/// Merges bit-identical vertices, preserving triangle order.
Mesh mesh_from_triangles(const std::vector<Triangle>& tris);

Mesh transformed(const Mesh& mesh, const RigidTransform& transform, std::string frame);

/// STL -> deduplicated mesh -> transform -> watertight validation.
Mesh load_mesh(const std::filesystem::path& path, const RigidTransform& transform);

/// CRC-32 over vertex coordinates and face indices.
std::uint32_t mesh_hash(const Mesh& mesh);

}  // namespace hydrosurr::geometry
