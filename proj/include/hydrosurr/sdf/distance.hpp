#pragma once

#include <cstdint>
#include <vector>

#include "hydrosurr/core/vec3.hpp"
#include "hydrosurr/geometry/mesh.hpp"

namespace hydrosurr::sdf {

/// Squared distance from p to the closed triangle abc.
double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Result of casting one ray against the mesh.
struct RayParity {
    bool valid = false;  // false when the ray grazed an edge, vertex or coplanar face
    bool inside = false;
};

/// BVH over a triangle mesh for exact unsigned distance and ray-parity queries.
/// Immutable after construction; queries are safe from any number of threads.
class MeshDistance {
public:
    explicit MeshDistance(const geometry::Mesh& mesh);

    double unsigned_distance(const Vec3& p) const;
    RayParity cast_parity(const Vec3& origin, const Vec3& dir) const;
    /// Majority vote over +X, +Y, +Z rays; a degenerate axis ray is replaced by
    /// a perturbed direction.
    bool inside(const Vec3& p) const;
    /// Negative inside, positive outside, 0 on the surface.
    double signed_distance(const Vec3& p) const;

    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Vec3 lo, hi;
        std::uint32_t first = 0;  // leaf: first triangle slot; inner: right child
        std::uint32_t count = 0;  // 0 for inner nodes (left child is index + 1)
    };

    std::uint32_t build(std::uint32_t first, std::uint32_t count);

    std::vector<geometry::Triangle> tris_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    double scale_ = 1.0;  // bounding-box diagonal, sets degeneracy tolerances
};

/// One-shot convenience (builds the BVH per call).
double signed_distance(const geometry::Mesh& mesh, const Vec3& point);

}  // namespace hydrosurr::sdf
