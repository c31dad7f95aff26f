#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/geometry/toy_vehicles.hpp"
#include "hydrosurr/sdf/distance.hpp"
#include "hydrosurr/sdf/grid.hpp"

using namespace hydrosurr;
using namespace hydrosurr::sdf;

namespace {

geometry::Mesh unit_cube() {
    const Vec3 v[8] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    geometry::Mesh m;
    m.vertices.assign(v, v + 8);
    m.faces = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
               {1, 2, 6}, {1, 6, 5}, {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
    return m;
}

// Exact signed distance to the unit cube.
double cube_sdf(const Vec3& p) {
    const Vec3 q{std::fabs(p.x - 0.5) - 0.5, std::fabs(p.y - 0.5) - 0.5, std::fabs(p.z - 0.5) - 0.5};
    const Vec3 o{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
    return norm(o) + std::min(std::max(q.x, std::max(q.y, q.z)), 0.0);
}

}  // namespace

TEST(PointTriangle, RegionsOfTheTriangle) {
    const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
    EXPECT_DOUBLE_EQ(point_triangle_distance_sq({0.2, 0.2, 0.5}, a, b, c), 0.25);  // face
    EXPECT_DOUBLE_EQ(point_triangle_distance_sq({-1, -1, 0}, a, b, c), 2.0);       // vertex a
    EXPECT_DOUBLE_EQ(point_triangle_distance_sq({0.5, -2, 0}, a, b, c), 4.0);      // edge ab
    EXPECT_NEAR(point_triangle_distance_sq({1, 1, 0}, a, b, c), 0.5, 1e-15);       // edge bc
    EXPECT_DOUBLE_EQ(point_triangle_distance_sq({3, 0, 0}, a, b, c), 4.0);         // vertex b
}

TEST(MeshDistance, CubeMatchesClosedForm) {
    const auto m = unit_cube();
    const MeshDistance d(m);
    Rng r(4);
    for (int i = 0; i < 500; ++i) {
        const Vec3 p{3 * uniform01(r) - 1, 3 * uniform01(r) - 1, 3 * uniform01(r) - 1};
        ASSERT_NEAR(d.signed_distance(p), cube_sdf(p), 1e-14) << p.x << " " << p.y << " " << p.z;
    }
}

TEST(MeshDistance, AxisAlignedRaysThroughEdgesStillSigned) {
    const MeshDistance d(unit_cube());
    // Rays from these points along +X/+Y/+Z hit edges or vertices exactly.
    EXPECT_LT(d.signed_distance({0.5, 0.5, 0.5}), 0.0);
    EXPECT_TRUE(d.inside({0.25, 0.5, 0.5}));
    EXPECT_FALSE(d.inside({-0.5, 0.0, 0.0}));
    EXPECT_FALSE(d.inside({-0.5, 1.0, 1.0}));
}

TEST(Grid, UnitCubeSpacing) {
    const auto g = build_grid(unit_cube(), 0.5);
    EXPECT_EQ(g.spacing, 0.03125);
    EXPECT_EQ(g.dims[0], 65u);
    EXPECT_EQ(g.dims[1], 65u);
    EXPECT_EQ(g.dims[2], 65u);
    EXPECT_EQ(g.bounds_min, (Vec3{-0.5, -0.5, -0.5}));
}

TEST(Grid, NodesHoldExactDistances) {
    const auto g = build_grid(unit_cube(), 0.5, 2);
    for (std::size_t i = 0; i < g.dims[0]; i += 7)
        for (std::size_t j = 0; j < g.dims[1]; j += 5)
            for (std::size_t k = 0; k < g.dims[2]; k += 3)
                ASSERT_NEAR(g.at(i, j, k), cube_sdf(g.node(i, j, k)), 1e-14);
}

TEST(Grid, ResultIndependentOfJobs) {
    const auto toy = geometry::mini_husky();
    const auto m = geometry::body_mesh(toy);
    const auto a = build_grid(m, 0.5, 1);
    const auto b = build_grid(m, 0.5, 3);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.near_mask, b.near_mask);
}

TEST(Grid, TrilinearReproducesNodesAndRejectsOutside) {
    const auto g = build_grid(unit_cube(), 0.5);
    EXPECT_DOUBLE_EQ(sample_trilinear(g, g.node(10, 20, 30)), g.at(10, 20, 30));
    // Trilinear interpolation is exact for the linear field inside the solid away from ridges.
    EXPECT_NEAR(sample_trilinear(g, {0.5, 0.5, 0.1}), -0.1, 1e-12);
    EXPECT_THROW(sample_trilinear(g, {5, 0, 0}), NumericError);
}

TEST(Grid, GradientPointsOutward) {
    const auto g = build_grid(unit_cube(), 0.5);
    const Vec3 n = sdf_gradient(g, {1.2, 0.5, 0.5});
    EXPECT_NEAR(n.x, 1.0, 1e-12);
    EXPECT_NEAR(n.y, 0.0, 1e-12);
    EXPECT_THROW(sdf_gradient(g, g.node(0, 0, 0)), NumericError);
}

TEST(Grid, SaveLoadRoundTripAndCorruption) {
    const auto g = build_grid(unit_cube(), 0.25);
    const auto dir = std::filesystem::temp_directory_path() / "hydrosurr_test_sdf";
    std::filesystem::create_directories(dir);
    save_grid(dir / "g.hsdf", g);
    const auto r = load_grid(dir / "g.hsdf");
    EXPECT_EQ(r.values, g.values);
    EXPECT_EQ(r.near_mask, g.near_mask);
    EXPECT_EQ(r.dims, g.dims);
    EXPECT_EQ(r.spacing, g.spacing);
    EXPECT_EQ(r.mesh_hash, g.mesh_hash);
    std::filesystem::resize_file(dir / "g.hsdf", 100);
    EXPECT_ANY_THROW(load_grid(dir / "g.hsdf"));
    {
        std::ofstream bad(dir / "bad.hsdf", std::ios::binary);
        bad << "NOPE0000000000000000";
    }
    EXPECT_THROW(load_grid(dir / "bad.hsdf"), DataError);
}

TEST(Grid, OpenMeshRejected) {
    auto m = unit_cube();
    m.faces.pop_back();
    EXPECT_THROW(build_grid(m), DataError);
}
