#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/geometry/mesh.hpp"
#include "hydrosurr/geometry/patches.hpp"
#include "hydrosurr/geometry/toy_vehicles.hpp"
#include "hydrosurr/geometry/vehicle.hpp"

using namespace hydrosurr;
using namespace hydrosurr::geometry;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("hydrosurr_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

Mesh unit_cube() {
    const Vec3 v[8] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    Mesh m;
    m.vertices.assign(v, v + 8);
    m.faces = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
               {1, 2, 6}, {1, 6, 5}, {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
    return m;
}

}  // namespace

TEST(Frames, SolverToBodyRotation) {
    const Mat3 r = solver_to_body_rotation();
    // Flow axis (solver +Z) points aft, solver up (+Y) becomes body up.
    EXPECT_EQ(r * (Vec3{0, 0, 1}), (Vec3{-1, 0, 0}));
    EXPECT_EQ(r * (Vec3{0, 1, 0}), (Vec3{0, 0, 1}));
    EXPECT_DOUBLE_EQ(r.determinant(), 1.0);
}

TEST(Mesh, CubeAreaNormalsAndWatertight) {
    const Mesh m = unit_cube();
    EXPECT_DOUBLE_EQ(m.total_area(), 6.0);
    EXPECT_EQ(m.face_normal(0), (Vec3{0, 0, -1}));
    EXPECT_TRUE(boundary_edges(m).empty());
    EXPECT_NO_THROW(validate_watertight(m));
}

TEST(Mesh, OpenMeshRejected) {
    Mesh m = unit_cube();
    m.faces.pop_back();
    EXPECT_FALSE(boundary_edges(m).empty());
    EXPECT_THROW(validate_watertight(m), DataError);
}

TEST(Mesh, DegenerateFaceNamed) {
    Mesh m = unit_cube();
    m.faces.push_back({0, 0, 1});
    try {
        validate_watertight(m);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("12"), std::string::npos) << e.what();
    }
}

TEST(Stl, BinaryAndAsciiRoundTrip) {
    const auto dir = temp_dir("stl");
    const Mesh m = unit_cube();
    write_stl_binary(dir / "b.stl", m);
    write_stl_ascii(dir / "a.stl", m, "cube");
    for (const auto* name : {"a.stl", "b.stl"}) {
        const Mesh r = mesh_from_triangles(read_stl(dir / name));
        EXPECT_EQ(r.faces.size(), m.faces.size());
        EXPECT_EQ(r.vertices.size(), 8u);
        EXPECT_DOUBLE_EQ(r.total_area(), 6.0);
        EXPECT_NO_THROW(validate_watertight(r));
    }
}

TEST(Stl, MissingFileIsIoError) {
    EXPECT_THROW(read_stl("/nonexistent/none.stl"), IoError);
}

TEST(Labels, ParseSkipsCommentsAndRejectsUnknownType) {
    std::istringstream ok("# header\n\nbottom bottom 0 1\nfront_lower front 2 3\n");
    const auto labels = parse_patch_labels(ok, "test");
    ASSERT_EQ(labels.size(), 2u);
    EXPECT_EQ(labels[1].type, SurfaceType::front);
    EXPECT_EQ(labels[1].faces, (std::vector<std::uint32_t>{2, 3}));
    std::istringstream bad("roof canopy 0\n");
    EXPECT_THROW(parse_patch_labels(bad, "test"), DataError);
}

TEST(Patches, CubeFaceDescriptors) {
    const Mesh m = unit_cube();
    std::vector<PatchLabel> labels{{"bottom", SurfaceType::bottom, {0, 1}}, {"front", SurfaceType::front, {6, 7}}};
    const auto patches = decompose_patches(m, labels);
    ASSERT_EQ(patches.size(), 2u);
    EXPECT_DOUBLE_EQ(patches[0].area, 1.0);
    EXPECT_NEAR(patches[0].centroid.x, 0.5, 1e-15);
    EXPECT_NEAR(patches[0].centroid.z, 0.0, 1e-15);
    EXPECT_EQ(patches[0].normal, (Vec3{0, 0, -1}));
    EXPECT_EQ(patches[1].normal, (Vec3{1, 0, 0}));
}

TEST(Patches, ClosedWheelFallsBackToPlusX) {
    const auto toy = mini_husky();
    const auto g = prepare_toy(toy);
    const auto& wheel = g.patches[g.patch_index("wheel_front_left")];
    EXPECT_TRUE(wheel.normal_fallback);
    EXPECT_EQ(wheel.normal, (Vec3{1, 0, 0}));
}

TEST(Patches, DepthSamplesAreDeterministicAndAboveGround) {
    const auto toy = mini_warthog();
    const Mesh m = body_mesh(toy);
    const auto patches = decompose_patches(m, toy.labels);
    const auto a = sample_patch_depths(patches[0], m, 512, -1.0, 99);
    const auto b = sample_patch_depths(patches[0], m, 512, -1.0, 99);
    EXPECT_EQ(a.z, b.z);
    const auto& wheel = patches[6];
    const double ground = -0.15;
    const auto w = sample_patch_depths(wheel, m, 512, ground, 5);
    EXPECT_LT(w.z.size(), 512u);
    for (double z : w.z) EXPECT_GE(z, ground);
}

TEST(ToyVehicles, PatchCountsAndWatertight) {
    for (const auto& [name, k] : {std::pair{"mini-husky", 13u}, std::pair{"mini-warthog", 10u}}) {
        const auto toy = toy_vehicle(name);
        const auto g = prepare_toy(toy);
        EXPECT_EQ(g.K(), k) << name;
        EXPECT_EQ(toy.spec.patch_count, k);
        for (const auto& p : g.patches) {
            EXPECT_GT(p.area, 0.0);
            EXPECT_FALSE(p.depth_samples.empty());
        }
        // Body origin at the bounding-box center: extents are symmetric.
        const auto [lo, hi] = body_mesh(toy).bounds();
        EXPECT_NEAR(lo.x + hi.x, 0.0, 1e-12);
        EXPECT_NEAR(lo.z + hi.z, 0.0, 1e-12);
        EXPECT_NEAR(lo.z, toy.spec.z_0, 1e-12);
    }
}

TEST(ToyVehicles, UnknownNameIsConfigError) {
    EXPECT_THROW(toy_vehicle("tank"), ConfigError);
}

TEST(VehicleSpec, JsonRoundTripAndDiskLoad) {
    const auto dir = temp_dir("spec");
    const auto toy = mini_husky();
    const auto path = write_toy_vehicle(dir, toy);
    const auto spec = read_vehicle_spec(path);
    EXPECT_EQ(spec.name, "mini-husky");
    EXPECT_EQ(spec.patch_count, 13u);
    EXPECT_DOUBLE_EQ(spec.H_sub, 0.366);
    EXPECT_EQ(spec.mirror_pairs, toy.spec.mirror_pairs);
    const Mesh m = load_mesh(spec.mesh_path, spec.load_transform);
    const auto g = prepare_geometry(spec, m, read_patch_labels(spec.labels_path));
    const auto ref = prepare_toy(toy);
    // Binary STL stores float32, so the disk mesh matches the in-memory one to single precision.
    ASSERT_EQ(g.K(), ref.K());
    for (std::size_t s = 0; s < g.K(); ++s) {
        EXPECT_EQ(g.patches[s].name, ref.patches[s].name);
        EXPECT_NEAR(g.patches[s].area, ref.patches[s].area, 1e-6);
        EXPECT_EQ(g.patches[s].depth_samples.size(), ref.patches[s].depth_samples.size());
    }
    const auto again = prepare_geometry(spec, load_mesh(spec.mesh_path, spec.load_transform),
                                        read_patch_labels(spec.labels_path));
    EXPECT_EQ(again.mesh_hash, g.mesh_hash);
}

TEST(VehicleSpec, WrongPatchCountRejected) {
    auto toy = mini_warthog();
    toy.spec.patch_count = 11;
    EXPECT_THROW(prepare_toy(toy), DataError);
}

TEST(VehicleSpec, UnknownPairNameRejected) {
    auto toy = mini_warthog();
    toy.spec.mirror_pairs.push_back({"fin_left", "fin_right"});
    EXPECT_THROW(prepare_toy(toy), DataError);
}

TEST(VehicleGeometry, JsonRoundTripPreservesSamples) {
    const auto g = prepare_toy(mini_warthog());
    const auto dir = temp_dir("geom");
    write_vehicle_geometry(dir / "g.json", g);
    const auto r = read_vehicle_geometry(dir / "g.json");
    EXPECT_EQ(r.K(), g.K());
    EXPECT_EQ(r.mesh_hash, g.mesh_hash);
    for (std::size_t s = 0; s < g.K(); ++s) {
        EXPECT_EQ(r.patches[s].depth_samples, g.patches[s].depth_samples);
        EXPECT_EQ(r.patches[s].normal, g.patches[s].normal);
        EXPECT_EQ(r.patches[s].area, g.patches[s].area);
    }
}
