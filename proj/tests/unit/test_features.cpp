#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/features/features.hpp"
#include "hydrosurr/geometry/toy_vehicles.hpp"

using namespace hydrosurr;
using namespace hydrosurr::features;

TEST(Submergence, FullyDryAndFullyWet) {
    const std::vector<double> z{0.1, 0.2, 0.3};
    const auto dry = submergence_metrics(z, 0.0, 0.5);
    EXPECT_EQ(dry.sub_frac, 0.0);
    EXPECT_EQ(dry.sub_depth_norm, 0.0);
    const auto wet = submergence_metrics(z, 0.5, 0.5);
    EXPECT_EQ(wet.sub_frac, 1.0);
    EXPECT_NEAR(wet.sub_depth_norm, ((0.4 + 0.3 + 0.2) / 3) / 0.5, 1e-15);
}

TEST(Submergence, BoundaryCountsAsSubmerged) {
    const std::vector<double> z{0.0, 1.0};
    const auto m = submergence_metrics(z, 0.0, 1.0);
    EXPECT_EQ(m.sub_frac, 0.5);
    EXPECT_EQ(m.sub_depth_norm, 0.0);
}

TEST(Submergence, InvalidInputs) {
    const std::vector<double> none;
    EXPECT_THROW(submergence_metrics(none, 0.0, 1.0), DataError);
    const std::vector<double> z{0.0};
    EXPECT_THROW(submergence_metrics(z, 0.0, 0.0), ConfigError);
}

TEST(ProjectedArea, CosineAndZeroVelocity) {
    EXPECT_DOUBLE_EQ(projected_area({1, 0, 0}, 2.0, {3, 0, 0}), 2.0);
    EXPECT_DOUBLE_EQ(projected_area({-1, 0, 0}, 2.0, {3, 0, 0}), 2.0);
    EXPECT_NEAR(projected_area({1, 0, 0}, 2.0, {1, 1, 0}), 2.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(projected_area({1, 0, 0}, 2.0, {0, 0, 0}), 0.0);
}

TEST(GlobalFeatures, ValuesAndOrder) {
    const auto toy = geometry::mini_warthog();
    const Vec3 v{2.0, 0.5, 0.0};
    const auto g = global_features(v, 1000.0, 0.2, toy.spec);
    const double speed = std::sqrt(4.25);
    EXPECT_DOUBLE_EQ(g.speed, speed);
    EXPECT_DOUBLE_EQ(g.fr_L, speed / std::sqrt(9.81 * 1.52));
    EXPECT_DOUBLE_EQ(g.fr_h, speed / std::sqrt(9.81 * 0.2));
    EXPECT_NEAR(g.re_norm, 1000.0 * speed * 1.52 / 1.002e-3 * 1e-6, 1e-12);
    const auto full = g.to_vector(true);
    ASSERT_EQ(full.size(), kGlobalDim);
    EXPECT_EQ(full[0], g.speed);
    EXPECT_EQ(full[3], 2.0);
    EXPECT_EQ(full[9], 1.52);
    EXPECT_EQ(full[11], 0.50);
    const auto nod = g.to_vector(false);
    ASSERT_EQ(nod.size(), kGlobalDimNoDims);
    EXPECT_TRUE(std::equal(nod.begin(), nod.end(), full.begin()));
}

TEST(GlobalFeatures, DepthFroudeClipped) {
    const auto toy = geometry::mini_warthog();
    EXPECT_EQ(global_features({5, 0, 0}, 1000.0, 1e-6, toy.spec).fr_h, 10.0);
    EXPECT_EQ(global_features({5, 0, 0}, 1000.0, 0.0, toy.spec).fr_h, 10.0);
}

TEST(SurfaceFeatures, ColumnsFollowSchema) {
    const auto toy = geometry::mini_husky();
    const auto g = geometry::prepare_toy(toy);
    const Vec3 v{1.0, 0.0, 0.0};
    const double zw = toy.spec.z_0 + 0.05;
    const auto S = assemble_surface_features(g.patches, toy.spec, zw, v);
    ASSERT_EQ(S.K, 13u);
    ASSERT_EQ(S.data.size(), 13u * kSurfaceDim);
    for (std::size_t s = 0; s < S.K; ++s) {
        const auto& p = g.patches[s];
        double hot = 0;
        for (std::size_t c = 0; c < 5; ++c) hot += S(s, kOneHot + c);
        EXPECT_EQ(hot, 1.0);
        EXPECT_EQ(S(s, kOneHot + static_cast<std::size_t>(p.type)), 1.0);
        EXPECT_DOUBLE_EQ(S(s, kCentroid), p.centroid.x / toy.spec.L_ref);
        EXPECT_DOUBLE_EQ(S(s, kCentroid + 2), p.centroid.z / toy.spec.H_ref);
        EXPECT_DOUBLE_EQ(S(s, kArea), p.area / (toy.spec.L_ref * toy.spec.H_ref));
        const auto m = submergence_metrics(p.depth_samples, zw, toy.spec.H_sub);
        EXPECT_EQ(S(s, kSubFrac), m.sub_frac);
        EXPECT_EQ(S(s, kSubDepth), m.sub_depth_norm);
        EXPECT_DOUBLE_EQ(S(s, kProjArea), projected_area(p.normal, p.area, v) / (toy.spec.L_ref * toy.spec.H_ref));
    }
    // Hull starts 0.08 m above ground, so at 0.05 m only the wheels wet.
    EXPECT_EQ(S(g.patch_index("bottom"), kSubFrac), 0.0);
    EXPECT_EQ(S(g.patch_index("front_lower"), kSubFrac), 0.0);
    EXPECT_GT(S(g.patch_index("wheel_rear_left"), kSubFrac), 0.0);
}

TEST(FeatureNames, CountsMatchDims) {
    EXPECT_EQ(global_feature_names().size(), kGlobalDim);
    EXPECT_EQ(surface_feature_names().size(), kSurfaceDim);
}
