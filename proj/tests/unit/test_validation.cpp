#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/geometry/toy_vehicles.hpp"
#include "hydrosurr/validation/fits.hpp"
#include "hydrosurr/validation/kinematics.hpp"
#include "hydrosurr/validation/savgol.hpp"
#include "hydrosurr/validation/sections.hpp"
#include "hydrosurr/validation/suite.hpp"
#include "hydrosurr/validation/synthetic.hpp"
#include "hydrosurr/validation/trace.hpp"

using namespace hydrosurr;
using namespace hydrosurr::validation;

namespace {

TrialTrace rotating_body(double rate, double duration, const Vec3& omega, const Vec3& v0) {
    TrialTrace tr;
    tr.id = "spin";
    const auto n = static_cast<std::size_t>(duration * rate) + 1;
    const double w = norm(omega);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        tr.t.push_back(t);
        tr.position.push_back(v0 * t);
        tr.orientation.push_back(Quat::from_axis_angle(omega, w * t));
    }
    return tr;
}

}  // namespace

TEST(Savgol, ExactOnQuadraticsEverywhere) {
    const double dt = 0.01;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        const double t = i * dt;
        y.push_back(3.0 - 2.0 * t + 5.0 * t * t);
    }
    const auto d = savgol_derivative(y, dt);
    const auto s = savgol(y, 9, 2, 0, dt);
    for (int i = 0; i < 40; ++i) {
        const double t = i * dt;
        EXPECT_NEAR(d[static_cast<std::size_t>(i)], -2.0 + 10.0 * t, 1e-11) << i;
        EXPECT_NEAR(s[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)], 1e-12) << i;
    }
}

TEST(Savgol, InvalidArguments) {
    const std::vector<double> y(20, 1.0), short_y(2, 1.0);
    EXPECT_THROW(savgol(y, 8, 2, 1, 0.01), ConfigError);
    EXPECT_THROW(savgol(y, 9, 9, 1, 0.01), ConfigError);
    EXPECT_THROW(savgol(short_y, 9, 2, 1, 0.01), DataError);
}

TEST(Kinematics, AngularVelocityOfConstantSpin) {
    const Vec3 omega{0.1, -0.4, 0.9};
    const double w = norm(omega), t = 0.7;
    const Quat q = Quat::from_axis_angle(omega, w * t);
    // d/dt q = 0.5 * (0, omega) * q for a world-frame rate.
    const Quat qdot = Quat{0.0, 0.5 * omega.x, 0.5 * omega.y, 0.5 * omega.z} * q;
    const Vec3 r = angular_velocity(q, qdot);
    EXPECT_NEAR(r.x, omega.x, 1e-15);
    EXPECT_NEAR(r.y, omega.y, 1e-15);
    EXPECT_NEAR(r.z, omega.z, 1e-15);
}

TEST(Kinematics, ComCorrectionOnRotatingBody) {
    const auto spec = geometry::mini_warthog().spec;
    const Vec3 omega{0.0, 0.0, 0.5}, v0{0.3, 0.0, 0.0};
    const auto tr = rotating_body(120.0, 3.0, omega, v0);
    const auto k = compute_kinematics(tr, spec);
    for (std::size_t i = 20; i + 20 < k.t.size(); ++i) {
        const Quat q = Quat::from_axis_angle(omega, norm(omega) * k.t[i]);
        const Vec3 truth = v0 + cross(omega, q.rotate(spec.r_cp));
        ASSERT_NEAR(k.v_world[i].x, truth.x, 1e-4);
        ASSERT_NEAR(k.v_world[i].y, truth.y, 1e-4);
        const Vec3 vb = q.to_matrix().transposed() * truth;
        ASSERT_NEAR(k.v_body[i].x, vb.x, 1e-4);
        ASSERT_NEAR(k.omega_body[i].z, 0.5, 1e-4);
    }
}

TEST(Kinematics, RequiresUniformSpacing) {
    auto tr = rotating_body(100.0, 1.0, {0, 0, 0.2}, {1, 0, 0});
    tr.t[5] += 0.004;
    EXPECT_THROW(compute_kinematics(tr, geometry::mini_warthog().spec), DataError);
}

TEST(Kinematics, WaterLevelUsesPitchedOffset) {
    auto spec = geometry::mini_warthog().spec;
    TrialTrace tr;
    tr.floor_z = 0.0;
    tr.t = {0.0};
    const double pitch = 0.1;
    tr.orientation = {Quat::from_axis_angle({0, 1, 0}, pitch)};
    tr.position = {{0, 0, 0.8}};
    const auto zw = water_level_series(tr, 0.2, spec);
    const Vec3 origin = tr.position[0] + tr.orientation[0].rotate(spec.marker_to_origin);
    EXPECT_DOUBLE_EQ(zw[0], 0.2 - origin.z);
}

TEST(Trace, ResampleIsIdempotentOnUniformInput) {
    const auto tr = rotating_body(111.0, 2.0, {0, 0, 0.3}, {1, 0, 0});
    const auto r = resample_uniform(tr, 111.0);
    ASSERT_EQ(r.size(), tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        EXPECT_EQ(r.position[i], tr.position[i]);
        EXPECT_NEAR(std::abs(dot(r.orientation[i], tr.orientation[i])), 1.0, 1e-15);
    }
}

TEST(Trace, ResampleRejectsGapsAndLowRate) {
    auto tr = rotating_body(120.0, 2.0, {0, 0, 0.3}, {1, 0, 0});
    auto gap = tr;
    gap.t.erase(gap.t.begin() + 50, gap.t.begin() + 60);
    gap.position.erase(gap.position.begin() + 50, gap.position.begin() + 60);
    gap.orientation.erase(gap.orientation.begin() + 50, gap.orientation.begin() + 60);
    EXPECT_THROW(resample_uniform(gap, 111.0), DataError);
    EXPECT_ANY_THROW(resample_uniform(rotating_body(50.0, 2.0, {0, 0, 0.3}, {1, 0, 0}), 111.0));
}

TEST(Trace, HemisphereAlignment) {
    std::vector<Quat> q{{1, 0, 0, 0}, {-0.99, -0.1, 0, 0}, {0.98, 0.2, 0, 0}};
    align_hemispheres(q);
    EXPECT_GT(q[1].w, 0.0);
    EXPECT_GT(q[2].w, 0.0);
}

TEST(Trace, CsvRoundTrip) {
    auto tr = rotating_body(120.0, 0.5, {0, 0.2, 0.3}, {1, 0.1, 0});
    tr.depth = 0.2032;
    tr.direction = Direction::ramp_out;
    tr.command_speed = 1.4;
    tr.floor_z = -0.3;
    const auto dir = std::filesystem::temp_directory_path() / "hydrosurr_test_trace";
    std::filesystem::create_directories(dir);
    write_trace_csv(dir / "t.csv", tr);
    const auto r = read_trace_csv(dir / "t.csv");
    EXPECT_EQ(r.id, tr.id);
    EXPECT_EQ(r.depth, tr.depth);
    EXPECT_EQ(r.direction, Direction::ramp_out);
    EXPECT_EQ(r.floor_z, tr.floor_z);
    EXPECT_EQ(r.t, tr.t);
    EXPECT_EQ(r.position, tr.position);
    EXPECT_EQ(parse_direction("ramp-in"), Direction::ramp_in);
    EXPECT_THROW(parse_direction("sideways"), DataError);
}

TEST(Sections, RunsAndThresholds) {
    std::vector<double> t, vz;
    for (int i = 0; i < 200; ++i) {
        t.push_back(i * 0.01);
        vz.push_back(i >= 50 && i < 120 ? 0.0 : 0.2);
    }
    const auto runs = planar_runs(t, vz);
    ASSERT_EQ(runs.size(), 1u);
    EXPECT_EQ(runs[0].first, 50u);
    EXPECT_EQ(runs[0].second, 120u);
    const std::vector<double> fast(200, 0.1);
    EXPECT_TRUE(planar_runs(t, fast).empty());
    std::vector<double> brief(200, 0.2);
    for (int i = 0; i < 15; ++i) brief[static_cast<std::size_t>(100 + i)] = 0.0;
    EXPECT_TRUE(planar_runs(t, brief).empty());
}

TEST(Sections, SyntheticFlatSegmentIsolated) {
    const auto spec = geometry::mini_warthog().spec;
    SyntheticTrial cfg;
    cfg.speed = 1.2;
    cfg.depth = 0.2;
    SyntheticTruth truth;
    const auto tr = synthetic_trial(cfg, spec, &truth);
    const auto u = resample_uniform(tr, 120.0);
    const auto k = compute_kinematics(u, spec);
    const auto secs = extract_planar_sections(k);
    ASSERT_FALSE(secs.empty());
    const auto& longest = *std::max_element(secs.begin(), secs.end(), [](const auto& a, const auto& b) {
        return a.duration < b.duration;
    });
    EXPECT_GE(k.t[longest.begin], truth.flat_t0 - 0.1);
    EXPECT_LE(k.t[longest.end - 1], truth.flat_t1 + 0.1);
    EXPECT_NEAR(longest.mean_speed, 1.2, 1e-3);
}

TEST(Fits, OriginAndLinear) {
    const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, y2{3, 5, 7, 9};
    const auto o = fit_origin(x, y);
    EXPECT_DOUBLE_EQ(o.coef, 2.0);
    EXPECT_DOUBLE_EQ(o.r2, 1.0);
    const auto l = fit_linear(x, y2);
    EXPECT_NEAR(l.coef, 2.0, 1e-14);
    EXPECT_NEAR(l.intercept, 1.0, 1e-14);
    const std::vector<double> zeros(4, 0.0);
    EXPECT_THROW(fit_origin(zeros, y), NumericError);
    // Centered R^2 of an origin fit can be negative for data with an offset.
    const std::vector<double> flat{10, 10.5, 10, 10.5};
    EXPECT_LT(fit_origin(x, flat).r2, 0.0);
}

TEST(Fits, PhysicalCd) {
    EXPECT_NEAR(physical_cd(49.2, 1000.0, 0.70, 0.1016), 49.2 / (0.5 * 1000.0 * 0.70 * 0.1016), 1e-15);
    EXPECT_THROW(physical_cd(49.2, 1000.0, 0.70, 0.0), NumericError);
}

TEST(Fits, MatchedPairsExactForQuadraticData) {
    std::vector<TrialPoint> pts;
    for (double d : {0.1, 0.2})
        for (double v : {0.8, 1.2, 1.6}) pts.push_back({"p", d, v, v * v, (d == 0.1 ? 40.0 : 60.0) * v * v, 0.0});
    const auto pairs = matched_pair_check(pts, 0.3, 0.6);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].n_pairs, 3u);
    EXPECT_NEAR(pairs[0].mean_ratio, 1.5, 1e-14);
    EXPECT_NEAR(pairs[0].fit_ratio, 1.5, 1e-14);
    EXPECT_NEAR(pairs[0].deviation_pct, 0.0, 1e-10);
}

TEST(Fits, VerticalMonotonicity) {
    std::vector<TrialPoint> pts;
    const double f0[3] = {280, 543, 784};
    const double depths[3] = {0.1016, 0.2032, 0.254};
    for (int i = 0; i < 3; ++i)
        for (double v : {0.8, 1.2, 1.6, 2.0}) pts.push_back({"p", depths[i], v, v * v, 0, f0[i] - 10.0 * v * v});
    const auto r = fit_vertical(pts);
    ASSERT_EQ(r.per_depth.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.per_depth[static_cast<std::size_t>(i)].intercept, f0[i], 1e-9);
    EXPECT_TRUE(r.monotonic_f0);
    EXPECT_TRUE(r.monotonic_mean_fz);
    EXPECT_NEAR(r.f0_vs_depth.r2, 0.97304, 5e-6);
}

TEST(SuiteConfig, JsonRoundTrip) {
    SuiteConfig c;
    c.speed_tol = 0.25;
    c.precision = model::Precision::f32;
    const auto r = suite_config_from_json(to_json(c));
    EXPECT_EQ(r.speed_tol, 0.25);
    EXPECT_EQ(r.precision, model::Precision::f32);
}
