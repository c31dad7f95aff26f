#include <gtest/gtest.h>
#include <zlib.h>

#include <atomic>
#include <numeric>
#include <string>
#include <vector>

#include "hydrosurr/core/checksum.hpp"
#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/parallel.hpp"
#include "hydrosurr/core/quat.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/core/vec3.hpp"

using namespace hydrosurr;

TEST(Vec3, CrossIsOrthogonalAndRightHanded) {
    const Vec3 x{1, 0, 0}, y{0, 1, 0};
    EXPECT_EQ(cross(x, y), (Vec3{0, 0, 1}));
    const Vec3 a{0.3, -1.2, 2.5}, b{-0.7, 0.4, 1.1};
    EXPECT_NEAR(dot(cross(a, b), a), 0.0, 1e-15);
    EXPECT_NEAR(dot(cross(a, b), b), 0.0, 1e-15);
}

TEST(Mat3, RotationsAreOrthonormal) {
    const Mat3 r = Mat3::rotation_z(0.4) * Mat3::rotation_y(-1.1) * Mat3::rotation_x(2.0);
    const Mat3 i = r * r.transposed();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) EXPECT_NEAR(i(a, b), a == b ? 1.0 : 0.0, 1e-15);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-15);
}

TEST(Quat, MatrixAgreesWithAxisAngle) {
    const Quat q = Quat::from_axis_angle({0, 0, 2}, 0.5);
    const Mat3 r = q.to_matrix(), rz = Mat3::rotation_z(0.5);
    for (int k = 0; k < 9; ++k) EXPECT_NEAR(r.m[static_cast<std::size_t>(k)], rz.m[static_cast<std::size_t>(k)], 1e-15);
}

TEST(Quat, ProductComposesRotations) {
    const Quat a = Quat::from_axis_angle({1, 0, 0}, 0.7), b = Quat::from_axis_angle({0, 1, 1}, -1.3);
    const Vec3 p{0.2, -0.5, 1.7};
    const Vec3 lhs = (a * b).rotate(p), rhs = a.rotate(b.rotate(p));
    EXPECT_NEAR(lhs.x, rhs.x, 1e-14);
    EXPECT_NEAR(lhs.y, rhs.y, 1e-14);
    EXPECT_NEAR(lhs.z, rhs.z, 1e-14);
}

TEST(Quat, SlerpEndpointsAndShortestArc) {
    const Quat a = Quat::from_axis_angle({0, 0, 1}, 0.2), b = Quat::from_axis_angle({0, 0, 1}, 1.0);
    const Quat mid = slerp(a, b, 0.5), ref = Quat::from_axis_angle({0, 0, 1}, 0.6);
    EXPECT_NEAR(std::abs(dot(mid, ref)), 1.0, 1e-14);
    const Quat nb{-b.w, -b.x, -b.y, -b.z};
    EXPECT_NEAR(std::abs(dot(slerp(a, nb, 0.5), ref)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(dot(slerp(a, b, 0.0), a)), 1.0, 1e-15);
}

TEST(Quat, PitchOfRotationAboutY) {
    EXPECT_NEAR(Quat::from_axis_angle({0, 1, 0}, 0.3).pitch(), 0.3, 1e-15);
}

TEST(Rng, DerivedStreamsAreDistinctAndStable) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
    Rng a(derive_seed(5, 3)), b(derive_seed(5, 3));
    for (int i = 0; i < 100; ++i) EXPECT_EQ(uniform01(a), uniform01(b));
}

TEST(Rng, Uniform01InUnitInterval) {
    Rng r(11);
    double lo = 1, hi = 0, sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform01(r);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Rng, StandardNormalMoments) {
    Rng r(3);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = standard_normal(r);
        s += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, ShuffleIsPermutation) {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    Rng r(9);
    shuffle(v.begin(), v.end(), r);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(Checksum, MatchesZlib) {
    const std::string text = "per-surface hydrodynamic forces";
    const auto ref = ::crc32(0L, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size()));
    EXPECT_EQ(crc32(std::string_view(text)), static_cast<std::uint32_t>(ref));
    const auto first = crc32(std::string_view(text).substr(0, 10));
    EXPECT_EQ(crc32(std::string_view(text).substr(10), first), static_cast<std::uint32_t>(ref));
}

TEST(Parallel, ResultsIndependentOfJobs) {
    std::vector<double> one(1000), four(1000);
    parallel_for(1000, 1, [&](std::size_t i) { one[i] = std::sin(static_cast<double>(i)); });
    parallel_for(1000, 4, [&](std::size_t i) { four[i] = std::sin(static_cast<double>(i)); });
    EXPECT_EQ(one, four);
}

TEST(Parallel, PropagatesExceptions) {
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t i) {
                                  if (i == 7) throw DataError("boom");
                              }),
                 DataError);
}

TEST(Error, KindsAreDistinct) {
    EXPECT_EQ(ConfigError("x").kind(), ErrorKind::config);
    EXPECT_EQ(DataError("x").kind(), ErrorKind::data);
    EXPECT_EQ(NumericError("x").kind(), ErrorKind::numeric);
    EXPECT_EQ(IoError("x").kind(), ErrorKind::io);
}
