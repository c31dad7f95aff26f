#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <tuple>
#include <vector>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/core/rng.hpp"
#include "hydrosurr/simd/cpu.hpp"
#include "hydrosurr/simd/kernels.hpp"
#include "hydrosurr/simd/matrix_ops.hpp"

using namespace hydrosurr;
using simd::Isa;

namespace {

const simd::KernelTable* avx2_or_skip() {
    if (!simd::isa_supported(Isa::avx2)) return nullptr;
    return simd::avx2_kernels();
}

template <class T>
std::vector<T> random_matrix(std::size_t n, std::uint64_t seed) {
    Rng r(seed);
    std::vector<T> v(n);
    for (auto& x : v) x = static_cast<T>(2.0 * uniform01(r) - 1.0);
    return v;
}

// Reference product in long double plus the magnitude bound sum |a||b| per entry.
template <class T>
void reference_gemm(std::size_t m, std::size_t n, std::size_t k, const std::vector<T>& a, std::size_t lda,
                    const std::vector<T>& b, std::size_t ldb, std::vector<long double>& c, std::vector<long double>& mag) {
    c.assign(m * n, 0.0L);
    mag.assign(m * n, 0.0L);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t p = 0; p < k; ++p) {
                const long double x = a[i * lda + p], y = b[p * ldb + j];
                c[i * n + j] += x * y;
                mag[i * n + j] += std::fabs(x * y);
            }
}

}  // namespace

class GemmShapes : public ::testing::TestWithParam<std::tuple<std::size_t, std::size_t, std::size_t>> {};

TEST_P(GemmShapes, F64MatchesReferenceOnBothIsas) {
    const auto [m, n, k] = GetParam();
    const std::size_t lda = k + 3, ldb = n + 5, ldc = n + 2;
    const auto a = random_matrix<double>(m * lda, 1 + m);
    const auto b = random_matrix<double>(k * ldb, 2 + n);
    std::vector<long double> ref, mag;
    reference_gemm(m, n, k, a, lda, b, ldb, ref, mag);
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<const simd::KernelTable*> tables{&simd::scalar_kernels()};
    if (auto* t = avx2_or_skip()) tables.push_back(t);
    for (const auto* t : tables) {
        std::vector<double> c(m * ldc, -7.0);
        t->gemm_f64(m, n, k, a.data(), lda, b.data(), ldb, c.data(), ldc, false);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                ASSERT_LE(std::fabs(c[i * ldc + j] - static_cast<double>(ref[i * n + j])),
                          2.0 * static_cast<double>(k + 1) * eps * static_cast<double>(mag[i * n + j]) + 1e-300)
                    << simd::isa_name(t->isa) << " at " << i << "," << j;
            for (std::size_t j = n; j < ldc; ++j) ASSERT_EQ(c[i * ldc + j], -7.0) << "padding overwritten";
        }
    }
}

TEST_P(GemmShapes, F32MatchesReferenceOnBothIsas) {
    const auto [m, n, k] = GetParam();
    const auto a = random_matrix<float>(m * k, 3 + m);
    const auto b = random_matrix<float>(k * n, 4 + n);
    std::vector<long double> ref, mag;
    reference_gemm(m, n, k, a, k, b, n, ref, mag);
    const double eps = std::numeric_limits<float>::epsilon();
    std::vector<const simd::KernelTable*> tables{&simd::scalar_kernels()};
    if (auto* t = avx2_or_skip()) tables.push_back(t);
    for (const auto* t : tables) {
        std::vector<float> c(m * n);
        t->gemm_f32(m, n, k, a.data(), k, b.data(), n, c.data(), n, false);
        for (std::size_t i = 0; i < m * n; ++i)
            ASSERT_LE(std::fabs(c[i] - static_cast<double>(ref[i])),
                      2.0 * static_cast<double>(k + 1) * eps * static_cast<double>(mag[i]) + 1e-30)
                << simd::isa_name(t->isa) << " at " << i;
    }
}

TEST_P(GemmShapes, AccumulateAddsToExisting) {
    const auto [m, n, k] = GetParam();
    const auto a = random_matrix<double>(m * k, 5);
    const auto b = random_matrix<double>(k * n, 6);
    const auto c0 = random_matrix<double>(m * n, 7);
    std::vector<const simd::KernelTable*> tables{&simd::scalar_kernels()};
    if (auto* t = avx2_or_skip()) tables.push_back(t);
    for (const auto* t : tables) {
        std::vector<double> fresh(m * n), acc = c0;
        t->gemm_f64(m, n, k, a.data(), k, b.data(), n, fresh.data(), n, false);
        t->gemm_f64(m, n, k, a.data(), k, b.data(), n, acc.data(), n, true);
        for (std::size_t i = 0; i < m * n; ++i) ASSERT_NEAR(acc[i], c0[i] + fresh[i], 1e-12 * (1 + std::fabs(acc[i])));
    }
}

INSTANTIATE_TEST_SUITE_P(Shapes, GemmShapes,
                         ::testing::Values(std::make_tuple(1, 1, 1), std::make_tuple(1, 3, 27),
                                           std::make_tuple(3, 1, 5), std::make_tuple(4, 12, 8),
                                           std::make_tuple(5, 13, 7), std::make_tuple(13, 256, 27),
                                           std::make_tuple(97, 37, 300), std::make_tuple(208, 256, 256),
                                           std::make_tuple(13, 3, 256), std::make_tuple(7, 9, 0)));

TEST(BiasAct, BitIdenticalAcrossIsas) {
    const auto* avx = avx2_or_skip();
    if (!avx) GTEST_SKIP() << "AVX2 not available";
    for (std::size_t cols : {1u, 3u, 7u, 8u, 17u, 256u}) {
        const std::size_t rows = 11, ldx = cols + 1;
        const auto bias = random_matrix<double>(cols, cols);
        const auto x0 = random_matrix<double>(rows * ldx, 100 + cols);
        for (bool relu : {false, true}) {
            auto xs = x0, xa = x0;
            simd::scalar_kernels().bias_act_f64(rows, cols, bias.data(), xs.data(), ldx, relu);
            avx->bias_act_f64(rows, cols, bias.data(), xa.data(), ldx, relu);
            ASSERT_EQ(std::memcmp(xs.data(), xa.data(), xs.size() * sizeof(double)), 0);
            std::vector<float> bf(bias.begin(), bias.end()), fs(x0.begin(), x0.end()), fa = fs;
            simd::scalar_kernels().bias_act_f32(rows, cols, bf.data(), fs.data(), ldx, relu);
            avx->bias_act_f32(rows, cols, bf.data(), fa.data(), ldx, relu);
            ASSERT_EQ(std::memcmp(fs.data(), fa.data(), fs.size() * sizeof(float)), 0);
        }
    }
}

TEST(BiasAct, ReluClampsNegatives) {
    std::vector<double> x{-1.0, 0.5, -0.25, 2.0}, bias{0.0, -1.0};
    simd::scalar_kernels().bias_act_f64(2, 2, bias.data(), x.data(), 2, true);
    EXPECT_EQ(x, (std::vector<double>{0.0, 0.0, 0.0, 1.0}));
}

TEST(SubmergedSums, BitIdenticalAcrossIsas) {
    const auto* avx = avx2_or_skip();
    if (!avx) GTEST_SKIP() << "AVX2 not available";
    Rng r(77);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 15u, 2048u, 2051u}) {
        std::vector<double> z(n);
        for (auto& v : z) v = uniform01(r) - 0.5;
        for (double zw : {-1.0, -0.2, 0.0, 0.13, 1.0}) {
            const auto s = simd::scalar_kernels().submerged_sums(z.data(), n, zw);
            const auto a = avx->submerged_sums(z.data(), n, zw);
            ASSERT_EQ(s.count, a.count);
            ASSERT_EQ(std::memcmp(&s.depth_sum, &a.depth_sum, sizeof(double)), 0);
        }
    }
}

TEST(SubmergedSums, CountsInclusiveOfWaterLevel) {
    const std::vector<double> z{0.0, 0.1, 0.2, 0.3};
    const auto s = simd::scalar_kernels().submerged_sums(z.data(), z.size(), 0.2);
    EXPECT_EQ(s.count, 3u);
    EXPECT_DOUBLE_EQ(s.depth_sum, 0.2 + 0.1 + 0.0);
}

TEST(Dispatch, ForceIsaRoundTrip) {
    const Isa before = simd::active_kernels().isa;
    simd::force_isa(Isa::scalar);
    EXPECT_EQ(simd::active_kernels().isa, Isa::scalar);
    if (simd::isa_supported(Isa::avx2)) {
        simd::force_isa(Isa::avx2);
        EXPECT_EQ(simd::active_kernels().isa, Isa::avx2);
    } else {
        EXPECT_THROW(simd::force_isa(Isa::avx2), ConfigError);
    }
    simd::force_isa(before);
}

TEST(Transpose, MatchesDefinition) {
    const std::size_t r = 19, c = 35;
    const auto a = random_matrix<double>(r * c, 8);
    std::vector<double> t(r * c);
    simd::transpose(a.data(), r, c, t.data());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) ASSERT_EQ(t[j * r + i], a[i * c + j]);
}

TEST(FlushDenormals, ScopedAndRestored) {
    volatile double tiny = std::numeric_limits<double>::min();
    volatile double half = 0.5;
    const double before = tiny * half;
    EXPECT_GT(before, 0.0);
    {
        const hydrosurr::simd::FlushDenormalsScope ftz;
#if defined(__SSE2__)
        EXPECT_EQ(tiny * half, 0.0);
#endif
    }
    EXPECT_EQ(tiny * half, before);
}
