#include "hydrosurr/simd/kernels.hpp"

#if defined(HYDROSURR_HAVE_AVX2_TU) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

namespace hydrosurr::simd {
namespace {

// Packed GEMM: B is copied into kc x NR column panels and A into MR x kc row
// panels (both zero-padded), so the micro kernel streams two contiguous
// buffers while an MR x NR tile of C stays in registers. 4 x 3 vectors measured
// fastest among the register-fitting shapes.

template <class T>
struct Simd;

template <>
struct Simd<double> {
    using V = __m256d;
    static constexpr int lanes = 4;
    static V load(const double* p) { return _mm256_loadu_pd(p); }
    static void store(double* p, V v) { _mm256_storeu_pd(p, v); }
    static V zero() { return _mm256_setzero_pd(); }
    static V bcast(const double* p) { return _mm256_broadcast_sd(p); }
    static V fma(V a, V b, V c) { return _mm256_fmadd_pd(a, b, c); }
    static V add(V a, V b) { return _mm256_add_pd(a, b); }
};

template <>
struct Simd<float> {
    using V = __m256;
    static constexpr int lanes = 8;
    static V load(const float* p) { return _mm256_loadu_ps(p); }
    static void store(float* p, V v) { _mm256_storeu_ps(p, v); }
    static V zero() { return _mm256_setzero_ps(); }
    static V bcast(const float* p) { return _mm256_broadcast_ss(p); }
    static V fma(V a, V b, V c) { return _mm256_fmadd_ps(a, b, c); }
    static V add(V a, V b) { return _mm256_add_ps(a, b); }
};

constexpr int kMR = 4;   // rows per micro tile
constexpr int kNV = 3;   // vectors per micro tile row
constexpr std::size_t kKC = 256;
constexpr std::size_t kMC = 96;

/// C tile (MR x NV vectors) += Ap * Bp over kc steps. Full tiles write C
/// directly; edge tiles go through a scratch tile. Accumulators are named
/// locals: GCC keeps an indexed accumulator array in memory and stores it on
/// every step.
template <class T>
inline void micro(std::size_t kc, const T* ap, const T* bp, T* c, std::size_t ldc, int rows, int cols, bool accumulate) {
    static_assert(kMR == 4 && kNV == 3, "micro kernel is written for a 4 x 3 vector tile");
    using S = Simd<T>;
    using V = typename S::V;
    constexpr int L = S::lanes;
    V c00 = S::zero(), c01 = S::zero(), c02 = S::zero();
    V c10 = S::zero(), c11 = S::zero(), c12 = S::zero();
    V c20 = S::zero(), c21 = S::zero(), c22 = S::zero();
    V c30 = S::zero(), c31 = S::zero(), c32 = S::zero();
    for (std::size_t p = 0; p < kc; ++p) {
        const V b0 = S::load(bp), b1 = S::load(bp + L), b2 = S::load(bp + 2 * L);
        V a = S::bcast(ap);
        c00 = S::fma(a, b0, c00);
        c01 = S::fma(a, b1, c01);
        c02 = S::fma(a, b2, c02);
        a = S::bcast(ap + 1);
        c10 = S::fma(a, b0, c10);
        c11 = S::fma(a, b1, c11);
        c12 = S::fma(a, b2, c12);
        a = S::bcast(ap + 2);
        c20 = S::fma(a, b0, c20);
        c21 = S::fma(a, b1, c21);
        c22 = S::fma(a, b2, c22);
        a = S::bcast(ap + 3);
        c30 = S::fma(a, b0, c30);
        c31 = S::fma(a, b1, c31);
        c32 = S::fma(a, b2, c32);
        ap += kMR;
        bp += kNV * L;
    }
    const V acc[kMR][kNV] = {{c00, c01, c02}, {c10, c11, c12}, {c20, c21, c22}, {c30, c31, c32}};
    if (rows == kMR && cols == kNV * L) {
        for (int r = 0; r < kMR; ++r) {
            T* cr = c + r * ldc;
            for (int v = 0; v < kNV; ++v)
                S::store(cr + v * L, accumulate ? S::add(S::load(cr + v * L), acc[r][v]) : acc[r][v]);
        }
        return;
    }
    alignas(32) T tile[kMR][kNV * L];
    for (int r = 0; r < kMR; ++r)
        for (int v = 0; v < kNV; ++v) S::store(tile[r] + v * L, acc[r][v]);
    for (int r = 0; r < rows; ++r)
        for (int j = 0; j < cols; ++j) c[r * ldc + j] = accumulate ? c[r * ldc + j] + tile[r][j] : tile[r][j];
}

template <class T>
void gemm_packed(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b, std::size_t ldb,
                 T* c, std::size_t ldc, bool accumulate) {
    constexpr std::size_t NR = kNV * Simd<T>::lanes;
    if (m == 0 || n == 0) return;
    if (k == 0) {
        if (!accumulate)
            for (std::size_t i = 0; i < m; ++i) std::fill(c + i * ldc, c + i * ldc + n, T(0));
        return;
    }
    const std::size_t n_panels = (n + NR - 1) / NR;
    thread_local std::vector<T> bpack, apack;
    for (std::size_t p0 = 0; p0 < k; p0 += kKC) {
        const std::size_t kc = std::min(kKC, k - p0);
        const bool acc = accumulate || p0 > 0;
        bpack.resize(n_panels * kc * NR);
        for (std::size_t jp = 0; jp < n_panels; ++jp) {
            T* dst = bpack.data() + jp * kc * NR;
            const std::size_t j0 = jp * NR, w = std::min(NR, n - j0);
            for (std::size_t p = 0; p < kc; ++p) {
                const T* src = b + (p0 + p) * ldb + j0;
                std::size_t j = 0;
                for (; j < w; ++j) dst[p * NR + j] = src[j];
                for (; j < NR; ++j) dst[p * NR + j] = T(0);
            }
        }
        for (std::size_t i0 = 0; i0 < m; i0 += kMC) {
            const std::size_t mc = std::min(kMC, m - i0);
            const std::size_t m_panels = (mc + kMR - 1) / kMR;
            apack.resize(m_panels * kc * kMR);
            for (std::size_t ip = 0; ip < m_panels; ++ip) {
                T* dst = apack.data() + ip * kc * kMR;
                const std::size_t r0 = i0 + ip * kMR, h = std::min<std::size_t>(kMR, m - r0);
                for (std::size_t p = 0; p < kc; ++p) {
                    std::size_t r = 0;
                    for (; r < h; ++r) dst[p * kMR + r] = a[(r0 + r) * lda + p0 + p];
                    for (; r < static_cast<std::size_t>(kMR); ++r) dst[p * kMR + r] = T(0);
                }
            }
            for (std::size_t jp = 0; jp < n_panels; ++jp) {
                const std::size_t j0 = jp * NR;
                const int cols = static_cast<int>(std::min(NR, n - j0));
                for (std::size_t ip = 0; ip < m_panels; ++ip) {
                    const std::size_t r0 = i0 + ip * kMR;
                    const int rows = static_cast<int>(std::min<std::size_t>(kMR, m - r0));
                    micro<T>(kc, apack.data() + ip * kc * kMR, bpack.data() + jp * kc * NR, c + r0 * ldc + j0, ldc,
                             rows, cols, acc);
                }
            }
        }
    }
}

void gemm_f64_avx2(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                   const double* b, std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
    gemm_packed<double>(m, n, k, a, lda, b, ldb, c, ldc, accumulate);
}

void gemm_f32_avx2(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda,
                   const float* b, std::size_t ldb, float* c, std::size_t ldc, bool accumulate) {
    gemm_packed<float>(m, n, k, a, lda, b, ldb, c, ldc, accumulate);
}

void bias_act_f64_avx2(std::size_t rows, std::size_t cols, const double* bias, double* x,
                       std::size_t ldx, bool relu) {
    const __m256d zero = _mm256_setzero_pd();
    const std::size_t c4 = cols - cols % 4;
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = x + r * ldx;
        for (std::size_t j = 0; j < c4; j += 4) {
            __m256d v = _mm256_add_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(bias + j));
            if (relu) v = _mm256_max_pd(v, zero);
            _mm256_storeu_pd(row + j, v);
        }
        for (std::size_t j = c4; j < cols; ++j) {
            const double v = row[j] + bias[j];
            row[j] = relu ? (v > 0.0 ? v : 0.0) : v;
        }
    }
}

void bias_act_f32_avx2(std::size_t rows, std::size_t cols, const float* bias, float* x,
                       std::size_t ldx, bool relu) {
    const __m256 zero = _mm256_setzero_ps();
    const std::size_t c8 = cols - cols % 8;
    for (std::size_t r = 0; r < rows; ++r) {
        float* row = x + r * ldx;
        for (std::size_t j = 0; j < c8; j += 8) {
            __m256 v = _mm256_add_ps(_mm256_loadu_ps(row + j), _mm256_loadu_ps(bias + j));
            if (relu) v = _mm256_max_ps(v, zero);
            _mm256_storeu_ps(row + j, v);
        }
        for (std::size_t j = c8; j < cols; ++j) {
            const float v = row[j] + bias[j];
            row[j] = relu ? (v > 0.0f ? v : 0.0f) : v;
        }
    }
}

SubmergedSums submerged_sums_avx2(const double* z, std::size_t n, double z_water) {
    SubmergedSums s;
    const __m256d level = _mm256_set1_pd(z_water);
    alignas(32) double lane[4];
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d zv = _mm256_loadu_pd(z + i);
        const __m256d wet = _mm256_cmp_pd(level, zv, _CMP_GE_OQ);
        s.count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(wet)));
        _mm256_store_pd(lane, _mm256_and_pd(_mm256_sub_pd(level, zv), wet));
        // In-order reduction: dry lanes contribute +0.0, which leaves the sum unchanged.
        s.depth_sum += lane[0];
        s.depth_sum += lane[1];
        s.depth_sum += lane[2];
        s.depth_sum += lane[3];
    }
    for (; i < n; ++i) {
        if (z_water >= z[i]) {
            ++s.count;
            s.depth_sum += z_water - z[i];
        }
    }
    return s;
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{
        Isa::avx2,         gemm_f64_avx2,     gemm_f32_avx2,
        bias_act_f64_avx2, bias_act_f32_avx2, submerged_sums_avx2,
    };
    return &table;
}

}  // namespace hydrosurr::simd

#else

namespace hydrosurr::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace hydrosurr::simd

#endif
