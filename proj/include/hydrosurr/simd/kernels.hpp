#pragma once

// Data-parallel inner loops used by the network and the submergence features.
//
// Every kernel has a portable scalar reference in kernels_scalar.cpp and, where
// the build targets x86-64, an AVX2/FMA variant in kernels_avx2.cpp. The active
// table is chosen once at startup from CPUID (override: HYDROSURR_ISA=scalar).
//
// Numerics contract:
//   - bias_act_* and submerged_sums are bit-identical across ISAs.
//   - gemm_* may differ by FMA contraction; the equivalence tests bound the
//     difference relative to sum(|a||b|).

#include <cstddef>
#include <string_view>

namespace hydrosurr::simd {

enum class Isa { scalar, avx2 };

struct SubmergedSums {
    std::size_t count = 0;     // samples with z <= z_water
    double depth_sum = 0.0;    // sum of (z_water - z) over those samples, index order
};

struct KernelTable {
    Isa isa;

    /// C[m x n] = A[m x k] * B[k x n] (+ C when accumulate). Row-major with leading dims.
    void (*gemm_f64)(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                     const double* b, std::size_t ldb, double* c, std::size_t ldc, bool accumulate);
    void (*gemm_f32)(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda,
                     const float* b, std::size_t ldb, float* c, std::size_t ldc, bool accumulate);

    /// x[r, :] += bias, then ReLU when `relu`.
    void (*bias_act_f64)(std::size_t rows, std::size_t cols, const double* bias, double* x,
                         std::size_t ldx, bool relu);
    void (*bias_act_f32)(std::size_t rows, std::size_t cols, const float* bias, float* x,
                         std::size_t ldx, bool relu);

    /// Submerged-sample count and summed depth below `z_water`; the sum is
    /// accumulated in index order so every ISA reproduces the scalar loop exactly.
    SubmergedSums (*submerged_sums)(const double* z, std::size_t n, double z_water);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 translation unit was not compiled in.
const KernelTable* avx2_kernels();

bool isa_supported(Isa isa);
std::string_view isa_name(Isa isa);

/// Table selected for this process (best supported ISA unless overridden).
const KernelTable& active_kernels();

/// Pins the active table; throws ConfigError if `isa` is unsupported here.
void force_isa(Isa isa);

}  // namespace hydrosurr::simd
