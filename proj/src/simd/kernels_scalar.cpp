#include <algorithm>

#include "hydrosurr/simd/kernels.hpp"

namespace hydrosurr::simd {
namespace {

template <class T>
void gemm_ref(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda, const T* b,
              std::size_t ldb, T* c, std::size_t ldc, bool accumulate) {
    for (std::size_t i = 0; i < m; ++i) {
        T* crow = c + i * ldc;
        if (!accumulate) std::fill(crow, crow + n, T(0));
        const T* arow = a + i * lda;
        for (std::size_t p = 0; p < k; ++p) {
            const T av = arow[p];
            const T* brow = b + p * ldb;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

template <class T>
void bias_act_ref(std::size_t rows, std::size_t cols, const T* bias, T* x, std::size_t ldx, bool relu) {
    for (std::size_t r = 0; r < rows; ++r) {
        T* row = x + r * ldx;
        for (std::size_t j = 0; j < cols; ++j) {
            const T v = row[j] + bias[j];
            row[j] = relu ? (v > T(0) ? v : T(0)) : v;
        }
    }
}

SubmergedSums submerged_sums_ref(const double* z, std::size_t n, double z_water) {
    SubmergedSums s;
    for (std::size_t i = 0; i < n; ++i) {
        if (z_water >= z[i]) {
            ++s.count;
            s.depth_sum += z_water - z[i];
        }
    }
    return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        Isa::scalar,         gemm_ref<double>,       gemm_ref<float>,
        bias_act_ref<double>, bias_act_ref<float>,   submerged_sums_ref,
    };
    return table;
}

}  // namespace hydrosurr::simd
