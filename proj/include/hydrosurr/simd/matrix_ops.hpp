#pragma once

#include <cstddef>

namespace hydrosurr::simd {

/// dst[c x r] = src[r x c]^T (dense row-major).
template <class T>
void transpose(const T* src, std::size_t rows, std::size_t cols, T* dst) {
    constexpr std::size_t tile = 16;
    for (std::size_t i0 = 0; i0 < rows; i0 += tile)
        for (std::size_t j0 = 0; j0 < cols; j0 += tile) {
            const std::size_t i1 = i0 + tile < rows ? i0 + tile : rows;
            const std::size_t j1 = j0 + tile < cols ? j0 + tile : cols;
            for (std::size_t i = i0; i < i1; ++i)
                for (std::size_t j = j0; j < j1; ++j) dst[j * rows + i] = src[i * cols + j];
        }
}

}  // namespace hydrosurr::simd
