#pragma once

#include <string>

namespace hydrosurr::simd {

struct CpuFeatures {
    bool avx2 = false;
    bool fma = false;
    bool avx512f = false;
};

CpuFeatures detect_cpu();

/// "model name" from /proc/cpuinfo when available, else "unknown".
std::string cpu_model_name();

/// Sets flush-to-zero and denormals-are-zero for this thread while in scope
/// (no-op off x86). Subnormal operands run 10-100x slower on most cores.
class FlushDenormalsScope {
public:
    FlushDenormalsScope();
    ~FlushDenormalsScope();
    FlushDenormalsScope(const FlushDenormalsScope&) = delete;
    FlushDenormalsScope& operator=(const FlushDenormalsScope&) = delete;

private:
    unsigned saved_ = 0;
};

}  // namespace hydrosurr::simd
