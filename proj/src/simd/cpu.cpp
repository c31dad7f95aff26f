#include "hydrosurr/simd/cpu.hpp"

#include <fstream>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace hydrosurr::simd {

CpuFeatures detect_cpu() {
    CpuFeatures f;
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    f.avx2 = __builtin_cpu_supports("avx2");
    f.fma = __builtin_cpu_supports("fma");
    f.avx512f = __builtin_cpu_supports("avx512f");
#endif
    return f;
}

std::string cpu_model_name() {
    std::ifstream in("/proc/cpuinfo");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                auto name = line.substr(colon + 1);
                const auto first = name.find_first_not_of(' ');
                return first == std::string::npos ? name : name.substr(first);
            }
        }
    }
    return "unknown";
}

#if defined(__SSE2__)
FlushDenormalsScope::FlushDenormalsScope() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
FlushDenormalsScope::~FlushDenormalsScope() { _mm_setcsr(saved_); }
#else
FlushDenormalsScope::FlushDenormalsScope() = default;
FlushDenormalsScope::~FlushDenormalsScope() = default;
#endif

}  // namespace hydrosurr::simd
