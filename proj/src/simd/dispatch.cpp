#include <atomic>
#include <cstdlib>
#include <string>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/simd/cpu.hpp"
#include "hydrosurr/simd/kernels.hpp"

namespace hydrosurr::simd {
namespace {

const KernelTable& table_for(Isa isa) {
    if (isa == Isa::avx2) return *avx2_kernels();
    return scalar_kernels();
}

Isa select_default() {
    if (const char* env = std::getenv("HYDROSURR_ISA")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
    }
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{&table_for(select_default())};
    return slot;
}

}  // namespace

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2: {
            if (avx2_kernels() == nullptr) return false;
            const auto cpu = detect_cpu();
            return cpu.avx2 && cpu.fma;
        }
    }
    return false;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

void force_isa(Isa isa) {
    if (!isa_supported(isa))
        throw ConfigError("ISA " + std::string(isa_name(isa)) + " is not supported on this machine");
    active_slot().store(&table_for(isa), std::memory_order_release);
}

}  // namespace hydrosurr::simd
