#include <cstdlib>
#include <string_view>

#include "psq/simd/kernels.hpp"

namespace psq::simd {

std::string_view to_string(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "scalar";
}

namespace {

bool cpu_has_avx2() {
#if defined(PSQ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select() {
    const char* forced = std::getenv("PSQ_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return detail::scalar_table;
    if (const KernelTable* t = kernels_for(Isa::avx2)) return *t;
    return detail::scalar_table;
}

}  // namespace

const KernelTable* kernels_for(Isa isa) {
    switch (isa) {
    case Isa::scalar: return &detail::scalar_table;
    case Isa::avx2:
#if defined(PSQ_HAVE_AVX2)
        if (cpu_has_avx2()) return &detail::avx2_table;
#endif
        return nullptr;
    }
    return nullptr;
}

const KernelTable& kernels() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace psq::simd
