#include "ctseg/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace ctseg::kernels {

// Defined in kernels_avx2.cpp; returns nullptr when that TU was built
// without AVX2 support.
const Ops* avx2_ops_impl();

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const Ops* avx2_ops() {
    if (!avx2_supported()) return nullptr;
    return avx2_ops_impl();
}

const Ops& active_ops() {
    static const Ops* chosen = [] {
        const char* env = std::getenv("CTSEG_KERNELS");
        std::string_view want = env ? std::string_view(env) : std::string_view("auto");
        if (want == "scalar") return &scalar_ops();
        const Ops* simd = avx2_ops();
        // "avx2" on an unsupported host falls back rather than aborting;
        // active_ops().name tells the caller what actually runs.
        return simd ? simd : &scalar_ops();
    }();
    return *chosen;
}

} // namespace ctseg::kernels
