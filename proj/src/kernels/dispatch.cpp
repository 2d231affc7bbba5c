#include "hjmm/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace hjmm::kernels {

#if defined(HJMM_HAVE_AVX2)
bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

namespace {

const Table& select() {
    const char* env = std::getenv("HJMM_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
#if defined(HJMM_HAVE_AVX2)
    if (cpu_has_avx2()) return avx2_table();
#endif
    return scalar_table();
}

}  // namespace

const Table& active() {
    static const Table& t = select();
    return t;
}

}  // namespace hjmm::kernels
