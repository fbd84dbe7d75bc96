#include "polcav/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace polcav::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Dispatch& select() {
    const char* env = std::getenv("POLCAV_KERNELS");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return scalar_kernels();
        if (std::strcmp(env, "avx2") == 0 && avx2_kernels() != nullptr && cpu_has_avx2())
            return *avx2_kernels();
    }
    if (cpu_has_avx2() && avx2_kernels() != nullptr) return *avx2_kernels();
    return scalar_kernels();
}

} // namespace

const Dispatch& active() {
    static const Dispatch& chosen = select();
    return chosen;
}

std::string isa_name(Isa isa) {
    switch (isa) {
        case Isa::Avx2: return "avx2";
        case Isa::Scalar: return "scalar";
    }
    return "unknown";
}

} // namespace polcav::kernels
