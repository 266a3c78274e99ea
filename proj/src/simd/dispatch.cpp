#include <cstdlib>
#include <cstring>

#include "toa/simd/kernels.hpp"

namespace toa::simd {

#ifdef TOA_HAVE_AVX2
const KernelTable* avx2_kernels_impl();
#endif

const KernelTable* avx2_kernels() {
#ifdef TOA_HAVE_AVX2
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? avx2_kernels_impl() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable* resolve(Backend b) {
    if (b == Backend::Scalar) return &scalar_kernels();
    if (b == Backend::Avx2 && avx2_kernels()) return avx2_kernels();
    if (b == Backend::Auto) {
        const char* env = std::getenv("TOA_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return t;
    }
    return &scalar_kernels();
}

const KernelTable*& current() {
    static const KernelTable* t = resolve(Backend::Auto);
    return t;
}

}  // namespace

const KernelTable& active() { return *current(); }
void select_backend(Backend b) { current() = resolve(b); }
std::string active_name() { return active().name; }

}  // namespace toa::simd
