#include "nettest/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "nettest/errors.hpp"
#include "kernels_internal.hpp"

namespace nettest::kernels {

namespace {

const Ops scalar_ops{link_moments_scalar, studentized_scalar,
                     two_sided_tail_scalar};

#ifdef NETTEST_HAVE_AVX2
const Ops avx2_ops{link_moments_avx2, studentized_avx2, two_sided_tail_avx2};
#endif

bool cpu_has_avx2() {
#ifdef NETTEST_HAVE_AVX2
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend initial_backend() {
    if (const char* env = std::getenv("NETTEST_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) {
            return Backend::avx2;
        }
        return Backend::scalar;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = initial_backend();

} // namespace

bool avx2_available() { return cpu_has_avx2(); }

Backend active_backend() { return g_backend; }

void force_backend(Backend backend) {
    if (backend == Backend::avx2 && !cpu_has_avx2()) {
        throw ValidationError("AVX2 kernels are not available on this CPU");
    }
    g_backend = backend;
}

const Ops& active() {
#ifdef NETTEST_HAVE_AVX2
    if (g_backend == Backend::avx2) return avx2_ops;
#endif
    return scalar_ops;
}

} // namespace nettest::kernels
