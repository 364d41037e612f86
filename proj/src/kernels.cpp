#include "bhwave/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace bhwave::kernels {

const Ops& scalar_ops();
#if BHWAVE_HAVE_AVX2
const Ops& avx2_ops();
#endif

bool backend_available(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if BHWAVE_HAVE_AVX2
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const Ops& ops(Backend b) {
    if (!backend_available(b))
        throw std::invalid_argument("kernel backend unavailable on this host");
    if (b == Backend::scalar) return scalar_ops();
#if BHWAVE_HAVE_AVX2
    return avx2_ops();
#else
    return scalar_ops();  // unreachable: guarded by backend_available
#endif
}

namespace {

Backend pick_backend() {
    if (const char* env = std::getenv("BHWAVE_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!backend_available(Backend::avx2))
                throw std::runtime_error("BHWAVE_BACKEND=avx2 but host lacks AVX2/FMA");
            return Backend::avx2;
        }
        // anything else (including "auto") falls through to detection
    }
    return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

}  // namespace

Backend active_backend() {
    static const Backend b = pick_backend();
    return b;
}

const Ops& ops() { return ops(active_backend()); }

}  // namespace bhwave::kernels
