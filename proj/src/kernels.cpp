#include "dreadfuzz/kernels.hpp"

#include <cstdlib>
#include <string>

#include "dreadfuzz/errors.hpp"
#include "kernels_detail.hpp"

namespace dreadfuzz::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(DREADFUZZ_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

// DREADFUZZ_BACKEND=scalar|avx2 forces a backend; anything else is
// rejected so a typo does not silently fall back.
Backend pick_backend() {
    if (const char* forced = std::getenv("DREADFUZZ_BACKEND")) {
        const std::string name(forced);
        if (name == "scalar") return Backend::Scalar;
        if (name == "avx2") {
            if (!cpu_has_avx2()) {
                throw Error(ErrorKind::Validation,
                            "DREADFUZZ_BACKEND=avx2 but AVX2 is not available");
            }
            return Backend::Avx2;
        }
        throw Error(ErrorKind::Validation,
                    "unknown DREADFUZZ_BACKEND value '" + name + "'");
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "?";
}

bool backend_available(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return cpu_has_avx2();
    }
    return false;
}

const Ops& ops(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return detail::scalar_ops();
        case Backend::Avx2:
#ifdef DREADFUZZ_HAVE_AVX2
            if (cpu_has_avx2()) return detail::avx2_ops();
#endif
            throw Error(ErrorKind::Validation, "avx2 backend is not available");
    }
    throw Error(ErrorKind::Validation, "unknown backend");
}

Backend active_backend() {
    static const Backend selected = pick_backend();
    return selected;
}

const Ops& active() { return ops(active_backend()); }

}  // namespace dreadfuzz::kernels
