// AVX2 kernels. This translation unit is compiled with -mavx2 -mfma
// -ffp-contract=off: contraction would fuse the grid-point multiply-add
// and break bit equality with the scalar reference.

#include "kernels_detail.hpp"

#ifdef DREADFUZZ_HAVE_AVX2

#include <immintrin.h>

namespace dreadfuzz::kernels::detail {
namespace {

inline __m256d grid_x(std::size_t i, __m256d vlo, __m256d vstep) {
    const double d = static_cast<double>(i);
    const __m256d vi = _mm256_setr_pd(d, d + 1.0, d + 2.0, d + 3.0);
    return _mm256_add_pd(vlo, _mm256_mul_pd(vi, vstep));
}

void sample_grid(double* dst, std::size_t n, double lo, double step,
                 const Trapezoid& t) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vstep = _mm256_set1_pd(step);
    const __m256d va = _mm256_set1_pd(t.a);
    const __m256d vd = _mm256_set1_pd(t.d);
    const __m256d rise_den = _mm256_set1_pd(t.b - t.a);
    const __m256d fall_den = _mm256_set1_pd(t.d - t.c);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d minus_one = _mm256_set1_pd(-1.0);
    const bool flat_rise = t.a == t.b;
    const bool flat_fall = t.c == t.d;

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = grid_x(i, vlo, vstep);
        __m256d rise;
        if (flat_rise) {
            const __m256d ge = _mm256_cmp_pd(x, va, _CMP_GE_OQ);
            rise = _mm256_blendv_pd(minus_one, two, ge);
        } else {
            rise = _mm256_div_pd(_mm256_sub_pd(x, va), rise_den);
        }
        __m256d fall;
        if (flat_fall) {
            const __m256d le = _mm256_cmp_pd(x, vd, _CMP_LE_OQ);
            fall = _mm256_blendv_pd(minus_one, two, le);
        } else {
            fall = _mm256_div_pd(_mm256_sub_pd(vd, x), fall_den);
        }
        __m256d m = _mm256_min_pd(rise, fall);
        m = _mm256_min_pd(m, one);
        m = _mm256_max_pd(m, zero);
        _mm256_storeu_pd(dst + i, m);
    }
    for (; i < n; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        dst[i] = trapezoid_eval(t, x);
    }
}

void clip_max(double* acc, const double* src, std::size_t n, double level) {
    const __m256d vlevel = _mm256_set1_pd(level);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d clipped = _mm256_min_pd(_mm256_loadu_pd(src + i), vlevel);
        const __m256d merged = _mm256_max_pd(_mm256_loadu_pd(acc + i), clipped);
        _mm256_storeu_pd(acc + i, merged);
    }
    for (; i < n; ++i) {
        const double clipped = src[i] < level ? src[i] : level;
        acc[i] = acc[i] > clipped ? acc[i] : clipped;
    }
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d sum2 = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(sum2, sum2);
    return _mm_cvtsd_f64(_mm_add_sd(sum2, swapped));
}

MomentSums moments(const double* mu, std::size_t n, double lo, double step) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vstep = _mm256_set1_pd(step);
    __m256d vmass = _mm256_setzero_pd();
    __m256d vweighted = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d m = _mm256_loadu_pd(mu + i);
        const __m256d x = grid_x(i, vlo, vstep);
        vmass = _mm256_add_pd(vmass, m);
        vweighted = _mm256_add_pd(vweighted, _mm256_mul_pd(x, m));
    }
    double mass = hsum(vmass);
    double weighted = hsum(vweighted);
    for (; i < n; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        mass += mu[i];
        weighted += x * mu[i];
    }
    return {mass, weighted};
}

double max_value(const double* mu, std::size_t n) {
    __m256d vmax = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(mu + i));
    }
    const __m128d lo = _mm256_castpd256_pd128(vmax);
    const __m128d hi = _mm256_extractf128_pd(vmax, 1);
    const __m128d max2 = _mm_max_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(max2, max2);
    double m = _mm_cvtsd_f64(_mm_max_sd(max2, swapped));
    for (; i < n; ++i) {
        m = mu[i] > m ? mu[i] : m;
    }
    return m;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops table{sample_grid, clip_max, moments, max_value};
    return table;
}

}  // namespace dreadfuzz::kernels::detail

#endif  // DREADFUZZ_HAVE_AVX2
