#pragma once

// Grid kernels behind the inference engine. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. The two variants are equivalence-tested: pointwise kernels
// (mf_sample_grid, clip_max_accumulate, max_degree) must agree bit for
// bit, reductions (moment_sums) to within accumulation-order error.

#include <cstddef>

namespace dreadfuzz::kernels {

// Piecewise-linear membership shape in trapezoid form, a <= b <= c <= d.
// A triangle is the b == c special case. Degenerate vertical edges
// (a == b or c == d) encode shoulder plateaus that start or end with
// full membership at the universe edge.
struct Trapezoid {
    double a;
    double b;
    double c;
    double d;
};

// Single-point evaluation. Exact at vertices: 0 at a (when a < b), 1 on
// [b, c], 0 at d (when c < d), 0 strictly outside [a, d].
inline double trapezoid_eval(const Trapezoid& t, double x) {
    const double rise = (t.a == t.b) ? (x >= t.a ? 2.0 : -1.0)
                                     : (x - t.a) / (t.b - t.a);
    const double fall = (t.c == t.d) ? (x <= t.d ? 2.0 : -1.0)
                                     : (t.d - x) / (t.d - t.c);
    double m = rise < fall ? rise : fall;
    m = m < 1.0 ? m : 1.0;
    return m > 0.0 ? m : 0.0;
}

struct MomentSums {
    double mass;      // sum of mu_i
    double weighted;  // sum of x_i * mu_i
};

// Function table for one backend.
struct Ops {
    // dst[i] = trapezoid_eval(t, lo + i * step) for i in [0, n)
    void (*mf_sample_grid)(double* dst, std::size_t n, double lo, double step,
                           const Trapezoid& t);
    // acc[i] = max(acc[i], min(src[i], level))
    void (*clip_max_accumulate)(double* acc, const double* src, std::size_t n,
                                double level);
    // mass/weighted sums over the grid lo + i * step
    MomentSums (*moment_sums)(const double* mu, std::size_t n, double lo,
                              double step);
    // maximum of mu[0..n); 0 for n == 0
    double (*max_degree)(const double* mu, std::size_t n);
};

enum class Backend {
    Scalar,
    Avx2,
};

const char* backend_name(Backend b);
bool backend_available(Backend b);

// Table for an explicit backend; throws dreadfuzz::Error if unavailable.
const Ops& ops(Backend b);

// Best available backend, detected once per process.
const Ops& active();
Backend active_backend();

}  // namespace dreadfuzz::kernels
