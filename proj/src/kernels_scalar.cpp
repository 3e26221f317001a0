// Reference kernels. The AVX2 variants are validated against these, so
// the arithmetic here is deliberately spelled out: grid points as one
// multiply plus one add, clamps as comparisons ordered the way the
// vector min/max instructions resolve them.

#include "kernels_detail.hpp"

namespace dreadfuzz::kernels::detail {
namespace {

void sample_grid(double* dst, std::size_t n, double lo, double step,
                 const Trapezoid& t) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        dst[i] = trapezoid_eval(t, x);
    }
}

void clip_max(double* acc, const double* src, std::size_t n, double level) {
    for (std::size_t i = 0; i < n; ++i) {
        const double clipped = src[i] < level ? src[i] : level;
        acc[i] = acc[i] > clipped ? acc[i] : clipped;
    }
}

MomentSums moments(const double* mu, std::size_t n, double lo, double step) {
    double mass = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        mass += mu[i];
        weighted += x * mu[i];
    }
    return {mass, weighted};
}

double max_value(const double* mu, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = mu[i] > m ? mu[i] : m;
    }
    return m;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table{sample_grid, clip_max, moments, max_value};
    return table;
}

}  // namespace dreadfuzz::kernels::detail
