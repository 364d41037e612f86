#include <cmath>
#include <limits>

#include "bhwave/kernels.hpp"

namespace bhwave::kernels {

namespace {

void leapfrog_interior_scalar(double* vn, const double* v, const double* vp,
                              const double* w, const double* src, double theta,
                              double beta, double inv_h2, std::size_t n) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double lead = std::fma(theta, v[i] - vp[i], v[i]);
        const double nb = v[i + 1] + v[i - 1];
        const double lap = std::fma(-2.0, v[i], nb);
        const double a1 = std::fma(-w[i], v[i], src[i]);
        const double a2 = std::fma(lap, inv_h2, a1);
        vn[i] = std::fma(beta, a2, lead);
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

ScanResult scan_scalar(const double* a, std::size_t n) {
    ScanResult r;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a[i];
        r.all_finite &= (x - x == 0.0);  // false for NaN and +-Inf
        const double ax = std::fabs(x);
        if (ax > r.max_abs) r.max_abs = ax;
    }
    return r;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table{"scalar", &leapfrog_interior_scalar, &dot_scalar,
                           &scan_scalar};
    return table;
}

}  // namespace bhwave::kernels
