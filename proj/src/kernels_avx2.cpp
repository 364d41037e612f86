// AVX2+FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma in
// its own translation unit; only reached after a runtime CPU check.

#include "bhwave/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace bhwave::kernels {

namespace {

void leapfrog_interior_avx2(double* vn, const double* v, const double* vp,
                            const double* w, const double* src, double theta,
                            double beta, double inv_h2, std::size_t n) {
    if (n < 2) return;
    const __m256d vtheta = _mm256_set1_pd(theta);
    const __m256d vbeta = _mm256_set1_pd(beta);
    const __m256d vinv = _mm256_set1_pd(inv_h2);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 1;
    for (; i + 4 < n; i += 4) {
        const __m256d vc = _mm256_loadu_pd(v + i);
        const __m256d vl = _mm256_loadu_pd(v + i - 1);
        const __m256d vr = _mm256_loadu_pd(v + i + 1);
        const __m256d vpv = _mm256_loadu_pd(vp + i);
        const __m256d wv = _mm256_loadu_pd(w + i);
        const __m256d sv = _mm256_loadu_pd(src + i);
        const __m256d lead = _mm256_fmadd_pd(vtheta, _mm256_sub_pd(vc, vpv), vc);
        const __m256d nb = _mm256_add_pd(vr, vl);
        const __m256d lap = _mm256_fnmadd_pd(two, vc, nb);
        const __m256d a1 = _mm256_fnmadd_pd(wv, vc, sv);
        const __m256d a2 = _mm256_fmadd_pd(lap, vinv, a1);
        _mm256_storeu_pd(vn + i, _mm256_fmadd_pd(vbeta, a2, lead));
    }
    for (; i + 1 < n; ++i) {
        const double lead = std::fma(theta, v[i] - vp[i], v[i]);
        const double nb = v[i + 1] + v[i - 1];
        const double lap = std::fma(-2.0, v[i], nb);
        const double a1 = std::fma(-w[i], v[i], src[i]);
        const double a2 = std::fma(lap, inv_h2, a1);
        vn[i] = std::fma(beta, a2, lead);
    }
}

double hsum(__m256d x) {
    const __m128d lo = _mm256_castpd256_pd128(x);
    const __m128d hi = _mm256_extractf128_pd(x, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

ScanResult scan_avx2(const double* a, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d vmax = _mm256_setzero_pd();
    __m256d vfin = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(a + i);
        const __m256d d = _mm256_sub_pd(x, x);  // 0 iff finite
        vfin = _mm256_and_pd(vfin, _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_EQ_OQ));
        vmax = _mm256_max_pd(vmax, _mm256_andnot_pd(signmask, x));
    }
    ScanResult r;
    r.all_finite = (_mm256_movemask_pd(vfin) == 0xF);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vmax);
    for (double l : lanes)
        if (l > r.max_abs) r.max_abs = l;
    for (; i < n; ++i) {
        const double x = a[i];
        r.all_finite &= (x - x == 0.0);
        const double ax = std::fabs(x);
        if (ax > r.max_abs) r.max_abs = ax;
    }
    return r;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops table{"avx2", &leapfrog_interior_avx2, &dot_avx2,
                           &scan_avx2};
    return table;
}

}  // namespace bhwave::kernels

#endif  // __AVX2__ && __FMA__
