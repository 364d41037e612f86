#pragma once

// Data-parallel inner-loop kernels with a scalar reference implementation and
// an AVX2 variant selected at runtime. The scalar path mirrors the fused
// multiply-add structure of the vector path, so the pointwise stencil kernel
// is bit-identical across backends; reductions may differ by accumulation
// order and are equivalence-tested to tight tolerance instead.

#include <cstddef>

namespace bhwave::kernels {

struct ScanResult {
    double max_abs = 0.0;   // unspecified when !all_finite
    bool all_finite = true;
};

struct Ops {
    const char* name;

    // Three-level stencil update on the interior i in [1, n-1):
    //   vn[i] = v[i] + theta*(v[i]-vp[i])
    //         + beta*((v[i+1]+v[i-1]-2*v[i])*inv_h2 - w[i]*v[i] + src[i])
    // Boundary entries of vn are left untouched.
    void (*leapfrog_interior)(double* vn, const double* v, const double* vp,
                              const double* w, const double* src, double theta,
                              double beta, double inv_h2, std::size_t n);

    // Plain dot product sum_i a[i]*b[i].
    double (*dot)(const double* a, const double* b, std::size_t n);

    // One-pass max|a[i]| plus finiteness flag.
    ScanResult (*scan)(const double* a, std::size_t n);
};

enum class Backend { scalar, avx2 };

bool backend_available(Backend b);
const Ops& ops(Backend b);  // throws std::invalid_argument if unavailable

// Active table: honors the BHWAVE_BACKEND environment variable
// ("scalar" or "avx2") when set, otherwise picks the best available.
const Ops& ops();
Backend active_backend();

}  // namespace bhwave::kernels
