#pragma once

// Small shared numerical utilities: least-squares lines, composite quadrature
// on uniform samples, adaptive quadrature for smooth integrands, and cubic
// resampling between uniform grids.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bhwave {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares y ~ slope*x + intercept. Requires at least two points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Composite trapezoid over uniformly spaced samples with spacing h.
double trapezoid_uniform(std::span<const double> f, double h);

// Composite Simpson over uniformly spaced samples; the final interval is
// handled with a 3-point closed rule on the last panel when the sample count
// is even, keeping the composite rule O(h^4).
double simpson_uniform(std::span<const double> f, double h);

// Adaptive Simpson for smooth scalar integrands on [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol);

// 4-point Lagrange interpolation of samples f[i] at x0 + i*h, evaluated at x.
// Clamps the stencil at the ends; x must lie inside the sampled range.
double interp_cubic_uniform(std::span<const double> f, double x0, double h,
                            double x);

}  // namespace bhwave
