#include "bhwave/numerics.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace bhwave {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need two samples of equal length");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LinearFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    return out;
}

double trapezoid_uniform(std::span<const double> f, double h) {
    if (f.size() < 2) return 0.0;
    double acc = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
    return acc * h;
}

double simpson_uniform(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    if (n == 3) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
    std::size_t m = n;  // samples covered by the paired rule
    double tail = 0.0;
    if ((n - 1) % 2 != 0) {
        // odd panel count: close the last three panels with the 3/8 rule
        tail = 3.0 * h / 8.0 * (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]);
        m = n - 3;
        if (m == 1) return tail;
    }
    double acc = f[0] + f[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return acc * h / 3.0 + tail;
}

namespace {

double adaptive_step(const std::function<double(double)>& f, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

double interp_cubic_uniform(std::span<const double> f, double x0, double h,
                            double x) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
    if (n < 4) throw std::invalid_argument("interp_cubic_uniform: need 4 samples");
    double u = (x - x0) / h;
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(std::floor(u));
    // center a 4-point stencil [i-1, i+2] around the containing cell
    std::ptrdiff_t lo = i - 1;
    if (lo < 0) lo = 0;
    if (lo > n - 4) lo = n - 4;
    const double t = u - static_cast<double>(lo);  // in [-? , 3+?], near [1, 2]
    // Lagrange basis on nodes 0,1,2,3
    const double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
    const double w0 = -t1 * t2 * t3 / 6.0;
    const double w1 = t0 * t2 * t3 / 2.0;
    const double w2 = -t0 * t1 * t3 / 2.0;
    const double w3 = t0 * t1 * t2 / 6.0;
    return w0 * f[lo] + w1 * f[lo + 1] + w2 * f[lo + 2] + w3 * f[lo + 3];
}

}  // namespace bhwave
