#include "bhwave/background.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhwave/numerics.hpp"

namespace bhwave {

double tortoise(double r, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("tortoise: M must be positive");
    if (!(r > 2.0 * M)) throw std::domain_error("tortoise: r must exceed 2M");
    return r + 2.0 * M * std::log(r - 2.0 * M);
}

double tortoise_from_gap(double gap, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("tortoise: M must be positive");
    if (!(gap > 0.0)) throw std::domain_error("tortoise: gap must be positive");
    return (2.0 * M + gap) + 2.0 * M * std::log(gap);
}

namespace {

// Residual of the inversion in u = log(r - 2M):
//   g(u) = e^u + 2M u + 2M - s,  g'(u) = e^u + 2M > 0,  g'' > 0.
// g is increasing and convex, so Newton converges globally once the iterate
// is right of the root; a bisection bracket guards the first overshoot.
double newton_u(double s, double M, double u0, double tol) {
    const double twoM = 2.0 * M;
    double u = u0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double eu = std::exp(u);
        const double g = eu + twoM * u + twoM - s;
        if (g > 0.0) hi = std::min(hi, u);
        else lo = std::max(lo, u);
        const double step = g / (eu + twoM);
        double next = u - step;
        if (!(next > lo && next < hi) && std::isfinite(lo) && std::isfinite(hi))
            next = 0.5 * (lo + hi);
        const double scale = 1.0 + std::fabs(u);
        if (std::fabs(next - u) <= 0.25 * tol * scale) {
            u = next;
            // verify the residual in s units: s(u) = e^u + 2M u + 2M
            const double back = std::exp(u) + twoM * u + twoM;
            if (std::fabs(back - s) <= tol * (1.0 + std::fabs(s))) return u;
        }
        u = next;
    }
    throw std::runtime_error("inverse tortoise iteration failed to converge");
}

double asymptotic_seed(double s, double M) {
    const double twoM = 2.0 * M;
    // right of the throat the gap is ~ s - 2M log s; left of it, log-gap is linear in s
    if (s - twoM > 1.0) return std::log(s - twoM);
    return (s - twoM) / twoM;
}

}  // namespace

Background::Background(double M, double s_min, double s_max, double tolerance)
    : M_(M), s_min_(s_min), s_max_(s_max), tol_(tolerance) {
    if (!(M > 0.0)) throw std::invalid_argument("Background: M must be positive");
    if (!(s_min < s_max)) throw std::invalid_argument("Background: empty s-domain");
    if (!(tolerance > 0.0)) throw std::invalid_argument("Background: tolerance must be positive");
    // seed cache at 0.1 spacing across the domain; u varies by at most
    // ~h/(2M) per cell, so interpolated seeds put Newton in its quadratic
    // basin everywhere
    cache_h_ = 0.1;
    const std::size_t n = static_cast<std::size_t>(std::ceil((s_max_ - s_min_) / cache_h_)) + 2;
    cache_s0_ = s_min_;
    cache_u_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = cache_s0_ + cache_h_ * static_cast<double>(i);
        cache_u_[i] = newton_u(s, M_, asymptotic_seed(s, M_), tol_);
    }
}

double Background::seed_u(double s) const {
    if (s >= cache_s0_ && !cache_u_.empty()) {
        const double x = (s - cache_s0_) / cache_h_;
        const std::size_t i = static_cast<std::size_t>(x);
        if (i + 1 < cache_u_.size()) {
            const double t = x - static_cast<double>(i);
            return (1.0 - t) * cache_u_[i] + t * cache_u_[i + 1];
        }
    }
    return asymptotic_seed(s, M_);
}

double Background::solve_u(double s) const {
    if (!std::isfinite(s)) throw std::domain_error("inverse tortoise: s must be finite");
    return newton_u(s, M_, seed_u(s), tol_);
}

double Background::radius(double s) const { return 2.0 * M_ + std::exp(solve_u(s)); }

double Background::horizon_gap(double s) const { return std::exp(solve_u(s)); }

double Background::log_horizon_gap(double s) const { return solve_u(s); }

CoefficientSample Background::coefficients(double s, double p) const {
    if (!(p > 1.0)) throw std::invalid_argument("coefficients: p must exceed 1");
    const double x = std::exp(solve_u(s));  // r - 2M
    CoefficientSample c;
    c.s = s;
    c.rm2M = x;
    c.r = 2.0 * M_ + x;
    c.F = x / c.r;  // 1 - 2M/r without forming the difference
    c.Lambda = c.r / std::sqrt(c.F);
    c.W = 2.0 * M_ * c.F / (c.r * c.r * c.r);
    c.f = c.F * std::pow(c.r, 1.0 - p);
    return c;
}

BandReport Background::asymptotic_band_report(double p, std::span<const Interval> ranges,
                                              std::size_t samples_per_range) const {
    BandReport rep;
    rep.M = M_;
    rep.p = p;
    const double twoM = 2.0 * M_;
    for (const Interval& rg : ranges) {
        if (!(rg.lo < rg.hi)) throw std::invalid_argument("band report: empty range");
        BandRangeReport rr;
        rr.range = rg;
        const std::size_t ns = std::max<std::size_t>(samples_per_range, 8);
        const double h = (rg.hi - rg.lo) / static_cast<double>(ns - 1);
        std::vector<double> ss(ns);
        std::vector<CoefficientSample> cs(ns);
        for (std::size_t i = 0; i < ns; ++i) {
            ss[i] = rg.lo + h * static_cast<double>(i);
            cs[i] = coefficients(ss[i], p);
        }
        auto band = [&](const std::string& name, auto&& ratio) {
            BandEntry e;
            e.quantity = name;
            e.lo = std::numeric_limits<double>::infinity();
            e.hi = -e.lo;
            for (std::size_t i = 0; i < ns; ++i) {
                const double v = ratio(cs[i]);
                e.lo = std::min(e.lo, v);
                e.hi = std::max(e.hi, v);
            }
            rr.bands.push_back(e);
        };
        if (rg.lo >= 2.0) {
            band("r/s", [](const CoefficientSample& c) { return c.r / c.s; });
            band("(1-F)*s", [](const CoefficientSample& c) { return (1.0 - c.F) * c.s; });
            band("Lambda/s", [](const CoefficientSample& c) { return c.Lambda / c.s; });
            band("W*s^3", [](const CoefficientSample& c) { return c.W * c.s * c.s * c.s; });
            band("f*s^(p-1)", [p](const CoefficientSample& c) {
                return c.f * std::pow(c.s, p - 1.0);
            });
        } else if (rg.hi <= -2.0) {
            band("(r-2M)*e^(-s/2M)", [twoM](const CoefficientSample& c) {
                return c.rm2M * std::exp(-c.s / twoM);
            });
            band("F*e^(-s/2M)", [twoM](const CoefficientSample& c) {
                return c.F * std::exp(-c.s / twoM);
            });
            band("Lambda*e^(s/4M)", [twoM](const CoefficientSample& c) {
                return c.Lambda * std::exp(c.s / (2.0 * twoM));
            });
            band("W*e^(-s/2M)", [twoM](const CoefficientSample& c) {
                return c.W * std::exp(-c.s / twoM);
            });
            band("f*e^(-s/2M)", [twoM](const CoefficientSample& c) {
                return c.f * std::exp(-c.s / twoM);
            });
            auto slope = [&](const std::string& name, auto&& logval) {
                std::vector<double> ys(ns);
                for (std::size_t i = 0; i < ns; ++i) ys[i] = logval(cs[i]);
                rr.slopes.push_back({name, fit_line(ss, ys).slope});
            };
            slope("log(r-2M)", [this](const CoefficientSample& c) {
                return std::log(c.rm2M);
            });
            slope("log F", [](const CoefficientSample& c) { return std::log(c.F); });
            slope("log W", [](const CoefficientSample& c) { return std::log(c.W); });
            slope("log f", [](const CoefficientSample& c) { return std::log(c.f); });
        } else {
            band("r", [](const CoefficientSample& c) { return c.r; });
            band("F", [](const CoefficientSample& c) { return c.F; });
            band("Lambda", [](const CoefficientSample& c) { return c.Lambda; });
            band("W", [](const CoefficientSample& c) { return c.W; });
            band("f", [](const CoefficientSample& c) { return c.f; });
        }
        rep.ranges.push_back(std::move(rr));
    }
    return rep;
}

}  // namespace bhwave
