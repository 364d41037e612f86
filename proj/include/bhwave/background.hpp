#pragma once

// Tortoise-coordinate geometry of the exterior region r > 2M: the map
// s(r) = r + 2M log(r - 2M), its numerical inverse, and the coefficient
// functions derived from the lapse F = 1 - 2M/r. The inversion works in
// u = log(r - 2M), so the horizon gap r - 2M stays accurate even where it is
// exponentially below the round-off of r itself.

#include <span>
#include <string>
#include <vector>

namespace bhwave {

// s(r) = r + 2M log(r - 2M). Throws std::domain_error for r <= 2M.
double tortoise(double r, double M);

// Same map expressed through the horizon gap x = r - 2M. For s below about
// -35M the gap drops under the round-off of r itself, so round trips must go
// through this form to keep their precision.
double tortoise_from_gap(double gap, double M);

struct CoefficientSample {
    double s = 0.0;
    double r = 0.0;       // > 2M
    double F = 0.0;       // 1 - 2M/r, in (0,1)
    double Lambda = 0.0;  // r / sqrt(F)
    double W = 0.0;       // 2 M F / r^3
    double f = 0.0;       // F * r^(1-p)
    double rm2M = 0.0;    // r - 2M, accurate near the horizon
};

struct Interval {
    double lo = 0.0, hi = 0.0;
};

struct BandEntry {
    std::string quantity;
    double lo = 0.0, hi = 0.0;  // min/max of the normalized ratio over the range
};

struct SlopeEntry {
    std::string quantity;
    double slope = 0.0;  // least-squares slope of log(quantity) vs s
};

struct BandRangeReport {
    Interval range;
    std::vector<BandEntry> bands;
    std::vector<SlopeEntry> slopes;  // filled only on horizon-side ranges
};

struct BandReport {
    double M = 0.0, p = 0.0;
    std::vector<BandRangeReport> ranges;
};

class Background {
public:
    // Throws std::invalid_argument when M <= 0, s_min >= s_max or tolerance <= 0.
    Background(double M, double s_min, double s_max, double tolerance = 1e-12);

    double mass() const { return M_; }
    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    double tolerance() const { return tol_; }

    // Inverse tortoise map; accepts any finite s (also outside the nominal
    // domain). Throws std::runtime_error if the safeguarded Newton iteration
    // fails to meet the residual tolerance.
    double radius(double s) const;
    double horizon_gap(double s) const;      // r(s) - 2M
    double log_horizon_gap(double s) const;  // log(r(s) - 2M)

    CoefficientSample coefficients(double s, double p) const;

    // Empirical min/max of the asymptotically normalized coefficient ratios
    // over each range, plus fitted log-slopes on horizon-side ranges.
    BandReport asymptotic_band_report(double p, std::span<const Interval> ranges,
                                      std::size_t samples_per_range = 2000) const;

private:
    double M_, s_min_, s_max_, tol_;
    // seed cache for the inversion: u = log(r-2M) sampled uniformly in s
    double cache_s0_ = 0.0, cache_h_ = 0.1;
    std::vector<double> cache_u_;

    double solve_u(double s) const;  // safeguarded Newton on u = log(r-2M)
    double seed_u(double s) const;
};

}  // namespace bhwave
