#include "bhwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhwave/kernels.hpp"
#include "bhwave/numerics.hpp"

namespace bhwave {

namespace {

// trapezoid weight: interior 1, ends 1/2
inline double trap_dot(std::span<const double> a, std::span<const double> b,
                       double dx) {
    const std::size_t n = a.size();
    if (n < 2) return 0.0;
    double acc = kernels::ops().dot(a.data(), b.data(), n);
    acc -= 0.5 * (a.front() * b.front() + a.back() * b.back());
    return acc * dx;
}

}  // namespace

double functional_F0(std::span<const double> v, std::span<const double> psi0,
                     double dx) {
    return trap_dot(v, psi0, dx);
}

double functional_F1(std::span<const double> v, std::span<const double> log_phi1,
                     double t, double M, double dx) {
    // evaluated as sum v * exp(log phi1 - t/2M): immune to overflow of the
    // weight on wide grids
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double shift = -t / (2.0 * M);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0.0) continue;
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        acc += w * v[i] * std::exp(log_phi1[i] + shift);
    }
    return acc * dx;
}

double functional_U(std::span<const double> v, std::span<const double> f,
                    std::span<const double> psi0, double p, double dx) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(v[i]);
        if (a == 0.0) continue;
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        acc += w * f[i] * std::exp(p * std::log(a)) * psi0[i];
    }
    acc *= dx;
    return acc <= 0.0 ? 0.0 : std::exp(std::log(acc) / p);
}

double integral_vW(std::span<const double> v, std::span<const double> W,
                   double dx) {
    return trap_dot(v, W, dx);
}

double l2_norm_grid(std::span<const double> v, double dx) {
    return std::sqrt(std::max(0.0, trap_dot(v, v, dx)));
}

ResidualReport check_F0_identity(const DiagnosticsSeries& series, int stride,
                                 double t_lo, double t_hi) {
    if (stride < 1) throw std::invalid_argument("check_F0_identity: bad stride");
    const auto& smp = series.samples;
    const std::size_t k = static_cast<std::size_t>(stride);
    if (smp.size() < 2 * k + 3)
        throw std::runtime_error("check_F0_identity: insufficient samples");
    double num = 0.0, den = 0.0;
    std::size_t count = 0;
    for (std::size_t i = k; i + k < smp.size(); i += 1) {
        if (smp[i].t < t_lo || smp[i + k].t > t_hi) continue;
        const double dt = smp[i + k].t - smp[i].t;
        const double dtm = smp[i].t - smp[i - k].t;
        if (std::fabs(dt - dtm) > 1e-9 * dt) continue;  // uniform samples only
        const double f0pp = (smp[i + k].F0 - 2.0 * smp[i].F0 + smp[i - k].F0) / (dt * dt);
        double rhs = series.meta.D * smp[i].int_vW;
        if (series.meta.nonlinearity_enabled)
            rhs += std::pow(smp[i].U, series.meta.p);
        const double d = f0pp - rhs;
        num += d * d;
        den += rhs * rhs;
        ++count;
    }
    if (count < 3) throw std::runtime_error("check_F0_identity: insufficient samples");
    ResidualReport rep;
    rep.interior_samples = count;
    rep.rel_l2_residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    return rep;
}

HolderReport check_holder_chain(const DiagnosticsSeries& series,
                                const CoefficientTableView& coeff,
                                std::span<const double> psi0) {
    const DiagnosticsMeta& m = series.meta;
    const double p = m.p;
    const double expo = -1.0 / (p - 1.0);
    const std::size_t n = coeff.f.size();
    // prefix sums of the trapezoid mass of f^{-1/(p-1)} psi0
    std::vector<double> wgt(n);
    for (std::size_t i = 0; i < n; ++i)
        wgt[i] = std::pow(coeff.f[i], expo) * psi0[i];
    HolderReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (const DiagnosticsSample& s : series.samples) {
        const double lo = m.s0_data - s.t - m.R;
        const double hi = m.s0_data + s.t + m.R;
        std::size_t i0 = lo <= coeff.s0
                             ? 0
                             : static_cast<std::size_t>((lo - coeff.s0) / coeff.dx);
        std::size_t i1 = static_cast<std::size_t>(
            std::min(static_cast<double>(n - 1),
                     std::ceil((hi - coeff.s0) / coeff.dx)));
        if (i1 <= i0 + 1) continue;
        const double mass =
            trapezoid_uniform(std::span(wgt).subspan(i0, i1 - i0 + 1), coeff.dx);
        const double rhs = s.U * std::pow(mass, (p - 1.0) / p);
        if (s.F0 > rhs) {
            const double viol = (s.F0 - rhs) / std::max(rhs, 1e-300);
            rep.worst_rel_violation = std::max(rep.worst_rel_violation, viol);
            if (viol > 1e-10) rep.holds = false;
        }
        if (s.F0 > 0.0) rep.min_slack = std::min(rep.min_slack, rhs / s.F0);
        rep.monitor.push_back(
            std::pow(s.U, p) * std::pow(s.t + m.R, 3.0 * (p - 1.0)) /
            std::max(std::pow(s.F0, p), 1e-300));
    }
    return rep;
}

F1BoundReport check_F1_lower_bound(const DiagnosticsSeries& series,
                                   double tolerance) {
    const DiagnosticsMeta& m = series.meta;
    F1BoundReport rep;
    rep.floor = 0.5 * std::min(m.F1_initial, m.kappa * m.eps * m.M);
    rep.min_F1 = std::numeric_limits<double>::infinity();
    for (const DiagnosticsSample& s : series.samples) {
        rep.min_F1 = std::min(rep.min_F1, s.F1);
        if (s.F1 < rep.floor && rep.first_violation_t < 0.0) {
            rep.holds = false;
            rep.first_violation_t = s.t;
        }
    }
    // integral form with the sharp data constant kappa_ode: the nonlinear
    // source is non-negative, so e^{t/M} F1(t) - F1(0) stays above
    // kappa_ode * eps * M * (e^{t/M} - 1) up to solver error
    rep.integral_form_margin = std::numeric_limits<double>::infinity();
    for (const DiagnosticsSample& s : series.samples) {
        if (s.t == 0.0) continue;
        const double growth = std::expm1(s.t / m.M);  // e^{t/M} - 1
        const double lhs = std::exp(s.t / m.M) * s.F1 - m.F1_initial;
        const double rhs = m.kappa_ode * m.eps * m.M * growth * (1.0 - tolerance);
        const double margin = (lhs - rhs) / std::max(std::fabs(rhs), 1e-300);
        rep.integral_form_margin = std::min(rep.integral_form_margin, margin);
        if (lhs < rhs) rep.integral_form_holds = false;
    }
    return rep;
}

BlowupFit fit_blowup_exponent(
    std::span<const std::pair<double, double>> sup_history, double p) {
    const std::size_t total = sup_history.size();
    if (total < 10) throw std::runtime_error("fit_blowup_exponent: short history");
    const double last = sup_history.back().second;
    std::size_t begin = total;
    while (begin > 0 && sup_history[begin - 1].second >= 0.1 * last) --begin;
    const std::size_t mcount = total - begin;
    if (mcount < 10)
        throw std::runtime_error("fit_blowup_exponent: growth window too short");
    std::vector<double> ts(mcount), ls(mcount);
    for (std::size_t i = 0; i < mcount; ++i) {
        ts[i] = sup_history[begin + i].first;
        ls[i] = std::log(sup_history[begin + i].second);
    }
    const double t_last = ts.back();
    // golden-section over the singular time; alpha from the inner linear fit
    auto ssr = [&](double T) {
        std::vector<double> xs(mcount);
        for (std::size_t i = 0; i < mcount; ++i) xs[i] = std::log(T - ts[i]);
        const LinearFit f = fit_line(xs, ls);
        double acc = 0.0;
        for (std::size_t i = 0; i < mcount; ++i) {
            const double d = ls[i] - (f.intercept + f.slope * xs[i]);
            acc += d * d;
        }
        return acc;
    };
    const double span = std::max(t_last - ts.front(), 1e-6);
    double lo = t_last + 1e-9 * span, hi = t_last + 2.0 * span;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = ssr(x1), f2 = ssr(x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * span; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = ssr(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = ssr(x2);
        }
    }
    BlowupFit fit;
    fit.T_fit = 0.5 * (lo + hi);
    std::vector<double> xs(mcount);
    for (std::size_t i = 0; i < mcount; ++i) xs[i] = std::log(fit.T_fit - ts[i]);
    fit.alpha_fit = -fit_line(xs, ls).slope;
    fit.expected_alpha = 2.0 / (p - 1.0);
    return fit;
}

EnvelopeReport weight_envelope_report(const Background& bg,
                                      const AuxFunctions& aux, double p) {
    EnvelopeReport rep;
    const AnchoredGrid& g = aux.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = g.at(i);
        const CoefficientSample c = bg.coefficients(s, p);
        const double env = (1.0 + std::fabs(s)) * (1.0 + std::fabs(s));
        const double chain = std::pow(c.f * aux.psi0[i], -1.0 / (p - 1.0)) *
                             std::pow(c.W, p / (p - 1.0)) * env;
        const double mass = std::pow(c.f, -1.0 / (p - 1.0)) * aux.psi0[i] / env;
        rep.C_weight_chain = std::max(rep.C_weight_chain, chain);
        rep.C_weight_mass = std::max(rep.C_weight_mass, mass);
    }
    return rep;
}

}  // namespace bhwave
