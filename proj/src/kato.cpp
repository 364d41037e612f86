#include "bhwave/kato.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhwave/numerics.hpp"

namespace bhwave {

double critical_exponent(int n) {
    if (n < 2) throw std::invalid_argument("critical_exponent: n must be >= 2");
    const double nn = static_cast<double>(n);
    return ((nn + 1.0) + std::sqrt((nn + 1.0) * (nn + 1.0) + 8.0 * (nn - 1.0))) /
           (2.0 * (nn - 1.0));
}

RecurrenceResult exponent_recurrence(double a0, double p, double q, int k) {
    if (k < 0) throw std::invalid_argument("exponent_recurrence: k must be >= 0");
    RecurrenceResult r;
    r.a.reserve(static_cast<std::size_t>(k) + 1);
    r.p.reserve(static_cast<std::size_t>(k) + 1);
    r.a.push_back(a0);
    r.p.push_back(p);
    for (int j = 0; j < k; ++j) {
        r.a.push_back(p * r.a.back() - q + 2.0);
        r.p.push_back(r.p.back() * r.p.back());
    }
    return r;
}

double delta_from(double delta1, double p, double M) {
    return delta1 * (p - 2.0) / (2.0 * M * p);
}

Thresholds thresholds(const KatoParams& kp) {
    Thresholds t;
    t.x0 = 2.0 * std::pow(kp.C, 1.0 / (kp.p - 1.0));
    t.x0_T1 = 2.0 * std::exp(-kp.delta * kp.T1 / (kp.p - 1.0));
    return t;
}

Schedule schedule(double eps, double p, double M, double R, double C0,
                  double delta1) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("schedule: eps must lie in (0,1)");
    const double p_star = 1.0 + std::sqrt(2.0);
    if (!(p > 1.0 && p < p_star))
        throw std::domain_error("schedule: p must lie in (1, 1+sqrt(2))");
    Schedule s;
    if (p > 2.0) {
        if (!(delta1 > 0.0 && delta1 < 1.0 && delta1 < M))
            throw std::invalid_argument("schedule: need delta1 in (0,1) and < M");
        s.T1 = std::exp(C0 / eps);
        s.s0 = -(1.0 + delta1) * s.T1 - R;
    } else if (p < 2.0) {
        s.T1 = 0.0;  // unused on this branch
        s.s0 = std::exp(C0 / eps);
    } else {
        s.T1 = 0.0;
        s.s0 = 0.0;  // no placement hypothesis needed at p = 2
    }
    return s;
}

namespace {

struct OdeState {
    double V, Vp;
};

// Cash-Karp 4(5) embedded pair for V'' = c (t+R)^{-q} V^p.
struct CashKarp {
    double p, q, R, c;

    OdeState f(double t, const OdeState& y) const {
        const double vp = y.V <= 0.0 ? 0.0 : std::exp(p * std::log(y.V));
        return {y.Vp, c * std::pow(t + R, -q) * vp};
    }

    // returns the 5th-order solution and the embedded error estimate
    OdeState step(double t, const OdeState& y, double h, double* err) const {
        auto ax = [](const OdeState& a, double s, const OdeState& b) {
            return OdeState{a.V + s * b.V, a.Vp + s * b.Vp};
        };
        const OdeState k1 = f(t, y);
        const OdeState k2 = f(t + h / 5.0, ax(y, h / 5.0, k1));
        OdeState tmp = ax(ax(y, 3.0 * h / 40.0, k1), 9.0 * h / 40.0, k2);
        const OdeState k3 = f(t + 3.0 * h / 10.0, tmp);
        tmp = ax(ax(ax(y, 3.0 * h / 10.0, k1), -9.0 * h / 10.0, k2), 6.0 * h / 5.0, k3);
        const OdeState k4 = f(t + 3.0 * h / 5.0, tmp);
        tmp = ax(ax(ax(ax(y, -11.0 * h / 54.0, k1), 5.0 * h / 2.0, k2),
                    -70.0 * h / 27.0, k3),
                 35.0 * h / 27.0, k4);
        const OdeState k5 = f(t + h, tmp);
        tmp = ax(ax(ax(ax(ax(y, 1631.0 * h / 55296.0, k1), 175.0 * h / 512.0, k2),
                       575.0 * h / 13824.0, k3),
                    44275.0 * h / 110592.0, k4),
                 253.0 * h / 4096.0, k5);
        const OdeState k6 = f(t + 7.0 * h / 8.0, tmp);
        const OdeState y5 = ax(
            ax(ax(ax(y, 37.0 * h / 378.0, k1), 250.0 * h / 621.0, k3),
               125.0 * h / 594.0, k4),
            512.0 * h / 1771.0, k6);
        OdeState y4 = ax(
            ax(ax(ax(ax(y, 2825.0 * h / 27648.0, k1), 18575.0 * h / 48384.0, k3),
                  13525.0 * h / 55296.0, k4),
               277.0 * h / 14336.0, k5),
            0.25 * h, k6);
        *err = std::fabs(y5.V - y4.V) + std::fabs(h * (y5.Vp - y4.Vp));
        return y5;
    }
};

}  // namespace

LifespanResult lifespan_ode(double p, double q, double a, double R, double c,
                            double V0, double V0p, double t_cap, double tol) {
    if (!(p > 1.0)) throw std::invalid_argument("lifespan_ode: p must exceed 1");
    if (!(R > 0.0) || !(c > 0.0))
        throw std::invalid_argument("lifespan_ode: R and c must be positive");
    const CashKarp sys{p, q, R, c};
    const double V_cap = 1e12;
    const double hyp_const = std::min(1.0, V0 / std::pow(R, a));
    LifespanResult res;
    OdeState y{V0, V0p};
    double t = 0.0, h = 1e-3;
    const double h_floor = 1e-14 * std::max(1.0, t_cap);
    std::size_t steps = 0;
    while (t < t_cap) {
        if (y.V >= V_cap) break;
        if (t + h > t_cap) h = t_cap - t;
        double err = 0.0;
        const OdeState ynew = sys.step(t, y, h, &err);
        const double scale =
            tol * (1.0 + std::fabs(y.V) + std::fabs(h * y.Vp));
        if (err > scale && h > h_floor) {
            h = std::max(0.2 * h, 0.9 * h * std::pow(scale / err, 0.25));
            continue;
        }
        t += h;
        y = ynew;
        ++steps;
        if (err > 0.0)
            h = std::min(5.0 * h, 0.9 * h * std::pow(scale / err, 0.2));
        else
            h *= 5.0;
        if (h <= h_floor) {
            // singular time reached within step resolution
            y.V = V_cap;
            break;
        }
        if (y.V > 0.0 &&
            y.V < hyp_const * std::pow(t + R, a) * (1.0 - 1e-9))
            res.growth_hypothesis_held = false;
        if (steps > 50'000'000)
            throw std::runtime_error("lifespan_ode: step budget exhausted");
    }
    res.t_end = t;
    res.V_end = y.V;
    res.steps = steps;
    if (y.V >= V_cap) {
        res.blown_up = true;
        // local power-law remainder: V ~ A (T-t)^{-2/(p-1)} gives
        // T - t = (2/(p-1)) V / V'
        const double rem = y.Vp > 0.0 ? (2.0 / (p - 1.0)) * y.V / y.Vp : 0.0;
        res.T = t + rem;
    }
    return res;
}

BootstrapReport bootstrap_trace(const DiagnosticsSeries& series, double q,
                                double a0, double eps0, int max_stage) {
    const DiagnosticsMeta& m = series.meta;
    const double p = m.p;
    const double R = m.R;
    const double log_eps = std::log(m.eps);
    BootstrapReport rep;
    const RecurrenceResult rec = exponent_recurrence(a0, p, q, max_stage);
    // usable window: positive U after the initial transient
    std::vector<double> lt, lu;  // log(t+R), p*log U
    for (const DiagnosticsSample& s : series.samples) {
        if (!(s.U > 0.0) || s.t <= 0.0) continue;
        lt.push_back(std::log(s.t + R));
        lu.push_back(p * std::log(s.U));
    }
    if (lt.size() < 5)
        throw std::runtime_error("bootstrap_trace: insufficient window");
    for (int k = 0; k <= max_stage; ++k) {
        BootstrapStage st;
        st.k = k;
        st.a_k = rec.a[static_cast<std::size_t>(k)];
        st.p_k = rec.p[static_cast<std::size_t>(k)];
        st.log_c_k = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < lt.size(); ++i) {
            const double bound = st.p_k * log_eps + (st.a_k - 2.0) * lt[i];
            st.log_c_k = std::min(st.log_c_k, lu[i] - bound);
        }
        st.positive = std::isfinite(st.log_c_k);
        rep.stages.push_back(st);
    }
    // slope over the growth window: after the startup transient, before the
    // under-resolved last stretch
    const std::size_t i0 = lt.size() / 5;
    const std::size_t i1 = (9 * lt.size()) / 10;
    std::vector<double> gx(lt.begin() + i0, lt.begin() + i1);
    std::vector<double> gy(lu.begin() + i0, lu.begin() + i1);
    if (gx.size() >= 3) rep.measured_slope = fit_line(gx, gy).slope;
    rep.slope_lower_bound = 2.0 - p - eps0;
    rep.consistent = rep.measured_slope >= rep.slope_lower_bound - 0.1;
    return rep;
}

}  // namespace bhwave
