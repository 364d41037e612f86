#include "bhwave/wavesolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhwave/kernels.hpp"
#include "bhwave/numerics.hpp"

namespace bhwave {

void Scenario::validate_and_fill() {
    if (!(p > 1.0)) throw std::invalid_argument("scenario: p must exceed 1");
    if (!(M > 0.0)) throw std::invalid_argument("scenario: M must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("scenario: eps must be positive");
    if (!(R > 0.0)) throw std::invalid_argument("scenario: R must be positive");
    if (dx == 0.0) dx = R / 100.0;
    if (!(dx > 0.0)) throw std::invalid_argument("scenario: dx must be positive");
    if (!(dx <= R / 10.0 + 1e-15))
        throw std::invalid_argument("scenario: dx must not exceed R/10");
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw std::invalid_argument("scenario: cfl must lie in (0,1]");
    if (!(t_max > 0.0)) throw std::invalid_argument("scenario: t_max must be positive");
    if (!(blowup_threshold > 0.0))
        throw std::invalid_argument("scenario: blowup_threshold must be positive");
    if (sample_every < 1)
        throw std::invalid_argument("scenario: sample_every must be at least 1");
}

CoefficientTable CoefficientTable::from_background(const Background& bg, double p,
                                                   double s0, double dx,
                                                   std::size_t n) {
    CoefficientTable t;
    t.s0 = s0;
    t.dx = dx;
    t.W.resize(n);
    t.f.resize(n);
    t.r.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CoefficientSample c = bg.coefficients(s0 + dx * static_cast<double>(i), p);
        t.W[i] = c.W;
        t.f[i] = c.f;
        t.r[i] = c.r;
    }
    return t;
}

const char* to_string(BlowupReport::Trigger t) {
    switch (t) {
        case BlowupReport::Trigger::none: return "none";
        case BlowupReport::Trigger::threshold: return "threshold";
        case BlowupReport::Trigger::non_finite: return "nan";
        case BlowupReport::Trigger::dt_floor: return "adaptive-dt-floor";
    }
    return "none";
}

std::pair<std::vector<double>, std::vector<double>> make_initial_data(
    const Scenario& sc, double grid_s0, double dx, std::size_t n) {
    std::vector<double> v0(n, 0.0);
    const double amp = sc.eps * 35.0 / (32.0 * sc.R);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (grid_s0 + dx * static_cast<double>(i) - sc.s0) / sc.R;
        if (std::fabs(x) <= 1.0) {
            const double q = 1.0 - x * x;
            v0[i] = amp * q * q * q;
        }
    }
    return {v0, v0};
}

namespace {

// |v|^p as exp(p log|v|), zero at v = 0 (p need not be an integer)
inline double abs_pow(double v, double p) {
    const double a = std::fabs(v);
    if (a == 0.0) return 0.0;
    return std::exp(p * std::log(a));
}

void fill_source(std::vector<double>& src, const std::vector<double>& v,
                 const CoefficientTable& coeff, const Scenario& sc) {
    const std::size_t n = v.size();
    if (!sc.nonlinearity_enabled) {
        std::fill(src.begin(), src.end(), 0.0);
        return;
    }
    for (std::size_t i = 0; i < n; ++i)
        src[i] = v[i] == 0.0 ? 0.0 : coeff.f[i] * abs_pow(v[i], sc.p);
}

}  // namespace

void step(WaveState& state, const CoefficientTable& coeff, const Scenario& sc,
          double dt) {
    const std::size_t n = state.v_curr.size();
    static thread_local std::vector<double> src, next;
    src.resize(n);
    next.resize(n);
    fill_source(src, state.v_curr, coeff, sc);
    const double theta = dt / state.dt_prev;
    const double beta = 0.5 * dt * (dt + state.dt_prev);
    const double inv_h2 = 1.0 / (state.dx * state.dx);
    kernels::ops().leapfrog_interior(next.data(), state.v_curr.data(),
                                     state.v_prev.data(), coeff.W.data(),
                                     src.data(), theta, beta, inv_h2, n);
    next.front() = 0.0;
    next.back() = 0.0;
    state.v_prev.swap(state.v_curr);
    state.v_curr.swap(next);
    state.t += dt;
    state.dt_prev = dt;
}

namespace {

double extrapolate_T(std::span<const std::pair<double, double>> hist, double p,
                     double fallback) {
    // fit sup^{-(p-1)/2} ~ a - b t over the final growth decade; the root a/b
    // is the singular time of the frozen power law
    if (hist.size() < 4) return fallback;
    const double last = hist.back().second;
    std::size_t begin = hist.size();
    while (begin > 0 && hist[begin - 1].second >= 0.1 * last) --begin;
    const std::size_t m = hist.size() - begin;
    if (m < 4) return fallback;
    std::vector<double> ts(m), ws(m);
    for (std::size_t i = 0; i < m; ++i) {
        ts[i] = hist[begin + i].first;
        ws[i] = std::pow(hist[begin + i].second, -0.5 * (p - 1.0));
    }
    const LinearFit fit = fit_line(ts, ws);
    if (!(fit.slope < 0.0)) return fallback;
    const double T = -fit.intercept / fit.slope;
    return T >= hist.back().first ? T : fallback;
}

}  // namespace

RunResult run(const Scenario& sc_in, const Background& bg,
              const AuxFunctions& aux) {
    Scenario sc = sc_in;
    sc.validate_and_fill();
    const double grid_s0 = sc.domain_min();
    const std::size_t n =
        static_cast<std::size_t>(
            std::ceil((sc.domain_max() - grid_s0) / sc.dx - 1e-9)) + 1;
    const CoefficientTable coeff =
        CoefficientTable::from_background(bg, sc.p, grid_s0, sc.dx, n);
    const AuxOnGrid ax = resample_aux(aux, grid_s0, sc.dx, n);

    RunResult out;
    DiagnosticsSeries& series = out.series;
    series.meta.grid_s0 = grid_s0;
    series.meta.dx = sc.dx;
    series.meta.n = n;
    series.meta.p = sc.p;
    series.meta.M = sc.M;
    series.meta.eps = sc.eps;
    series.meta.R = sc.R;
    series.meta.s0_data = sc.s0;
    series.meta.D = aux.D;
    series.meta.nonlinearity_enabled = sc.nonlinearity_enabled;
    {
        const EnvelopeReport env = weight_envelope_report(bg, aux, sc.p);
        series.meta.holder_C_chain = env.C_weight_chain;
        series.meta.holder_C_mass = env.C_weight_mass;
    }

    auto [v0, v1] = make_initial_data(sc, grid_s0, sc.dx, n);
    {
        std::vector<double> both(n);
        for (std::size_t i = 0; i < n; ++i) both[i] = v0[i] + v1[i];
        series.meta.kappa = functional_F1(both, ax.log_phi1, 0.0, sc.M, sc.dx) / sc.eps;
        for (std::size_t i = 0; i < n; ++i)
            both[i] = v1[i] + v0[i] / (2.0 * sc.M);
        series.meta.kappa_ode =
            functional_F1(both, ax.log_phi1, 0.0, sc.M, sc.dx) / sc.eps;
    }

    const auto& K = kernels::ops();
    const double dt0 = sc.cfl * sc.dx;
    const double sample_dt = dt0 * static_cast<double>(sc.sample_every);
    const double dt_floor = 1e-9 * dt0;

    auto record = [&](const WaveState& st, bool initial, std::span<const double> vt0) {
        DiagnosticsSample smp;
        smp.t = st.t;
        smp.F0 = functional_F0(st.v_curr, ax.psi0, sc.dx);
        smp.F1 = functional_F1(st.v_curr, ax.log_phi1, st.t, sc.M, sc.dx);
        smp.U = functional_U(st.v_curr, coeff.f, ax.psi0, sc.p, sc.dx);
        smp.l2_norm = l2_norm_grid(st.v_curr, sc.dx);
        smp.sup_norm = K.scan(st.v_curr.data(), n).max_abs;
        smp.int_vW = integral_vW(st.v_curr, coeff.W, sc.dx);
        // staggered two-level energy; the initial record uses the analytic
        // time derivative instead
        double kin = 0.0, grad = 0.0, pot = 0.0;
        const double inv_dx = 1.0 / sc.dx;
        if (initial) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double dv = (st.v_curr[i + 1] - st.v_curr[i]) * inv_dx;
                grad += dv * dv;
            }
            for (std::size_t i = 0; i < n; ++i) {
                kin += vt0[i] * vt0[i];
                pot += coeff.W[i] * st.v_curr[i] * st.v_curr[i];
            }
        } else {
            const double inv_dt = 1.0 / st.dt_prev;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double a = (st.v_curr[i + 1] - st.v_curr[i]) * inv_dx;
                const double b = (st.v_prev[i + 1] - st.v_prev[i]) * inv_dx;
                grad += a * b;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double dv = (st.v_curr[i] - st.v_prev[i]) * inv_dt;
                kin += dv * dv;
                pot += coeff.W[i] * st.v_curr[i] * st.v_prev[i];
            }
        }
        smp.linear_energy = 0.5 * (kin + grad + pot) * sc.dx;
        // light-cone containment of the support; the margin covers the
        // evanescent stencil tail beyond the continuum cone (group velocities
        // of the scheme stay below 1, leaving only a super-exponentially
        // decaying precursor of a few dozen cells)
        const double margin = std::max(1.0, 48.0 * sc.dx);
        const double lo = sc.s0 - sc.R - st.t - margin;
        const double hi = sc.s0 + sc.R + st.t + margin;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::fabs(st.v_curr[i]) > 1e-14) {
                const double s = grid_s0 + sc.dx * static_cast<double>(i);
                if (s < lo || s > hi) {
                    series.meta.support_contained = false;
                    break;
                }
            }
        }
        series.samples.push_back(smp);
    };

    WaveState st;
    st.grid_s0 = grid_s0;
    st.dx = sc.dx;
    st.v_prev = v0;

    record(WaveState{0.0, dt0, grid_s0, sc.dx, v0, v0}, true, v1);
    series.meta.F1_initial = series.samples.front().F1;
    series.sup_history.emplace_back(0.0, K.scan(v0.data(), n).max_abs);

    // Taylor start preserving second order
    {
        std::vector<double> src(n);
        fill_source(src, v0, coeff, sc);
        st.v_curr.resize(n);
        const double inv_h2 = 1.0 / (sc.dx * sc.dx);
        st.v_curr.front() = 0.0;
        st.v_curr.back() = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double lap = (v0[i + 1] - 2.0 * v0[i] + v0[i - 1]) * inv_h2;
            const double acc = lap - coeff.W[i] * v0[i] + src[i];
            st.v_curr[i] = v0[i] + dt0 * v1[i] + 0.5 * dt0 * dt0 * acc;
        }
        st.t = dt0;
        st.dt_prev = dt0;
    }

    BlowupReport& rep = out.report;
    std::size_t next_sample = 1;
    while (true) {
        const kernels::ScanResult scan = K.scan(st.v_curr.data(), n);
        if (!scan.all_finite) {
            rep.detected = true;
            rep.trigger = BlowupReport::Trigger::non_finite;
            rep.t_trigger = st.t;
            break;
        }
        series.sup_history.emplace_back(st.t, scan.max_abs);
        if (scan.max_abs > sc.blowup_threshold) {
            rep.detected = true;
            rep.trigger = BlowupReport::Trigger::threshold;
            rep.t_trigger = st.t;
            break;
        }
        if (st.t >= next_sample * sample_dt - 1e-9 * dt0) {
            record(st, false, {});
            ++next_sample;
        }
        if (st.t >= sc.t_max - 1e-9 * dt0) break;
        double dt = dt0;
        if (sc.nonlinearity_enabled && scan.max_abs > 0.0) {
            const double cap = 0.1 * std::pow(scan.max_abs, -0.5 * (sc.p - 1.0));
            dt = std::min(dt, cap);
        }
        // land exactly on sample times and on t_max
        const double t_next_sample = next_sample * sample_dt;
        if (st.t + dt > t_next_sample) dt = t_next_sample - st.t;
        if (st.t + dt > sc.t_max) dt = sc.t_max - st.t;
        if (dt < dt_floor) {
            rep.detected = true;
            rep.trigger = BlowupReport::Trigger::dt_floor;
            rep.t_trigger = st.t;
            break;
        }
        step(st, coeff, sc, dt);
    }
    if (rep.detected) {
        rep.T_est = extrapolate_T(series.sup_history, sc.p, rep.t_trigger);
        rep.refinement_history.emplace_back(sc.dx, rep.T_est);
    }
    return out;
}

std::vector<double> v_to_u(const WaveState& state, const CoefficientTable& coeff) {
    std::vector<double> u(state.v_curr.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = state.v_curr[i] / coeff.r[i];
    return u;
}

double discrete_G_positivity(const CoefficientTable& coeff,
                             const std::vector<std::vector<double>>& trials) {
    double worst = std::numeric_limits<double>::infinity();
    const double dx = coeff.dx;
    for (const auto& h : trials) {
        if (h.size() != coeff.size())
            throw std::invalid_argument("discrete_G_positivity: trial size mismatch");
        double acc = 0.0;
        double prev = 0.0;  // zero-padded left end
        for (std::size_t i = 0; i < h.size(); ++i) {
            const double d = (h[i] - prev) / dx;
            acc += d * d + coeff.W[i] * h[i] * h[i];
            prev = h[i];
        }
        acc += (prev / dx) * (prev / dx);  // closing difference to the zero pad
        worst = std::min(worst, acc * dx);
    }
    return worst;
}

}  // namespace bhwave
