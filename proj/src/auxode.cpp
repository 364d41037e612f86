#include "bhwave/auxode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhwave/numerics.hpp"

namespace bhwave {

Potential curvature_potential(const Background& bg) {
    Potential H;
    const Background* b = &bg;
    H.value = [b](double s) { return b->coefficients(s, 2.0).W; };
    H.decay_a = 3.0;
    H.left_exponential = true;
    H.left_rate = 1.0 / (2.0 * bg.mass());
    return H;
}

AnchoredGrid AnchoredGrid::covering(double s_min, double s_max, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("AnchoredGrid: h must be positive");
    if (!(s_min <= s_max)) throw std::invalid_argument("AnchoredGrid: empty range");
    AnchoredGrid g;
    g.h = h;
    g.n_neg = s_min < 0.0 ? static_cast<std::size_t>(std::ceil(-s_min / h - 1e-12)) : 0;
    g.n_pos = s_max > 0.0 ? static_cast<std::size_t>(std::ceil(s_max / h - 1e-12)) : 0;
    return g;
}

namespace {

struct State2 {
    double q, dq;
};

// One classical RK4 step of q'' = H q across [s, s+h]; H supplied at the
// endpoints and midpoint.
State2 rk4_step(const State2& in, double h, double H0, double Hm, double H1) {
    const double k1q = in.dq, k1d = H0 * in.q;
    const double k2q = in.dq + 0.5 * h * k1d, k2d = Hm * (in.q + 0.5 * h * k1q);
    const double k3q = in.dq + 0.5 * h * k2d, k3d = Hm * (in.q + 0.5 * h * k2q);
    const double k4q = in.dq + h * k3d, k4d = H1 * (in.q + h * k3q);
    return {in.q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
            in.dq + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)};
}

constexpr double kLocalErrorBudget = 1e-8;

// Marches q'' = H q from s=0 outward in the direction of sign(h), filling
// n+1 samples including the seed. A doubled-step Richardson estimate guards
// the fixed step size.
void march(const Potential& H, double h, std::size_t n, State2 seed,
           double* val, double* der) {
    val[0] = seed.q;
    der[0] = seed.dq;
    double s = 0.0;
    double Hl = H.value(0.0);
    if (Hl < 0.0) throw std::invalid_argument("potential must be non-negative");
    State2 cur = seed;
    for (std::size_t i = 0; i < n; ++i) {
        const double Hm = H.value(s + 0.5 * h);
        const double Hr = H.value(s + h);
        if (Hm < 0.0 || Hr < 0.0)
            throw std::invalid_argument("potential must be non-negative");
        const State2 full = rk4_step(cur, h, Hl, Hm, Hr);
        if (i % 8 == 0) {  // sampled Richardson monitor of the fixed step
            const double Hq1 = H.value(s + 0.25 * h);
            const double Hq3 = H.value(s + 0.75 * h);
            const State2 haf = rk4_step(rk4_step(cur, 0.5 * h, Hl, Hq1, Hm),
                                        0.5 * h, Hm, Hq3, Hr);
            const double scale = 1.0 + std::fabs(haf.q) + std::fabs(h * haf.dq);
            const double est = (std::fabs(full.q - haf.q) +
                                std::fabs(h * (full.dq - haf.dq))) / 15.0;
            if (est > kLocalErrorBudget * scale)
                throw std::runtime_error(
                    "auxiliary ODE step size too coarse for error budget");
        }
        cur = full;
        s += h;
        Hl = Hr;
        val[i + 1] = cur.q;
        der[i + 1] = cur.dq;
    }
}

CauchySolution solve_cauchy(const Potential& H, const AnchoredGrid& g,
                            State2 seed) {
    CauchySolution out;
    out.grid = g;
    out.value.resize(g.size());
    out.deriv.resize(g.size());
    const std::size_t z = g.zero_index();
    std::vector<double> lv(g.n_neg + 1), ld(g.n_neg + 1);
    march(H, -g.h, g.n_neg, seed, lv.data(), ld.data());
    march(H, g.h, g.n_pos, seed, out.value.data() + z, out.deriv.data() + z);
    for (std::size_t i = 0; i <= g.n_neg; ++i) {
        out.value[z - i] = lv[i];
        out.deriv[z - i] = ld[i];
    }
    return out;
}

}  // namespace

CauchySolution solve_cauchy_y(const Potential& H, const AnchoredGrid& g) {
    return solve_cauchy(H, g, {1.0, 0.0});
}

CauchySolution solve_cauchy_z(const Potential& H, const AnchoredGrid& g) {
    return solve_cauchy(H, g, {0.0, 1.0});
}

namespace {

// Tail moments of H beyond an anchor S, via the substitution theta = S/x:
//   M0 = int_S^inf H,  M1 = int_S^inf H theta,
//   RQ = int_S^inf H(theta) Q(S,theta) with Q(S,theta) = int_S^theta M1(u) du.
struct TailMoments {
    double M0 = 0.0, M1 = 0.0, RQ = 0.0;
};

double improper_from(const std::function<double(double)>& g, double S) {
    // int_S^inf g = int_0^1 g(S/x) S/x^2 dx; integrand -> 0 at x -> 0 for the
    // decay classes handled here
    return integrate_adaptive(
        [&](double x) {
            const double th = S / x;
            return g(th) * S / (x * x);
        },
        1e-6, 1.0, 1e-15);
}

TailMoments tail_moments(const Potential& H, double S) {
    TailMoments tm;
    tm.M0 = improper_from([&](double th) { return H.value(th); }, S);
    tm.M1 = improper_from([&](double th) { return H.value(th) * th; }, S);
    // geometric mesh for the nested moment
    const double rho = 1.12;
    std::vector<double> th{S}, m1;
    while (th.back() < 2e3 * S) th.push_back(th.back() * rho);
    m1.resize(th.size());
    for (std::size_t i = 0; i < th.size(); ++i)
        m1[i] = improper_from([&](double u) { return H.value(u) * u; }, th[i]);
    std::vector<double> q(th.size(), 0.0);
    for (std::size_t i = 1; i < th.size(); ++i)
        q[i] = q[i - 1] + 0.5 * (m1[i - 1] + m1[i]) * (th[i] - th[i - 1]);
    double rq = 0.0;
    for (std::size_t i = 1; i < th.size(); ++i) {
        const double fa = H.value(th[i - 1]) * q[i - 1];
        const double fb = H.value(th[i]) * q[i];
        rq += 0.5 * (fa + fb) * (th[i] - th[i - 1]);
    }
    tm.RQ = rq;
    return tm;
}

// Self-consistent closure of c = head + int_S^inf H q for a solution with
// q(theta) ~ c theta + ...; `inhom` is 1 for the e-family (z data) and 0 for
// the d-family.
double tail_closure(double head, double qS, double S, const TailMoments& tm,
                    double inhom) {
    const double denom = 1.0 - tm.M1 + S * tm.M0 + tm.RQ;
    return (inhom + head + qS * tm.M0) / denom;
}

struct SideIntegrals {
    double head = 0.0;         // quadrature over the grid side
    double constant = 0.0;     // closed value including tails
    double uncertainty = 0.0;  // estimated tail residual
};

// Right-side improper integral int_0^inf H q with linear-growth closure.
// Extends the march beyond the grid with geometrically growing steps and
// evaluates the closure at two anchors; their spread estimates the residual.
SideIntegrals right_integral(const Potential& H, const CauchySolution& sol,
                             double inhom) {
    const AnchoredGrid& g = sol.grid;
    const std::size_t z = g.zero_index();
    const std::size_t np = g.n_pos;
    std::vector<double> integ(np + 1);
    for (std::size_t i = 0; i <= np; ++i)
        integ[i] = H.value(g.h * static_cast<double>(i)) * sol.value[z + i];
    double head = simpson_uniform(integ, g.h);

    // extension march with per-step Simpson accumulation (Hermite midpoint)
    double s = g.back();
    State2 cur{sol.value.back(), sol.deriv.back()};
    double cum = head;
    const double S_far = std::max(4.0 * std::max(s, 1.0), 2500.0);
    struct Anchor {
        double s, q, cum;
    };
    std::vector<Anchor> anchors{{s, cur.q, cum}};
    double Hl = H.value(s);
    while (s < S_far) {
        const double h = std::clamp(0.012 * s, g.h, 24.0);
        const double Hm = H.value(s + 0.5 * h);
        const double Hr = H.value(s + h);
        const State2 nxt = rk4_step(cur, h, Hl, Hm, Hr);
        const double qmid = 0.5 * (cur.q + nxt.q) + 0.125 * h * (cur.dq - nxt.dq);
        cum += h / 6.0 * (Hl * cur.q + 4.0 * Hm * qmid + Hr * nxt.q);
        cur = nxt;
        s += h;
        Hl = Hr;
        anchors.push_back({s, cur.q, cum});
    }
    const Anchor a1 = anchors.back();
    const Anchor* a2 = &anchors.back();
    for (const Anchor& a : anchors)
        if (a.s >= 0.55 * a1.s) {
            a2 = &a;
            break;
        }
    const TailMoments tm1 = tail_moments(H, a1.s);
    const TailMoments tm2 = tail_moments(H, a2->s);
    const double c1 = tail_closure(a1.cum, a1.q, a1.s, tm1, inhom);
    const double c2 = tail_closure(a2->cum, a2->q, a2->s, tm2, inhom);
    SideIntegrals out;
    out.head = head;
    out.constant = c1;
    // Richardson-style uncertainty: the closure residual decays at least as
    // S^{-a}, so the two-anchor spread overestimates the far-anchor error by
    // the factor (1 - rho^a)/rho^a
    const double rho = std::pow(a2->s / a1.s, H.decay_a);
    out.uncertainty = std::fabs(c1 - c2) * rho / std::max(1.0 - rho, 0.1);
    return out;
}

// Left-side integral int_0^{-inf} H q. For exponentially decaying potentials
// the grid tail is bounded analytically with an envelope fitted on the outer
// 20% of the grid; otherwise the right-side closure is reused mirrored.
SideIntegrals left_integral(const Potential& H, const CauchySolution& sol,
                            double inhom) {
    const AnchoredGrid& g = sol.grid;
    const std::size_t z = g.zero_index();
    const std::size_t nn = g.n_neg;
    if (!H.left_exponential) {
        // mirror through s -> -s and delegate: the mirrored solution carries
        // the negated Cauchy derivative, and the closed slope flips sign back
        Potential Hm;
        Hm.value = [&H](double s) { return H.value(-s); };
        Hm.decay_a = H.decay_a;
        CauchySolution mir;
        mir.grid = AnchoredGrid{g.h, 0, nn};
        mir.value.resize(nn + 1);
        mir.deriv.resize(nn + 1);
        for (std::size_t i = 0; i <= nn; ++i) {
            mir.value[i] = sol.value[z - i];
            mir.deriv[i] = -sol.deriv[z - i];
        }
        const SideIntegrals si = right_integral(Hm, mir, -inhom);
        SideIntegrals out;
        out.head = -si.head;
        out.constant = -si.constant;
        out.uncertainty = si.uncertainty;
        return out;
    }
    std::vector<double> integ(nn + 1);
    for (std::size_t i = 0; i <= nn; ++i)
        integ[i] = H.value(-g.h * static_cast<double>(i)) * sol.value[z - i];
    // int_0^{-inf} = -int_{-inf}^0; the reversed samples run 0 -> -L
    const double head = -simpson_uniform(integ, g.h);
    const double L = g.front();
    const double lam = H.left_rate;
    // envelope fit on the outer 20%
    double C = 0.0, qhat = 0.0;
    const std::size_t i0 = static_cast<std::size_t>(0.8 * static_cast<double>(nn));
    for (std::size_t i = i0; i <= nn; ++i) {
        const double s = -g.h * static_cast<double>(i);
        C = std::max(C, H.value(s) * std::exp(-lam * s));
        qhat = std::max(qhat, std::fabs(sol.value[z - i]) / (1.0 + std::fabs(s)));
    }
    const double tail =
        C * qhat * std::exp(lam * L) * (1.0 + std::fabs(L) + 1.0 / lam) / lam;
    SideIntegrals out;
    out.head = head;
    out.constant = head + inhom;
    out.uncertainty = tail;
    return out;
}

}  // namespace

IntegralConstants integral_constants(const Potential& H, const CauchySolution& y,
                                     const CauchySolution& z) {
    IntegralConstants c;
    const SideIntegrals dp = right_integral(H, y, 0.0);
    const SideIntegrals ep = right_integral(H, z, 1.0);
    const SideIntegrals dm = left_integral(H, y, 0.0);
    const SideIntegrals em = left_integral(H, z, 1.0);
    c.d_plus = dp.constant;
    c.e_plus = ep.constant;
    c.d_minus = dm.constant;
    c.e_minus = em.constant;
    c.tail_uncertainty = std::max(std::max(dp.uncertainty, ep.uncertainty),
                                  std::max(dm.uncertainty, em.uncertainty));
    const double head_scale =
        std::max({std::fabs(dp.head), std::fabs(dm.head), std::fabs(ep.head),
                  std::fabs(em.head), 1e-300});
    if (head_scale > 1e-250 && c.tail_uncertainty > 1e-8 * head_scale)
        throw std::runtime_error("integral tails dominate the quadrature head");
    if (head_scale <= 1e-250) c.tail_uncertainty = 0.0;  // degenerate H == 0
    return c;
}

namespace {

// Marches psi'' = H (psi + D) rightward from a seed deep on the horizon side
// where psi ~ 4 M^2 H D; the growing homogeneous mode is only affine there,
// so seed errors stay subdominant.
std::vector<double> march_psi(const Potential& H, double D, double s_from,
                              double h, std::size_t n, double twoM) {
    std::vector<double> out(n + 1);
    const double H0 = H.value(s_from);
    State2 cur{twoM * twoM * H0 * D, twoM * H0 * D};
    out[0] = cur.q;
    double s = s_from;
    double Hl = H0;
    for (std::size_t i = 0; i < n; ++i) {
        const double Hm = H.value(s + 0.5 * h);
        const double Hr = H.value(s + h);
        // same RK4 with the inhomogeneous shift
        const double k1q = cur.dq, k1d = Hl * (cur.q + D);
        const double k2q = cur.dq + 0.5 * h * k1d,
                     k2d = Hm * (cur.q + 0.5 * h * k1q + D);
        const double k3q = cur.dq + 0.5 * h * k2d,
                     k3d = Hm * (cur.q + 0.5 * h * k2q + D);
        const double k4q = cur.dq + h * k3d, k4d = Hr * (cur.q + h * k3q + D);
        cur = {cur.q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
               cur.dq + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)};
        s += h;
        Hl = Hr;
        out[i + 1] = cur.q;
    }
    return out;
}

}  // namespace

Phi0Result build_phi0(const Background& bg, const AnchoredGrid& g) {
    const Potential H = curvature_potential(bg);
    const double M = bg.mass();
    // internal grid: deep enough left for exponentially clean tails
    const double want_left = std::min(g.front(), -60.0 * M);
    const AnchoredGrid gi =
        AnchoredGrid::covering(want_left, std::max(g.back(), 1.0), g.h);
    const CauchySolution y = solve_cauchy_y(H, gi);
    const CauchySolution z = solve_cauchy_z(H, gi);
    const IntegralConstants c = integral_constants(H, y, z);

    // D = phi(0) + int_{-inf}^0 theta H phi with phi = e- y - d- z
    const std::size_t zi = gi.zero_index();
    std::vector<double> integ(gi.n_neg + 1);
    for (std::size_t i = 0; i <= gi.n_neg; ++i) {
        const double s = -gi.h * static_cast<double>(i);
        const double phi = c.e_minus * y.value[zi - i] - c.d_minus * z.value[zi - i];
        integ[i] = s * H.value(s) * phi;
    }
    // substituting theta = -sigma keeps the sign: the samples over sigma in
    // [0, |L|] integrate to int_{-inf}^0 theta H phi directly
    const double Dtail = simpson_uniform(integ, gi.h);
    const double D = c.e_minus + Dtail;
    if (!(D > 0.0)) throw std::runtime_error("build_phi0: D must be positive");
    const double b = c.e_minus * c.d_plus - c.d_minus * c.e_plus;
    if (!(b > 0.0)) throw std::runtime_error("build_phi0: b must be positive");

    // psi0 marched from deep on the horizon side on the same lattice
    const double lam = H.left_rate;
    const double psi_from = std::min(g.front(), -36.0 * M) - 2.0 * g.h;
    const AnchoredGrid gp = AnchoredGrid::covering(psi_from, g.back(), g.h);
    std::vector<double> psi_full =
        march_psi(H, D, gp.front(), gp.h, gp.size() - 1, 1.0 / lam);
    // slice onto the requested grid (same lattice, shifted origin)
    Phi0Result res;
    res.grid = g;
    res.constants = c;
    res.b = b;
    res.D = D;
    res.psi0.resize(g.size());
    res.phi0.resize(g.size());
    const std::ptrdiff_t off =
        static_cast<std::ptrdiff_t>(gp.n_neg) - static_cast<std::ptrdiff_t>(g.n_neg);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double psi = psi_full[static_cast<std::size_t>(off) + i];
        if (!(psi > 0.0))
            throw std::runtime_error("build_phi0: psi0 positivity violated");
        res.psi0[i] = psi;
        res.phi0[i] = psi + D;
    }
    return res;
}

std::vector<double> build_psi0(std::span<const double> phi0, double D) {
    std::vector<double> out(phi0.size());
    for (std::size_t i = 0; i < phi0.size(); ++i) out[i] = phi0[i] - D;
    return out;
}

Phi1Result build_phi1(const Potential& H, double A, const AnchoredGrid& g) {
    if (!(A > 0.0)) throw std::invalid_argument("build_phi1: A must be positive");
    // Riccati march of m = phi'/phi and log phi from far enough left that the
    // pure e^{A s} branch dominates
    const double margin = 12.0 / A;
    const std::size_t pre = static_cast<std::size_t>(std::ceil(margin / g.h));
    const std::size_t total = pre + g.size() - 1;
    double s = g.front() - static_cast<double>(pre) * g.h;
    double m = A, lg = A * s;
    Phi1Result res;
    res.grid = g;
    res.phi1.resize(g.size());
    res.log_phi1.resize(g.size());
    res.dlog_phi1.resize(g.size());
    auto record = [&](std::size_t step) {
        if (step >= pre) {
            const std::size_t i = step - pre;
            res.log_phi1[i] = lg;
            res.dlog_phi1[i] = m;
        }
    };
    record(0);
    double Hl = H.value(s);
    for (std::size_t step = 0; step < total; ++step) {
        const double h = g.h;
        const double Hm = H.value(s + 0.5 * h);
        const double Hr = H.value(s + h);
        auto f = [&](double Hv, double mv) { return (Hv + A * A) - mv * mv; };
        const double k1m = f(Hl, m), k1l = m;
        const double k2m = f(Hm, m + 0.5 * h * k1m), k2l = m + 0.5 * h * k1m;
        const double k3m = f(Hm, m + 0.5 * h * k2m), k3l = m + 0.5 * h * k2m;
        const double k4m = f(Hr, m + h * k3m), k4l = m + h * k3m;
        lg += h / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l);
        m += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        if (!std::isfinite(m) || !std::isfinite(lg))
            throw std::runtime_error("build_phi1: non-finite Riccati state");
        s += h;
        Hl = Hr;
        record(step + 1);
    }
    const double lg0 = res.log_phi1[g.zero_index()];
    for (std::size_t i = 0; i < g.size(); ++i) {
        res.log_phi1[i] -= lg0;
        res.phi1[i] = std::exp(res.log_phi1[i]);
        if (!(res.phi1[i] > 0.0) || !(res.dlog_phi1[i] > 0.0))
            throw std::runtime_error("build_phi1: positivity violated");
    }
    return res;
}

Phi1Result build_phi1(const Background& bg, double A, const AnchoredGrid& g) {
    return build_phi1(curvature_potential(bg), A, g);
}

AuxFunctions build_aux(const Background& bg, double s_min, double s_max,
                       double h, double A) {
    const AnchoredGrid g = AnchoredGrid::covering(s_min, s_max, h);
    if (A <= 0.0) A = 1.0 / (2.0 * bg.mass());
    Phi0Result p0 = build_phi0(bg, g);
    Phi1Result p1 = build_phi1(bg, A, g);
    AuxFunctions aux;
    aux.grid = g;
    aux.phi0 = std::move(p0.phi0);
    aux.psi0 = std::move(p0.psi0);
    aux.phi1 = std::move(p1.phi1);
    aux.log_phi1 = std::move(p1.log_phi1);
    aux.b = p0.b;
    aux.D = p0.D;
    aux.d_plus = p0.constants.d_plus;
    aux.d_minus = p0.constants.d_minus;
    aux.e_plus = p0.constants.e_plus;
    aux.e_minus = p0.constants.e_minus;
    aux.A = A;
    aux.M = bg.mass();
    return aux;
}

AuxOnGrid resample_aux(const AuxFunctions& aux, double s0, double dx,
                       std::size_t n) {
    if (n == 0) throw std::invalid_argument("resample_aux: empty grid");
    const double lo = aux.grid.front(), hi = aux.grid.back();
    if (s0 < lo - 1e-9 || s0 + dx * static_cast<double>(n - 1) > hi + 1e-9)
        throw std::invalid_argument("resample_aux: target grid not covered");
    std::vector<double> log_psi(aux.grid.size());
    for (std::size_t i = 0; i < aux.grid.size(); ++i)
        log_psi[i] = std::log(aux.psi0[i]);
    AuxOnGrid out;
    out.s0 = s0;
    out.dx = dx;
    out.D = aux.D;
    out.b = aux.b;
    out.A = aux.A;
    out.M = aux.M;
    out.psi0.resize(n);
    out.phi0.resize(n);
    out.phi1.resize(n);
    out.log_phi1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s =
            std::clamp(s0 + dx * static_cast<double>(i), lo, hi);
        const double lp = interp_cubic_uniform(log_psi, lo, aux.grid.h, s);
        const double lf = interp_cubic_uniform(aux.log_phi1, lo, aux.grid.h, s);
        out.psi0[i] = std::exp(lp);
        out.phi0[i] = out.psi0[i] + aux.D;
        out.log_phi1[i] = lf;
        out.phi1[i] = std::exp(lf);
    }
    return out;
}

}  // namespace bhwave
