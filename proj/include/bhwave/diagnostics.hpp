#pragma once

// Weighted averages of the field against the auxiliary functions and the
// consistency checks built on them: the second-derivative identity of the
// psi0 average, the Hölder chain between the averages, the exponential-weight
// lower bound, and the post-blow-up power-law fit.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bhwave/auxode.hpp"
#include "bhwave/background.hpp"

namespace bhwave {

// Non-owning view of per-grid coefficient arrays (see CoefficientTable).
struct CoefficientTableView {
    double s0 = 0.0, dx = 0.0;
    std::span<const double> W, f, r;
};

struct DiagnosticsSample {
    double t = 0.0;
    double F0 = 0.0;             // ∫ v psi0
    double F1 = 0.0;             // e^{-t/2M} ∫ v phi1
    double U = 0.0;              // (∫ f |v|^p psi0)^{1/p}
    double l2_norm = 0.0;
    double sup_norm = 0.0;
    double linear_energy = 0.0;  // staggered two-level energy
    double int_vW = 0.0;         // ∫ v W (needed by the F0'' identity)
};

struct DiagnosticsMeta {
    std::uint64_t scenario_hash = 0;
    double grid_s0 = 0.0, dx = 0.0;
    std::size_t n = 0;
    double p = 0.0, M = 0.0, eps = 0.0, R = 0.0, s0_data = 0.0;
    double D = 0.0;
    double kappa = 0.0;      // ∫ (v0+v1) phi1 / eps
    double kappa_ode = 0.0;  // ∫ (v1 + v0/2M) phi1 / eps (sharp ODE constant)
    double holder_C_chain = 0.0;  // fitted envelope constants of the
    double holder_C_mass = 0.0;   // Hölder weights on this background
    double F1_initial = 0.0;
    bool nonlinearity_enabled = true;
    bool support_contained = true;  // light-cone containment held at samples
};

struct DiagnosticsSeries {
    std::vector<DiagnosticsSample> samples;
    DiagnosticsMeta meta;
    // per-step (t, sup|v|) history for blow-up fitting
    std::vector<std::pair<double, double>> sup_history;
};

// Trapezoid functionals on the solver grid.
double functional_F0(std::span<const double> v, std::span<const double> psi0,
                     double dx);
double functional_F1(std::span<const double> v, std::span<const double> log_phi1,
                     double t, double M, double dx);
double functional_U(std::span<const double> v, std::span<const double> f,
                    std::span<const double> psi0, double p, double dx);
double integral_vW(std::span<const double> v, std::span<const double> W,
                   double dx);
double l2_norm_grid(std::span<const double> v, double dx);

struct ResidualReport {
    double rel_l2_residual = 0.0;
    std::size_t interior_samples = 0;
};

// Compares centered second differences of F0 (at `stride` times the record
// interval) against U^p + D ∫ v W, over samples with t in [t_lo, t_hi] (the
// pre-blow-up window for detected runs). Throws when fewer than five samples
// fit.
ResidualReport check_F0_identity(const DiagnosticsSeries& series, int stride = 2,
                                 double t_lo = 0.0, double t_hi = 1e300);

struct HolderReport {
    bool holds = true;
    double worst_rel_violation = 0.0;  // max of (F0 - rhs)/rhs over samples
    double min_slack = 0.0;            // min of rhs/F0 over samples with F0 > 0
    std::vector<double> monitor;       // U^p (t+R)^{3(p-1)} / F0^p per sample
};

// Exact Hölder comparison F0 <= U * (∫_supp f^{-1/(p-1)} psi0)^{(p-1)/p}
// with the support window [s0 - t - R, s0 + t + R].
HolderReport check_holder_chain(const DiagnosticsSeries& series,
                                const CoefficientTableView& coeff,
                                std::span<const double> psi0);

struct F1BoundReport {
    bool holds = true;
    double floor = 0.0;          // 0.5 * min(F1(0), kappa * eps * M)
    double min_F1 = 0.0;
    double first_violation_t = -1.0;
    bool integral_form_holds = true;
    double integral_form_margin = 0.0;
};

F1BoundReport check_F1_lower_bound(const DiagnosticsSeries& series,
                                   double tolerance = 0.02);

struct BlowupFit {
    double T_fit = 0.0;
    double alpha_fit = 0.0;
    double expected_alpha = 0.0;  // 2/(p-1)
};

// Least-squares fit sup|v| ~ C (T - t)^{-alpha} over the final growth decade.
// Throws std::runtime_error when the growth window is too short.
BlowupFit fit_blowup_exponent(std::span<const std::pair<double, double>> sup_history,
                              double p);

// Envelope constants of the Hölder weights, fitted as the sup of
// lhs / envelope over a grid (finite on the horizon side only for p > 2).
struct EnvelopeReport {
    double C_weight_chain = 0.0;  // (f psi0)^{-1/(p-1)} W^{p/(p-1)} * (1+|s|)^2
    double C_weight_mass = 0.0;   // f^{-1/(p-1)} psi0 / (1+|s|)^2
};
EnvelopeReport weight_envelope_report(const Background& bg,
                                      const AuxFunctions& aux, double p);

}  // namespace bhwave
