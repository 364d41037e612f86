#pragma once

// Exponent arithmetic of the blow-up comparison machinery: the critical
// exponent, the bootstrap recurrence, the absorption thresholds, the data
// placement schedule, the comparison ODE V'' = c (t+R)^{-q} V^p with adaptive
// stepping, and the stage fits along a simulated trajectory.

#include <cstddef>
#include <vector>

#include "bhwave/diagnostics.hpp"

namespace bhwave {

// Positive root of (n-1) p^2 - (n+1) p - 2 = 0.
double critical_exponent(int n);

struct RecurrenceResult {
    std::vector<double> a;  // a_0 .. a_k
    std::vector<double> p;  // p_0 = p, p_{j+1} = p_j^2
};
RecurrenceResult exponent_recurrence(double a0, double p, double q, int k);

struct KatoParams {
    double p = 2.0;
    double q = 3.0;   // default 3(p-1) at p=2
    double a = 1.9;   // default 4-p-eps0
    double R = 1.0;
    double C = 1.0;   // absorption constant
    double delta = 0.0;
    double delta1 = 0.5;
    double T1 = 0.0;
    double eps = 0.5;
    double C0 = 1.0;

    bool divergence_condition() const { return (p - 1.0) * a > q - 2.0; }
};

// delta = delta1 (p-2) / (2 M p), meaningful for p > 2.
double delta_from(double delta1, double p, double M);

struct Thresholds {
    double x0 = 0.0;     // 2 C^{1/(p-1)}
    double x0_T1 = 0.0;  // 2 e^{-delta T1/(p-1)}
};
Thresholds thresholds(const KatoParams& kp);

struct Schedule {
    double T1 = 0.0;
    double s0 = 0.0;
};
// Placement of the data center: deep horizon side for p in (2, 1+sqrt2),
// far right side for p in (1,2), unconstrained (0) at p = 2.
// Throws std::domain_error for p outside (1, 1+sqrt2).
Schedule schedule(double eps, double p, double M, double R, double C0,
                  double delta1);

struct LifespanResult {
    bool blown_up = false;
    double T = 0.0;      // crossing time plus the local power-law remainder
    double t_end = 0.0;  // last integrated time
    double V_end = 0.0;
    std::size_t steps = 0;
    bool growth_hypothesis_held = true;  // V(t) >= min(1, V0/R^a) (t+R)^a
};

// Integrates V'' = c (t+R)^{-q} V^p with an embedded adaptive pair until V
// crosses 1e12 or t reaches t_cap.
LifespanResult lifespan_ode(double p, double q, double a, double R, double c,
                            double V0, double V0p, double t_cap,
                            double tol = 1e-8);

struct BootstrapStage {
    int k = 0;
    double a_k = 0.0;
    double p_k = 0.0;
    double log_c_k = 0.0;  // log of the best constant; -inf if no valid sample
    bool positive = false;
};

struct BootstrapReport {
    std::vector<BootstrapStage> stages;
    double measured_slope = 0.0;     // log U^p vs log(t+R) on the growth window
    double slope_lower_bound = 0.0;  // 2 - p - eps0
    bool consistent = false;         // measured >= bound - 0.1
};

// Stage fits U(t)^p >= c_k eps^{p_k} (t+R)^{a_k-2} over the recorded window,
// evaluated in log space so deep stages cannot underflow.
BootstrapReport bootstrap_trace(const DiagnosticsSeries& series, double q,
                                double a0, double eps0 = 0.1, int max_stage = 3);

}  // namespace bhwave
