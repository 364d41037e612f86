#pragma once

// Explicit leapfrog integration of v_tt + G v = f |v|^p on a uniform s-grid
// with homogeneous Dirichlet ends that the compactly supported solution never
// reaches (unit propagation speed plus the domain margin rule). Near blow-up
// the step shrinks with sup|v| so the singular time stays resolved.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bhwave/auxode.hpp"
#include "bhwave/background.hpp"
#include "bhwave/diagnostics.hpp"

namespace bhwave {

struct Scenario {
    double p = 2.0;
    double M = 1.0;
    double eps = 0.5;
    double s0 = 10.0;
    double R = 2.0;
    double dx = 0.0;  // 0 requests the default R/100
    double cfl = 0.9;
    double t_max = 100.0;
    double blowup_threshold = 1e8;
    bool nonlinearity_enabled = true;
    int sample_every = 10;  // record stride in steps

    // Throws std::invalid_argument naming the violated invariant; fills dx.
    void validate_and_fill();

    double domain_min() const { return s0 - R - t_max - 5.0; }
    double domain_max() const { return s0 + R + t_max + 5.0; }
};

// Frozen per-grid coefficient arrays; immutable and shareable across runs.
struct CoefficientTable {
    double s0 = 0.0, dx = 0.0;
    std::vector<double> W, f, r;

    std::size_t size() const { return W.size(); }
    CoefficientTableView view() const { return {s0, dx, W, f, r}; }
    static CoefficientTable from_background(const Background& bg, double p,
                                            double s0, double dx, std::size_t n);
};

struct WaveState {
    double t = 0.0;
    double dt_prev = 0.0;
    double grid_s0 = 0.0, dx = 0.0;
    std::vector<double> v_curr, v_prev;
};

struct BlowupReport {
    enum class Trigger { none, threshold, non_finite, dt_floor };
    bool detected = false;
    double T_est = 0.0;      // power-law extrapolated singular time
    double t_trigger = 0.0;  // raw trigger time
    Trigger trigger = Trigger::none;
    std::vector<std::pair<double, double>> refinement_history;  // (dx, T_est)
};

const char* to_string(BlowupReport::Trigger t);

// C^2 bump data v0 = v1 = eps*(35/(32R))*(1-((s-s0)/R)^2)^3 on |s-s0|<=R.
std::pair<std::vector<double>, std::vector<double>> make_initial_data(
    const Scenario& sc, double grid_s0, double dx, std::size_t n);

// One leapfrog step with the given new dt; updates state in place.
void step(WaveState& state, const CoefficientTable& coeff, const Scenario& sc,
          double dt);

struct RunResult {
    DiagnosticsSeries series;
    BlowupReport report;
};

// Integrates to t_max or blow-up, recording diagnostics every sample stride.
// Deterministic for a fixed scenario. The aux tables must cover the domain.
RunResult run(const Scenario& sc, const Background& bg, const AuxFunctions& aux);

// u = v / r on the state grid.
std::vector<double> v_to_u(const WaveState& state, const CoefficientTable& coeff);

// min over trials of sum((D h)^2 + W h^2) dx with forward differences and
// zero-padded ends; trials are compactly supported grid functions.
double discrete_G_positivity(const CoefficientTable& coeff,
                             const std::vector<std::vector<double>>& trials);

}  // namespace bhwave
