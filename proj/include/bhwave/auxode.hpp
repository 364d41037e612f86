#pragma once

// Auxiliary functions of the reduced operator G = -d^2/ds^2 + W:
//   phi0 with G phi0 = 0, linear growth b*s on the right, limit D on the left;
//   psi0 = phi0 - D, positive and exponentially small toward the horizon;
//   phi1 with (G + A^2) phi1 = 0, pure e^{A s} growth at both ends.
// Built from two Cauchy solutions y, z seeded at s = 0 plus tail-corrected
// improper integrals, following a marching construction that keeps psi0
// accurate in relative terms even where it is far below round-off of phi0.

#include <functional>
#include <span>
#include <vector>

#include "bhwave/background.hpp"

namespace bhwave {

// Potential for the auxiliary ODEs. `value` must be callable on all of R;
// the metadata steers the improper-integral tail handling.
struct Potential {
    std::function<double(double)> value;
    double decay_a = 3.0;           // right side: H <= C (1+s)^{-decay_a}, >= 3
    bool left_exponential = false;  // H ~ C e^{left_rate * s} as s -> -inf
    double left_rate = 0.0;
};

Potential curvature_potential(const Background& bg);  // H = W, rate 1/(2M)

// Uniform grid anchored so that s = 0 is a node: points (i - n_neg) * h.
struct AnchoredGrid {
    double h = 0.0;
    std::size_t n_neg = 0, n_pos = 0;

    static AnchoredGrid covering(double s_min, double s_max, double h);
    std::size_t size() const { return n_neg + n_pos + 1; }
    double at(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(n_neg)) * h;
    }
    double front() const { return -static_cast<double>(n_neg) * h; }
    double back() const { return static_cast<double>(n_pos) * h; }
    std::size_t zero_index() const { return n_neg; }
};

struct CauchySolution {
    AnchoredGrid grid;
    std::vector<double> value, deriv;
};

// -y'' + H y = 0 with y(0)=1, y'(0)=0, integrated both directions from 0 by
// classical fixed-step RK4 (the potential is evaluated at half steps).
// Throws std::runtime_error when a doubled-step local error estimate exceeds
// the budget, or std::invalid_argument when H is negative on a sample.
CauchySolution solve_cauchy_y(const Potential& H, const AnchoredGrid& g);

// Same equation with z(0)=0, z'(0)=1.
CauchySolution solve_cauchy_z(const Potential& H, const AnchoredGrid& g);

struct IntegralConstants {
    double d_plus = 0.0, d_minus = 0.0;  // d± = ∫_0^{±inf} H y
    double e_plus = 1.0, e_minus = 1.0;  // e± = 1 + ∫_0^{±inf} H z
    double tail_uncertainty = 0.0;       // estimated residual of the tail model
};

// Quadrature of the four constants with tail closure beyond the grid.
// Throws std::runtime_error if the estimated tail residual exceeds
// 1e-8 of the head integral.
IntegralConstants integral_constants(const Potential& H, const CauchySolution& y,
                                     const CauchySolution& z);

struct Phi0Result {
    AnchoredGrid grid;
    std::vector<double> phi0;  // = psi0 + D
    std::vector<double> psi0;  // marched from the horizon side, positive
    double b = 0.0, D = 0.0;
    IntegralConstants constants;
};

// Construction of phi0 for the curvature potential of `bg`. Also yields the
// combination coefficients and D. Throws on positivity violations.
Phi0Result build_phi0(const Background& bg, const AnchoredGrid& g);

// Literal pointwise difference; kept as the definitional accessor.
std::vector<double> build_psi0(std::span<const double> phi0, double D);

struct Phi1Result {
    AnchoredGrid grid;
    std::vector<double> phi1;       // normalized so phi1(0) = 1
    std::vector<double> log_phi1;   // exact log of the normalized samples
    std::vector<double> dlog_phi1;  // phi1'/phi1 > 0
};

// Positive solution of -phi'' + (H + A^2) phi = 0 growing like e^{A s} on both
// ends, integrated in Riccati form (m = phi'/phi) from the left boundary so no
// overflow occurs for any grid size.
Phi1Result build_phi1(const Potential& H, double A, const AnchoredGrid& g);
Phi1Result build_phi1(const Background& bg, double A, const AnchoredGrid& g);

struct AuxFunctions {
    AnchoredGrid grid;
    std::vector<double> phi0, psi0, phi1, log_phi1;
    double b = 0.0, D = 0.0;
    double d_plus = 0.0, d_minus = 0.0, e_plus = 0.0, e_minus = 0.0;
    double A = 0.0;
    double M = 0.0;
};

// Full construction over a grid covering [s_min, s_max] with spacing h.
// A defaults to 1/(2M) (pass A <= 0 to request the default).
AuxFunctions build_aux(const Background& bg, double s_min, double s_max,
                       double h, double A = -1.0);

// Aux tables resampled onto an arbitrary uniform grid s0 + i*dx (cubic
// interpolation in log space for the positive functions).
struct AuxOnGrid {
    double s0 = 0.0, dx = 0.0;
    std::vector<double> psi0, phi0, phi1, log_phi1;
    double D = 0.0, b = 0.0, A = 0.0, M = 0.0;
};
AuxOnGrid resample_aux(const AuxFunctions& aux, double s0, double dx,
                       std::size_t n);

}  // namespace bhwave
