#pragma once

#include <span>
#include <string>
#include <vector>

#include "mfg/mfg_solver.hpp"

namespace mfg {

// Executable forms of the integral identities and sign estimates. All
// space-time integrals combine the grid quadrature with a trapezoid rule in
// time, evaluated at the lattice nodes.

// Residual of the identity
//   int g(m(T)) m(T) + int int [ f(m) m + (grad u . grad_p H - H) m ]
//     = int u(0) m0,
// the primary solution certificate. O(dt + h^2) on converged solutions,
// exact up to mass-conservation error when H, f vanish and g is constant.
double energy_identity_residual(const MFGSolution& sol);

struct EnergyTerms {
    double term_fg = 0.0;       // int int f(m) m
    double term_gm = 0.0;       // int g(m(T)) m(T)
    double term_bracket = 0.0;  // int int m (grad u . grad_p H - H)
    double term_H = 0.0;        // int int H(m, grad u)
    // Audit of the a priori bound with caps at L = 2 sup m0: the smallest C
    // with  lhs <= C sup(m0) (int g_L + int int f_L + C).
    double lhs = 0.0;
    double cap_integral = 0.0;  // int g_L + int int f_L
    double smallest_C = 0.0;
};

EnergyTerms energy_terms(const MFGSolution& sol);

// The uniqueness functional: nonnegative for any two positive-density pairs
// whenever the structural uniqueness condition holds; zero iff the pairs
// coincide in (m, grad u) up to the coupling kernels.
double uniqueness_gap(const MFGSolution& sol1, const MFGSolution& sol2);

// Truncation T_k(s) = min(k, max(s, -k)).
double truncate_Tk(double s, double k);
std::vector<double> truncate_Tk(std::span<const double> values, double k);

// Auxiliary ramp family S_n(r) = n S_1(r/n) with piecewise-linear slope:
// identity on [-n, n], slope <= 1, constant beyond 2n in absolute value.
double aux_Sn(double r, double n);
std::vector<double> aux_Sn(std::span<const double> values, double n);

// Diagnostic block for run summaries.
std::string diagnostics_text(const MFGSolution& sol);

} // namespace mfg
