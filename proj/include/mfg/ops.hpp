#pragma once

#include <span>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/kernels.hpp"

namespace mfg {

// Discrete calculus on one time slice. gradient uses centered differences
// with wraparound (periodic) or ghost-point reflection (Neumann);
// divergence_adjoint is the exact negative adjoint of gradient with respect
// to the quadrature inner product, so discrete integration by parts
//   <gradient(phi), v> + <phi, divergence_adjoint(v)> = 0
// holds to machine precision and conservative solves preserve mass exactly.

void laplacian(std::span<const double> f, const Grid& g, std::span<double> out);
std::vector<double> laplacian(std::span<const double> f, const Grid& g);

void gradient(std::span<const double> f, const Grid& g, std::span<double> out);
std::vector<double> gradient(std::span<const double> f, const Grid& g);

void divergence_adjoint(std::span<const double> v, const Grid& g, std::span<double> out);
std::vector<double> divergence_adjoint(std::span<const double> v, const Grid& g);

// Quadrature: plain h^dim sums on periodic grids, trapezoid weights on
// Neumann grids.
double integrate(std::span<const double> f, const Grid& g);
double inner(std::span<const double> f, std::span<const double> w, const Grid& g);

struct Norms {
    double sup = 0.0;
    double inf = 0.0;
    double lp = 0.0;
};

Norms norms(std::span<const double> f, const Grid& g, double p = 2.0);
double lp_norm(std::span<const double> f, const Grid& g, double p);
double sup_abs(std::span<const double> f);

} // namespace mfg
