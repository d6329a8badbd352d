#pragma once

#include "mfg/diagnostics.hpp"
#include "mfg/mfg_solver.hpp"

namespace mfg {

// Control companion of the game system: minimize
//   J(m, w) = int int [ tilde_L(m, w) + F(m) ] + int G(m(T))
// over pairs satisfying  d_t m - Lap m + div(w) = 0, m(0) = m0.
// Discretely, J uses the right-endpoint time rule
//   J_h = dt sum_{k=1..K} < tilde_L(t_k, m_k, w_k) + F(t_k, m_k) > + < G(m_K) >
// and the constraint couples w_{k+1} to the step ending at k+1, which makes
// the backward sweep below the exact adjoint of the discrete constraint.
// The whole module requires an unregularized Hamiltonian (eps == 0): the
// damped regularization is not convex in p, so the Legendre machinery only
// applies to the raw family.
struct ControlPair {
    SpaceTimeField m;   // density, positive
    SpaceTimeField w;   // momentum, dim components; w_0 is carried but inert
};

// J_h as above; domain error on nonpositive density.
double objective_J(const ControlPair& pair, const HamiltonianSpec& spec,
                   const ProblemData& data);

// Sup-norm residual of the discrete constraint, including the initial match.
double feasibility_residual(const ControlPair& pair, const ProblemData& data);

// Backward linear sweep
//   u_K = g(m_K),  (I - dt Lap) u_k = u_{k+1} + dt [ f(m_{k+1}) + dm_tilde_L(m_{k+1}, w_{k+1}) ].
SpaceTimeField adjoint_solve(const ControlPair& pair, const HamiltonianSpec& spec,
                             const ProblemData& data, const SolverConfig& config);

// Exact derivative of J_h along a feasible direction (dm(0) = 0):
//   D = dt sum_{k=1..K} < grad u_{k-1} + grad_w tilde_L(t_k, m_k, w_k), dw_k >.
double gateaux_derivative(const ControlPair& pair, const ControlPair& direction,
                          const HamiltonianSpec& spec, const ProblemData& data,
                          const SolverConfig& config);

// Propagates an arbitrary momentum perturbation through the linearized
// constraint (dm_0 = 0), producing a feasible direction.
ControlPair make_tangent(const SpaceTimeField& w_tilde);

ControlPair add_scaled(const ControlPair& pair, const ControlPair& dir, double theta);

// Momentum pair induced by a solved system: w_{k+1} = -m_{k+1} grad_p H(t_{k+1}, m_{k+1}, grad u_k).
ControlPair induced_pair(const MFGSolution& sol);

// Solves the optimality system (the game system plus the m dm_H source)
// with the same fixed-point driver, then recovers the minimizing pair.
std::pair<MFGSolution, ConvergenceReport>
mftc_solve(const HamiltonianSpec& spec, const ProblemData& data, const SolverConfig& config,
           const PicardOptions& opts = {}, const SpaceTimeField* initial_density = nullptr);

struct CompareReport {
    double dist_u = 0.0;       // sup |u_mfg - u_mftc|
    double dist_m = 0.0;
    double J_mftc = 0.0;
    double J_mfg_pair = 0.0;   // J at the game solution's induced pair
    ConvergenceReport mfg_report;
    ConvergenceReport mftc_report;
    std::string to_text() const;
};

CompareReport compare_mfg_mftc(const HamiltonianSpec& spec, const ProblemData& data,
                               const SolverConfig& config, const PicardOptions& opts = {});

} // namespace mfg
