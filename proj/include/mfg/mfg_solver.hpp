#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfg/pde_solvers.hpp"

namespace mfg {

struct MFGSolution {
    HamiltonianSpec spec;
    ProblemData data;
    SolverConfig config;
    SpaceTimeField u;
    SpaceTimeField m;
    SpaceTimeField drift;        // nodal b_k = grad_p H(t_k, m_k, grad u_k)
    bool control_variant = false; // true when the m dm_H source was active
};

enum class Diagnosis { Converged, SlowOrOscillating, Diverged, InnerFailure };

const char* diagnosis_name(Diagnosis d);

struct ConvergenceReport {
    bool converged = false;
    int iterations = 0;                 // outer iterations, all stages
    std::vector<double> deltas_m;       // sup-norm change of m per outer iteration
    std::vector<double> deltas_u;
    std::vector<double> eps_stages;     // continuation ladder actually run
    std::vector<int> stage_iterations;
    Diagnosis diagnosis = Diagnosis::Converged;
    std::string message;
    double hjb_res_sup = 0.0;
    double fp_res_sup = 0.0;
    double terminal_res = 0.0;
    double mass_err = 0.0;
    BoundsReport bounds;
};

struct PicardOptions {
    double theta = 0.5;                 // relaxation m <- (1-theta) m + theta Phi(m)
    double tol = 1e-9;                  // sup-norm delta of m between outer iterates
    int max_outer = 200;
    std::vector<double> eps_ladder;     // empty: decades from 1e-2 down to spec.eps
    bool control_variant = false;
};

// Drift-free forward solve of the density; the standard initial iterate.
SpaceTimeField heat_flow_density(const HamiltonianSpec& spec, const ProblemData& data,
                                 const SolverConfig& config);

// Damped fixed-point construction mu -> u_mu -> Phi(mu), relaxed by theta,
// with eps-continuation warm starts. Non-convergence is reported, not
// thrown; inner step failures are captured in the report.
std::pair<MFGSolution, ConvergenceReport>
picard_solve(const HamiltonianSpec& spec, const ProblemData& data, const SolverConfig& config,
             const PicardOptions& opts = {},
             const SpaceTimeField* initial_density = nullptr);

struct NewtonOracleOptions {
    double residual_tol = 1e-10;        // sup norm of the stacked residual
    int max_iter = 60;
    double fd_step = 1e-6;              // central-difference Jacobian step
};

class NewtonOracleFailure : public std::runtime_error {
public:
    NewtonOracleFailure(std::string msg, std::vector<double> history)
        : std::runtime_error(std::move(msg)), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

// Independent desk-scale oracle: stacks every equation of the discrete
// system into one residual over (u_0..u_{K-1}, m_1..m_K) and drives it to
// tolerance by damped Newton with a finite-difference Jacobian. Shares only
// the low-level lattice operators with the sweep solvers.
MFGSolution newton_oracle_solve(const HamiltonianSpec& spec, const ProblemData& data,
                                const SolverConfig& config,
                                const NewtonOracleOptions& opts = {},
                                const SpaceTimeField* initial_density = nullptr);

struct Residuals {
    double hjb_sup = 0.0;
    double hjb_l2 = 0.0;
    double fp_sup = 0.0;
    double fp_l2 = 0.0;
    double terminal_sup = 0.0;
    double mass_err = 0.0;               // max_k |integral(m_k) - 1|
};

// Strong-form lattice residuals of the discrete system the solution claims
// to satisfy (regularized forms when spec.eps > 0).
Residuals pde_residuals(const MFGSolution& sol);

} // namespace mfg
