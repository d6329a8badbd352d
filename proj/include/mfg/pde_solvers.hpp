#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"
#include "mfg/hamiltonian.hpp"
#include "mfg/problem_data.hpp"

namespace mfg {

// Both sweeps advance the same discrete system:
//   backward, k = K-1..0:
//     u_k - dt Lap u_k + dt H(t_{k+1}, m_{k+1}, grad u_k) = u_{k+1} + dt f(t_{k+1}, m_{k+1})
//     u_K = g(m_K)
//   forward, k = 0..K-1:
//     m_{k+1} - dt Lap m_{k+1} - dt div(m_{k+1} grad_p H(t_{k+1}, m_{k+1}, grad u_k)) = m_k
//     m_0 = m0
// (H carries the extra m dm_H source for the control variant.) SemiImplicit
// resolves each implicit step by lagged-coefficient iterations, one cached
// factorized diffusion solve per pass; FullyImplicit runs a damped Newton on
// the same step equation. Scheme choice changes the inner solver only, never
// the equations. Stability of the lagged iteration needs roughly
// dt * sup|grad_p H| < h, checked at runtime by the iteration itself.
enum class Scheme { SemiImplicit, FullyImplicit };

struct SolverConfig {
    TimeGrid time;
    Scheme scheme = Scheme::SemiImplicit;
    double inner_tol = 1e-10;
    int inner_max_iter = 50;
    double positivity_floor = 0.0;

    void validate() const {
        if (!(inner_tol > 0.0)) throw std::invalid_argument("SolverConfig: inner_tol must be > 0");
        if (inner_max_iter < 1) throw std::invalid_argument("SolverConfig: inner_max_iter >= 1");
        if (positivity_floor < 0.0)
            throw std::invalid_argument("SolverConfig: positivity_floor >= 0");
    }
};

// A time step failed: inner iteration ran out of budget, Newton stagnated,
// or the density went negative beyond roundoff.
class StepFailure : public std::runtime_error {
public:
    StepFailure(std::string msg, int time_index, double residual,
                std::vector<double> history = {})
        : std::runtime_error(std::move(msg)), time_index(time_index), residual(residual),
          history(std::move(history)) {}

    int time_index;
    double residual;
    std::vector<double> history;
};

// Cached direct factorization of (I - dt Lap) on a grid; one iterative
// refinement pass keeps solve residuals at machine precision.
class ImplicitDiffusion {
public:
    ImplicitDiffusion(const Grid& g, double dt);
    ~ImplicitDiffusion();
    ImplicitDiffusion(ImplicitDiffusion&&) noexcept;
    ImplicitDiffusion& operator=(ImplicitDiffusion&&) noexcept;

    void solve(std::span<const double> rhs, std::span<double> x) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Evaluates b = grad_p H(t, x, m, grad_u) over one slice (regularized form
// when spec.eps > 0). grad_u and out hold dim * npts values.
void drift_field(const HamiltonianSpec& spec, double t, const Grid& g,
                 std::span<const double> m, std::span<const double> grad_u,
                 std::span<double> out);

// Backward value sweep for a frozen density trajectory. with_control_term
// adds the m dm_H source of the control companion system.
SpaceTimeField solve_hjb_backward(const HamiltonianSpec& spec, const ProblemData& data,
                                  const SpaceTimeField& m_traj, const SolverConfig& config,
                                  bool with_control_term = false);

// Conservative forward density sweep for a frozen value trajectory. Mass is
// preserved to machine precision for both boundary kinds; negativity beyond
// -1e-12 raises StepFailure.
SpaceTimeField solve_fp_forward(const HamiltonianSpec& spec, const ProblemData& data,
                                const SpaceTimeField& u_traj, const SolverConfig& config);

struct BoundsReport {
    std::vector<double> sup_m;     // per time level
    std::vector<double> inf_m;
    double sup_m_global = 0.0;
    double inf_m_global = 0.0;
    double sup_inv_m = 0.0;        // sup 1/m; inf if the density touches zero
    double l2h1_seminorm = 0.0;    // (integral of |grad m|^2 over Q)^(1/2)
    double drift_lrprime = 0.0;    // L^{r/(r-1)} norm of the drift over Q
    double energy_density_l1 = 0.0; // integral of (1+m)|b|^2 over Q

    std::string to_text() const;
};

BoundsReport bounds_tracker(const SpaceTimeField& m_traj);
BoundsReport bounds_tracker(const SpaceTimeField& m_traj, const SpaceTimeField& drift,
                            double r_prime);

} // namespace mfg
