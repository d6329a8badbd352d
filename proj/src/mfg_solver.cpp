#include "mfg/mfg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>

#include "mfg/ops.hpp"

namespace mfg {

const char* diagnosis_name(Diagnosis d) {
    switch (d) {
    case Diagnosis::Converged: return "converged";
    case Diagnosis::SlowOrOscillating: return "slow_or_oscillating";
    case Diagnosis::Diverged: return "diverged";
    default: return "inner_failure";
    }
}

namespace {

inline void point_coords(const Grid& g, long idx, double* x) {
    x[0] = g.coord(g.ix(idx));
    if (g.dim == 2) x[1] = g.coord(g.iy(idx));
}

std::vector<double> default_ladder(double eps) {
    if (eps <= 0.0 || eps >= 1e-2) return {eps};
    std::vector<double> ladder;
    for (double e = 1e-2; e > eps * (1.0 + 1e-12); e /= 10.0) ladder.push_back(e);
    ladder.push_back(eps);
    return ladder;
}

SpaceTimeField nodal_drift(const HamiltonianSpec& spec, const SpaceTimeField& u,
                           const SpaceTimeField& m) {
    const Grid& g = u.grid();
    const TimeGrid& time = u.time_grid();
    SpaceTimeField b = SpaceTimeField::vector(g, time);
    std::vector<double> grad(g.points() * g.dim);
    for (int k = 0; k <= time.steps; ++k) {
        gradient(u.slice(k), g, grad);
        drift_field(spec, time.t(k), g, m.slice(k), grad, b.level(k));
    }
    return b;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

} // namespace

SpaceTimeField heat_flow_density(const HamiltonianSpec& spec, const ProblemData& data,
                                 const SolverConfig& config) {
    SpaceTimeField u0 = SpaceTimeField::scalar(data.grid, config.time, 0.0);
    return solve_fp_forward(spec, data, u0, config);
}

std::pair<MFGSolution, ConvergenceReport>
picard_solve(const HamiltonianSpec& spec, const ProblemData& data, const SolverConfig& config,
             const PicardOptions& opts, const SpaceTimeField* initial_density) {
    config.validate();
    if (!(opts.theta > 0.0 && opts.theta <= 1.0))
        throw std::invalid_argument("picard_solve: theta must lie in (0, 1]");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");

    const Grid& g = data.grid;
    const TimeGrid& time = config.time;
    const long npts = g.points();
    const int K = time.steps;

    ConvergenceReport rep;
    std::vector<double> ladder = opts.eps_ladder.empty() ? default_ladder(spec.eps)
                                                         : opts.eps_ladder;
    rep.eps_stages = ladder;

    SpaceTimeField m_cur = initial_density ? *initial_density
                                           : heat_flow_density(spec.with_eps(ladder.front()),
                                                               data, config);
    SpaceTimeField u = SpaceTimeField::scalar(g, time);
    SpaceTimeField u_prev = u;
    bool have_u = false;
    bool aborted = false;

    for (std::size_t stage = 0; stage < ladder.size() && !aborted; ++stage) {
        HamiltonianSpec spec_s = spec.with_eps(ladder[stage]);
        ProblemData data_s = ladder[stage] > 0.0 ? regularize_couplings(data, ladder[stage])
                                                 : data;
        int stage_iters = 0;
        bool stage_converged = false;
        for (int it = 0; it < opts.max_outer; ++it) {
            ++stage_iters;
            ++rep.iterations;
            SpaceTimeField m_phi;
            try {
                u = solve_hjb_backward(spec_s, data_s, m_cur, config, opts.control_variant);
                m_phi = solve_fp_forward(spec_s, data_s, u, config);
            } catch (const StepFailure& e) {
                rep.diagnosis = Diagnosis::InnerFailure;
                char buf[256];
                std::snprintf(buf, sizeof buf, "outer iteration %d (eps stage %zu): %s",
                              rep.iterations, stage, e.what());
                rep.message = buf;
                aborted = true;
                break;
            }
            double delta_m = 0.0;
            for (int k = 0; k <= K; ++k) {
                auto cur = m_cur.slice(k);
                auto phi = m_phi.slice(k);
                for (long i = 0; i < npts; ++i) {
                    double next = (1.0 - opts.theta) * cur[i] + opts.theta * phi[i];
                    delta_m = std::max(delta_m, std::abs(next - cur[i]));
                    m_cur.at(k, 0, i) = next;
                }
            }
            double delta_u = 0.0;
            for (int k = 0; k <= K; ++k)
                delta_u = std::max(delta_u, sup_diff(u.slice(k), u_prev.slice(k)));
            u_prev = u;
            have_u = true;
            rep.deltas_m.push_back(delta_m);
            rep.deltas_u.push_back(delta_u);

            if (!m_cur.all_finite() || !u.all_finite()) {
                rep.diagnosis = Diagnosis::Diverged;
                rep.message = "iterates left the finite range";
                aborted = true;
                break;
            }
            if (delta_m <= opts.tol) {
                stage_converged = true;
                break;
            }
        }
        rep.stage_iterations.push_back(stage_iters);
        if (stage + 1 == ladder.size()) rep.converged = stage_converged && !aborted;
    }

    if (!rep.converged && rep.diagnosis == Diagnosis::Converged) {
        // Ran out of iterations: classify the tail of the delta history.
        rep.diagnosis = Diagnosis::SlowOrOscillating;
        if (rep.deltas_m.size() >= 2) {
            double first = rep.deltas_m[rep.deltas_m.size() / 2];
            double last = rep.deltas_m.back();
            if (last > 10.0 * first || !std::isfinite(last)) rep.diagnosis = Diagnosis::Diverged;
        }
        if (rep.message.empty()) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "no convergence after %d outer iterations (%s)",
                          rep.iterations, diagnosis_name(rep.diagnosis));
            rep.message = buf;
        }
    }
    if (rep.converged) rep.diagnosis = Diagnosis::Converged;

    MFGSolution sol{spec, data, config, SpaceTimeField::scalar(g, time), m_cur,
                    SpaceTimeField::vector(g, time), opts.control_variant};
    // Final consistency pass so the returned value function matches the
    // returned density; skipped if the sweeps are failing.
    if (rep.diagnosis != Diagnosis::InnerFailure && m_cur.all_finite()) {
        try {
            HamiltonianSpec spec_f = spec.with_eps(ladder.back());
            ProblemData data_f = ladder.back() > 0.0 ? regularize_couplings(data, ladder.back())
                                                     : data;
            sol.u = solve_hjb_backward(spec_f, data_f, m_cur, config, opts.control_variant);
        } catch (const StepFailure&) {
            if (have_u) sol.u = u_prev;
        }
    } else if (have_u) {
        sol.u = u_prev;
    }
    sol.spec.eps = ladder.back();
    if (sol.m.all_finite() && sol.u.all_finite())
        sol.drift = nodal_drift(sol.spec, sol.u, sol.m);

    Residuals res = pde_residuals(sol);
    rep.hjb_res_sup = res.hjb_sup;
    rep.fp_res_sup = res.fp_sup;
    rep.terminal_res = res.terminal_sup;
    rep.mass_err = res.mass_err;
    rep.bounds = bounds_tracker(sol.m, sol.drift, sol.spec.r_prime());
    return {std::move(sol), std::move(rep)};
}

Residuals pde_residuals(const MFGSolution& sol) {
    const Grid& g = sol.data.grid;
    const TimeGrid& time = sol.config.time;
    const int K = time.steps;
    const double dt = time.dt();
    const long npts = g.points();
    const int d = g.dim;

    const HamiltonianSpec& spec = sol.spec;
    ProblemData data = spec.eps > 0.0 ? regularize_couplings(sol.data, spec.eps) : sol.data;

    Residuals out;
    if (!sol.u.all_finite() || !sol.m.all_finite()) {
        out.hjb_sup = out.fp_sup = out.mass_err = std::numeric_limits<double>::infinity();
        return out;
    }

    std::vector<double> lap(npts), grad(npts * d), src(npts), fsl(npts), b(npts * d),
        flux(npts * d), divw(npts);
    double hjb_l2 = 0.0, fp_l2 = 0.0;
    double x[2];

    for (int k = 0; k < K; ++k) {
        auto uk = sol.u.slice(k);
        auto un = sol.u.slice(k + 1);
        auto mn = sol.m.slice(k + 1);
        double ts = time.t(k + 1);
        laplacian(uk, g, lap);
        gradient(uk, g, grad);

        double sup = 0.0, l2 = 0.0;
        for (long i = 0; i < npts; ++i) {
            point_coords(g, i, x);
            std::span<const double> xs(x, std::size_t(d));
            double p[2];
            for (int c = 0; c < d; ++c) p[c] = grad[c * npts + i];
            std::span<const double> ps(p, std::size_t(d));
            double S = spec.value_eff(ts, xs, mn[i], ps);
            if (sol.control_variant) S += mn[i] * spec.dm(ts, xs, mn[i], ps);
            double R = (uk[i] - un[i]) / dt - lap[i] + S - data.f.eval(ts, xs, mn[i]);
            sup = std::max(sup, std::abs(R));
            l2 += g.weight(i) * R * R;
        }
        out.hjb_sup = std::max(out.hjb_sup, sup);
        hjb_l2 += dt * l2;

        // forward equation residual for the step ending at k+1
        auto mk = sol.m.slice(k);
        laplacian(mn, g, lap);
        drift_field(spec, ts, g, mn, grad, b);
        for (int c = 0; c < d; ++c)
            for (long i = 0; i < npts; ++i) flux[c * npts + i] = mn[i] * b[c * npts + i];
        divergence_adjoint(flux, g, divw);
        sup = 0.0;
        l2 = 0.0;
        for (long i = 0; i < npts; ++i) {
            double R = (mn[i] - mk[i]) / dt - lap[i] - divw[i];
            sup = std::max(sup, std::abs(R));
            l2 += g.weight(i) * R * R;
        }
        out.fp_sup = std::max(out.fp_sup, sup);
        fp_l2 += dt * l2;
    }
    out.hjb_l2 = std::sqrt(hjb_l2);
    out.fp_l2 = std::sqrt(fp_l2);

    auto mK = sol.m.slice(K);
    auto uK = sol.u.slice(K);
    for (long i = 0; i < npts; ++i) {
        point_coords(g, i, x);
        double gv = data.g.eval(time.T, {x, std::size_t(d)}, mK[i]);
        out.terminal_sup = std::max(out.terminal_sup, std::abs(uK[i] - gv));
    }
    for (int k = 0; k <= K; ++k)
        out.mass_err = std::max(out.mass_err, std::abs(integrate(sol.m.slice(k), g) - 1.0));
    return out;
}

namespace {

// Stacked residual of the full discrete system; unknown layout
// [u_0..u_{K-1}, m_1..m_K].
struct OracleSystem {
    const HamiltonianSpec& spec;
    const ProblemData& data;
    const Grid& g;
    TimeGrid time;

    long npts;
    int K;
    double dt;
    int d;

    long size() const { return 2L * K * npts; }

    void residual(const double* xv, double* out) const {
        std::vector<double> uK(npts), lap(npts), grad(npts * d), b(npts * d),
            flux(npts * d), divw(npts);
        double x[2];
        const double* mK = xv + (2L * K - 1) * npts;
        for (long i = 0; i < npts; ++i) {
            point_coords(g, i, x);
            uK[i] = data.g.eval(time.T, {x, std::size_t(d)}, mK[i]);
        }
        for (int k = 0; k < K; ++k) {
            const double* uk = xv + std::size_t(k) * npts;
            const double* un = (k + 1 < K) ? xv + std::size_t(k + 1) * npts : uK.data();
            const double* mn = xv + (std::size_t(K) + k) * npts;
            const double* mk = k == 0 ? data.m0.data() : xv + (std::size_t(K) + k - 1) * npts;
            double ts = time.t(k + 1);
            std::span<const double> uks(uk, std::size_t(npts));

            laplacian(uks, g, lap);
            gradient(uks, g, grad);
            double* Rh = out + std::size_t(k) * npts;
            for (long i = 0; i < npts; ++i) {
                point_coords(g, i, x);
                std::span<const double> xs(x, std::size_t(d));
                double p[2];
                for (int c = 0; c < d; ++c) p[c] = grad[c * npts + i];
                std::span<const double> ps(p, std::size_t(d));
                Rh[i] = (uk[i] - un[i]) / dt - lap[i] + spec.value_eff(ts, xs, mn[i], ps) -
                        data.f.eval(ts, xs, mn[i]);
            }

            std::span<const double> mns(mn, std::size_t(npts));
            laplacian(mns, g, lap);
            drift_field(spec, ts, g, mns, grad, b);
            for (int c = 0; c < d; ++c)
                for (long i = 0; i < npts; ++i) flux[c * npts + i] = mn[i] * b[c * npts + i];
            divergence_adjoint(flux, g, divw);
            double* Rf = out + (std::size_t(K) + k) * npts;
            for (long i = 0; i < npts; ++i)
                Rf[i] = (mn[i] - mk[i]) / dt - lap[i] - divw[i];
        }
    }
};

} // namespace

MFGSolution newton_oracle_solve(const HamiltonianSpec& spec, const ProblemData& data,
                                const SolverConfig& config, const NewtonOracleOptions& opts,
                                const SpaceTimeField* initial_density) {
    config.validate();
    const Grid& g = data.grid;
    const TimeGrid& time = config.time;
    const int K = time.steps;
    const long npts = g.points();
    // Solve the same system picard_solve targets: regularized couplings
    // whenever the Hamiltonian is regularized.
    ProblemData data_eff = spec.eps > 0.0 ? regularize_couplings(data, spec.eps) : data;
    OracleSystem sys{spec, data_eff, g, time, npts, K, time.dt(), g.dim};
    const long N = sys.size();
    if (N > 6000)
        throw std::invalid_argument("newton_oracle_solve: lattice too large for the dense oracle");
    if (initial_density && (!(initial_density->grid() == g) ||
                            !(initial_density->time_grid() == time)))
        throw std::invalid_argument("newton_oracle_solve: initial density lattice mismatch");

    Eigen::VectorXd xv(N);
    for (int k = 0; k < K; ++k)
        for (long i = 0; i < npts; ++i) {
            xv[std::size_t(k) * npts + i] = 0.0;
            xv[(std::size_t(K) + k) * npts + i] =
                initial_density ? initial_density->at(k + 1, 0, i) : data.m0[i];
        }

    Eigen::VectorXd F(N), Ftry(N), xtry(N);
    auto eval = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        sys.residual(v.data(), out.data());
    };
    auto admissible = [&](const Eigen::VectorXd& v) {
        if (spec.eps > 0.0) return true;
        for (long j = K * npts; j < N; ++j)
            if (v[j] <= 0.0) return false;
        return true;
    };

    eval(xv, F);
    double rn = F.lpNorm<Eigen::Infinity>();
    std::vector<double> history{rn};

    Eigen::MatrixXd J(N, N);
    for (int it = 0; it < opts.max_iter && rn > opts.residual_tol; ++it) {
        for (long j = 0; j < N; ++j) {
            double h = opts.fd_step * std::max(1.0, std::abs(xv[j]));
            double save = xv[j];
            xv[j] = save + h;
            eval(xv, Ftry);
            J.col(j) = Ftry;
            xv[j] = save - h;
            eval(xv, Ftry);
            J.col(j) = (J.col(j) - Ftry) / (2.0 * h);
            xv[j] = save;
        }
        Eigen::VectorXd step = J.partialPivLu().solve(-F);
        double s = 1.0;
        bool accepted = false;
        double r2 = F.norm();
        while (s >= std::pow(2.0, -30)) {
            xtry = xv + s * step;
            if (admissible(xtry)) {
                eval(xtry, Ftry);
                if (Ftry.norm() < (1.0 - 1e-4 * s) * r2 && Ftry.allFinite()) {
                    xv = xtry;
                    F = Ftry;
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        rn = F.lpNorm<Eigen::Infinity>();
        history.push_back(rn);
        if (!accepted)
            throw NewtonOracleFailure("newton_oracle_solve: line search stagnated", history);
    }
    if (rn > opts.residual_tol)
        throw NewtonOracleFailure("newton_oracle_solve: residual tolerance not reached", history);

    MFGSolution sol{spec, data, config, SpaceTimeField::scalar(g, time),
                    SpaceTimeField::scalar(g, time), SpaceTimeField::vector(g, time), false};
    for (long i = 0; i < npts; ++i) sol.m.at(0, 0, i) = data.m0[i];
    for (int k = 0; k < K; ++k)
        for (long i = 0; i < npts; ++i) {
            sol.u.at(k, 0, i) = xv[std::size_t(k) * npts + i];
            sol.m.at(k + 1, 0, i) = xv[(std::size_t(K) + k) * npts + i];
        }
    double x[2];
    auto mK = sol.m.slice(K);
    for (long i = 0; i < npts; ++i) {
        point_coords(g, i, x);
        sol.u.at(K, 0, i) = data_eff.g.eval(time.T, {x, std::size_t(g.dim)}, mK[i]);
    }
    sol.drift = nodal_drift(spec, sol.u, sol.m);
    return sol;
}

} // namespace mfg
