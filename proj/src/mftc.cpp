#include "mfg/mftc.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "mfg/ops.hpp"

namespace mfg {

namespace {

inline void point_coords(const Grid& g, long idx, double* x) {
    x[0] = g.coord(g.ix(idx));
    if (g.dim == 2) x[1] = g.coord(g.iy(idx));
}

void require_unregularized(const HamiltonianSpec& spec, const char* op) {
    if (spec.eps != 0.0)
        throw std::invalid_argument(std::string(op) +
                                    ": the control machinery needs an unregularized spec (eps = 0)");
}

void check_pair(const ControlPair& pair, const char* op) {
    if (!pair.m.same_lattice(pair.w))
        throw std::invalid_argument(std::string(op) + ": pair fields on different lattices");
    if (pair.m.components() != 1 || pair.w.components() != pair.m.grid().dim)
        throw std::invalid_argument(std::string(op) + ": pair component counts are wrong");
}

// Sampled joint convexity of (m, w) -> tilde_L; guards the variational
// hypotheses before a control solve.
void check_tilde_L_convexity(const HamiltonianSpec& spec, int dim) {
    std::mt19937_64 rng(0xc0ffeeULL);
    std::uniform_real_distribution<double> md(0.2, 3.0), wd(-2.0, 2.0);
    const double x0[2] = {0.0, 0.0};
    std::span<const double> xs(x0, std::size_t(dim));
    for (int s = 0; s < 400; ++s) {
        double ma = md(rng), mb = md(rng);
        double wa[2], wb[2], wm[2];
        for (int c = 0; c < dim; ++c) {
            wa[c] = wd(rng);
            wb[c] = wd(rng);
            wm[c] = 0.5 * (wa[c] + wb[c]);
        }
        double la = spec.tilde_lagrangian(0.0, xs, ma, {wa, std::size_t(dim)});
        double lb = spec.tilde_lagrangian(0.0, xs, mb, {wb, std::size_t(dim)});
        double lm = spec.tilde_lagrangian(0.0, xs, 0.5 * (ma + mb), {wm, std::size_t(dim)});
        double scale = std::abs(la) + std::abs(lb) + 1.0;
        if (lm > 0.5 * (la + lb) + 1e-10 * scale) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "tilde_L fails sampled convexity (m=%.4g/%.4g): midpoint %.6g > %.6g",
                          ma, mb, lm, 0.5 * (la + lb));
            throw std::invalid_argument(buf);
        }
    }
}

} // namespace

double objective_J(const ControlPair& pair, const HamiltonianSpec& spec,
                   const ProblemData& data) {
    require_unregularized(spec, "objective_J");
    check_pair(pair, "objective_J");
    const Grid& g = data.grid;
    const TimeGrid& time = pair.m.time_grid();
    const long npts = g.points();
    const int d = g.dim;
    const double dt = time.dt();

    std::vector<double> integrand(npts);
    double x[2], w[2];
    double J = 0.0;
    for (int k = 1; k <= time.steps; ++k) {
        auto mk = pair.m.slice(k);
        double ts = time.t(k);
        for (long i = 0; i < npts; ++i) {
            if (!(mk[i] > 0.0))
                throw std::domain_error("objective_J: nonpositive density");
            point_coords(g, i, x);
            std::span<const double> xs(x, std::size_t(d));
            for (int c = 0; c < d; ++c) w[c] = pair.w.at(k, c, i);
            integrand[i] = spec.tilde_lagrangian(ts, xs, mk[i], {w, std::size_t(d)}) +
                           data.f.primitive(ts, xs, mk[i]);
        }
        J += dt * integrate(integrand, g);
    }
    auto mT = pair.m.slice(time.steps);
    for (long i = 0; i < npts; ++i) {
        point_coords(g, i, x);
        integrand[i] = data.g.primitive(time.T, {x, std::size_t(d)}, mT[i]);
    }
    return J + integrate(integrand, g);
}

namespace {

double constraint_residual(const ControlPair& pair, std::span<const double> m0) {
    const Grid& g = pair.m.grid();
    const TimeGrid& time = pair.m.time_grid();
    const long npts = g.points();
    const double dt = time.dt();
    std::vector<double> lap(npts), divw(npts);
    double res = 0.0;
    if (!m0.empty()) {
        auto m_first = pair.m.slice(0);
        for (long i = 0; i < npts; ++i) res = std::max(res, std::abs(m_first[i] - m0[i]));
    }
    for (int k = 0; k < time.steps; ++k) {
        auto mk = pair.m.slice(k);
        auto mn = pair.m.slice(k + 1);
        laplacian(mn, g, lap);
        divergence_adjoint(pair.w.level(k + 1), g, divw);
        for (long i = 0; i < npts; ++i) {
            double R = (mn[i] - mk[i]) / dt - lap[i] + divw[i];
            res = std::max(res, std::abs(R));
        }
    }
    return res;
}

} // namespace

double feasibility_residual(const ControlPair& pair, const ProblemData& data) {
    check_pair(pair, "feasibility_residual");
    if (!(pair.m.grid() == data.grid))
        throw std::invalid_argument("feasibility_residual: grid mismatch");
    return constraint_residual(pair, data.m0);
}

SpaceTimeField adjoint_solve(const ControlPair& pair, const HamiltonianSpec& spec,
                             const ProblemData& data, const SolverConfig& config) {
    require_unregularized(spec, "adjoint_solve");
    check_pair(pair, "adjoint_solve");
    config.validate();
    const Grid& g = data.grid;
    const TimeGrid& time = pair.m.time_grid();
    const long npts = g.points();
    const int d = g.dim;
    const double dt = time.dt();

    SpaceTimeField u = SpaceTimeField::scalar(g, time);
    double x[2], w[2];
    {
        auto mT = pair.m.slice(time.steps);
        auto uT = u.slice(time.steps);
        for (long i = 0; i < npts; ++i) {
            if (!(mT[i] > 0.0)) throw std::domain_error("adjoint_solve: nonpositive density");
            point_coords(g, i, x);
            uT[i] = data.g.eval(time.T, {x, std::size_t(d)}, mT[i]);
        }
    }
    ImplicitDiffusion lin(g, dt);
    std::vector<double> rhs(npts), ucur(npts);
    for (int k = time.steps - 1; k >= 0; --k) {
        auto un = u.slice(k + 1);
        auto mn = pair.m.slice(k + 1);
        double ts = time.t(k + 1);
        for (long i = 0; i < npts; ++i) {
            if (!(mn[i] > 0.0)) throw std::domain_error("adjoint_solve: nonpositive density");
            point_coords(g, i, x);
            std::span<const double> xs(x, std::size_t(d));
            for (int c = 0; c < d; ++c) w[c] = pair.w.at(k + 1, c, i);
            rhs[i] = un[i] + dt * (data.f.eval(ts, xs, mn[i]) +
                                   spec.dm_tilde_lagrangian(ts, xs, mn[i], {w, std::size_t(d)}));
        }
        lin.solve(rhs, ucur);
        std::copy(ucur.begin(), ucur.end(), u.slice(k).begin());
    }
    return u;
}

ControlPair make_tangent(const SpaceTimeField& w_tilde) {
    const Grid& g = w_tilde.grid();
    const TimeGrid& time = w_tilde.time_grid();
    const long npts = g.points();
    const double dt = time.dt();
    ControlPair dir{SpaceTimeField::scalar(g, time), w_tilde};
    ImplicitDiffusion lin(g, dt);
    std::vector<double> divw(npts), rhs(npts), mn(npts);
    for (int k = 0; k < time.steps; ++k) {
        auto mk = dir.m.slice(k);
        divergence_adjoint(w_tilde.level(k + 1), g, divw);
        for (long i = 0; i < npts; ++i) rhs[i] = mk[i] - dt * divw[i];
        lin.solve(rhs, mn);
        std::copy(mn.begin(), mn.end(), dir.m.slice(k + 1).begin());
    }
    return dir;
}

ControlPair add_scaled(const ControlPair& pair, const ControlPair& dir, double theta) {
    ControlPair out = pair;
    for (std::size_t i = 0; i < out.m.data().size(); ++i)
        out.m.data()[i] += theta * dir.m.data()[i];
    for (std::size_t i = 0; i < out.w.data().size(); ++i)
        out.w.data()[i] += theta * dir.w.data()[i];
    return out;
}

double gateaux_derivative(const ControlPair& pair, const ControlPair& direction,
                          const HamiltonianSpec& spec, const ProblemData& data,
                          const SolverConfig& config) {
    require_unregularized(spec, "gateaux_derivative");
    check_pair(pair, "gateaux_derivative");
    check_pair(direction, "gateaux_derivative");
    double dres = constraint_residual(direction, {});
    double d0 = sup_abs(direction.m.slice(0));
    if (dres > 1e-8 || d0 > 0.0) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "gateaux_derivative: direction infeasible (residual %.3g, dm(0) %.3g)",
                      dres, d0);
        throw std::invalid_argument(buf);
    }

    SpaceTimeField u = adjoint_solve(pair, spec, data, config);
    const Grid& g = data.grid;
    const TimeGrid& time = pair.m.time_grid();
    const long npts = g.points();
    const int d = g.dim;
    const double dt = time.dt();

    std::vector<double> grad(npts * d), integrand(npts);
    double x[2], w[2], gw[2];
    double D = 0.0;
    for (int k = 1; k <= time.steps; ++k) {
        auto mk = pair.m.slice(k);
        gradient(u.slice(k - 1), g, grad);
        double ts = time.t(k);
        for (long i = 0; i < npts; ++i) {
            point_coords(g, i, x);
            std::span<const double> xs(x, std::size_t(d));
            for (int c = 0; c < d; ++c) w[c] = pair.w.at(k, c, i);
            spec.grad_w_tilde_lagrangian(ts, xs, mk[i], {w, std::size_t(d)},
                                         {gw, std::size_t(d)});
            double s = 0.0;
            for (int c = 0; c < d; ++c)
                s += (grad[c * npts + i] + gw[c]) * direction.w.at(k, c, i);
            integrand[i] = s;
        }
        D += dt * integrate(integrand, g);
    }
    return D;
}

ControlPair induced_pair(const MFGSolution& sol) {
    const Grid& g = sol.data.grid;
    const TimeGrid& time = sol.config.time;
    const long npts = g.points();
    const int d = g.dim;
    ControlPair pair{sol.m, SpaceTimeField::vector(g, time)};
    std::vector<double> grad(npts * d), b(npts * d);
    for (int k = 0; k <= time.steps; ++k) {
        // Momentum at level k pairs with the value gradient at the step
        // start: w_k = -m_k grad_p H(t_k, m_k, grad u_{k-1}); w_0 uses u_0.
        gradient(sol.u.slice(k == 0 ? 0 : k - 1), g, grad);
        drift_field(sol.spec, time.t(k), g, sol.m.slice(k), grad, b);
        for (int c = 0; c < d; ++c)
            for (long i = 0; i < npts; ++i)
                pair.w.at(k, c, i) = -sol.m.at(k, 0, i) * b[c * npts + i];
    }
    return pair;
}

std::pair<MFGSolution, ConvergenceReport>
mftc_solve(const HamiltonianSpec& spec, const ProblemData& data, const SolverConfig& config,
           const PicardOptions& opts, const SpaceTimeField* initial_density) {
    require_unregularized(spec, "mftc_solve");
    check_tilde_L_convexity(spec, data.grid.dim);
    PicardOptions o = opts;
    o.control_variant = true;
    o.eps_ladder = {0.0};
    return picard_solve(spec, data, config, o, initial_density);
}

std::string CompareReport::to_text() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "dist_u = %.12g\ndist_m = %.12g\nJ_mftc = %.17g\nJ_mfg_pair = %.17g\n",
                  dist_u, dist_m, J_mftc, J_mfg_pair);
    return buf;
}

CompareReport compare_mfg_mftc(const HamiltonianSpec& spec, const ProblemData& data,
                               const SolverConfig& config, const PicardOptions& opts) {
    require_unregularized(spec, "compare_mfg_mftc");
    PicardOptions og = opts;
    og.control_variant = false;
    og.eps_ladder = {0.0};
    auto [mfg_sol, mfg_rep] = picard_solve(spec, data, config, og);
    auto [mftc_sol, mftc_rep] = mftc_solve(spec, data, config, opts);

    CompareReport rep;
    rep.mfg_report = mfg_rep;
    rep.mftc_report = mftc_rep;
    for (int k = 0; k <= config.time.steps; ++k) {
        auto u1 = mfg_sol.u.slice(k);
        auto u2 = mftc_sol.u.slice(k);
        auto m1 = mfg_sol.m.slice(k);
        auto m2 = mftc_sol.m.slice(k);
        for (long i = 0; i < data.grid.points(); ++i) {
            rep.dist_u = std::max(rep.dist_u, std::abs(u1[i] - u2[i]));
            rep.dist_m = std::max(rep.dist_m, std::abs(m1[i] - m2[i]));
        }
    }
    rep.J_mftc = objective_J(induced_pair(mftc_sol), spec, data);
    rep.J_mfg_pair = objective_J(induced_pair(mfg_sol), spec, data);
    return rep;
}

} // namespace mfg
