#include "mfg/pde_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mfg/kernels.hpp"
#include "mfg/ops.hpp"

namespace mfg {

namespace {

inline void point_coords(const Grid& g, long idx, double* x) {
    x[0] = g.coord(g.ix(idx));
    if (g.dim == 2) x[1] = g.coord(g.iy(idx));
}

// Axis neighbours with the same closure the stencil kernels use.
inline void axis_neighbors(const Grid& g, int i, int& im, int& ip) {
    const int n = g.n;
    if (g.is_periodic()) {
        im = (i == 0) ? n - 1 : i - 1;
        ip = (i == n - 1) ? 0 : i + 1;
    } else {
        im = (i == 0) ? 1 : i - 1;
        ip = (i == n - 1) ? n - 2 : i + 1;
    }
}

} // namespace

struct ImplicitDiffusion::Impl {
    Eigen::SparseMatrix<double> A;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

ImplicitDiffusion::ImplicitDiffusion(const Grid& g, double dt) : impl_(new Impl) {
    const long npts = g.points();
    const double c = dt / (g.h() * g.h());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(npts * (1 + 2 * g.dim));
    for (long idx = 0; idx < npts; ++idx) {
        trip.emplace_back(idx, idx, 1.0 + 2.0 * g.dim * c);
        int i = g.ix(idx);
        int im, ip;
        axis_neighbors(g, i, im, ip);
        if (g.dim == 1) {
            trip.emplace_back(idx, im, -c);
            trip.emplace_back(idx, ip, -c);
        } else {
            int j = g.iy(idx);
            int jm, jp;
            axis_neighbors(g, j, jm, jp);
            trip.emplace_back(idx, g.index(im, j), -c);
            trip.emplace_back(idx, g.index(ip, j), -c);
            trip.emplace_back(idx, g.index(i, jm), -c);
            trip.emplace_back(idx, g.index(i, jp), -c);
        }
    }
    impl_->A.resize(npts, npts);
    impl_->A.setFromTriplets(trip.begin(), trip.end());
    impl_->lu.compute(impl_->A);
    if (impl_->lu.info() != Eigen::Success)
        throw std::runtime_error("ImplicitDiffusion: factorization failed");
}

ImplicitDiffusion::~ImplicitDiffusion() = default;
ImplicitDiffusion::ImplicitDiffusion(ImplicitDiffusion&&) noexcept = default;
ImplicitDiffusion& ImplicitDiffusion::operator=(ImplicitDiffusion&&) noexcept = default;

void ImplicitDiffusion::solve(std::span<const double> rhs, std::span<double> x) const {
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
    Eigen::VectorXd y = impl_->lu.solve(b);
    Eigen::VectorXd res = b - impl_->A * y;
    y += impl_->lu.solve(res);
    Eigen::Map<Eigen::VectorXd>(x.data(), x.size()) = y;
}

void drift_field(const HamiltonianSpec& spec, double t, const Grid& g,
                 std::span<const double> m, std::span<const double> grad_u,
                 std::span<double> out) {
    const long npts = g.points();
    const int d = g.dim;
    const bool parallel = kernels::backend() == kernels::Backend::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (long idx = 0; idx < npts; ++idx) {
        double x[2], p[2], b[2];
        point_coords(g, idx, x);
        for (int c = 0; c < d; ++c) p[c] = grad_u[c * npts + idx];
        spec.grad_p_eff(t, {x, std::size_t(d)}, m[idx], {p, std::size_t(d)},
                        {b, std::size_t(d)});
        for (int c = 0; c < d; ++c) out[c * npts + idx] = b[c];
    }
}

namespace {

// Source term H (+ m dm_H) over a slice, evaluated at a frozen gradient.
void hamiltonian_source(const HamiltonianSpec& spec, double t, const Grid& g,
                        std::span<const double> m, std::span<const double> grad_u,
                        bool with_control_term, std::span<double> out) {
    const long npts = g.points();
    const int d = g.dim;
    const bool parallel = kernels::backend() == kernels::Backend::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (long idx = 0; idx < npts; ++idx) {
        double x[2], p[2];
        point_coords(g, idx, x);
        for (int c = 0; c < d; ++c) p[c] = grad_u[c * npts + idx];
        std::span<const double> xs(x, std::size_t(d));
        std::span<const double> ps(p, std::size_t(d));
        double v = spec.value_eff(t, xs, m[idx], ps);
        if (with_control_term) v += m[idx] * spec.dm(t, xs, m[idx], ps);
        out[idx] = v;
    }
}

void coupling_slice(const Coupling& f, double t, const Grid& g, std::span<const double> m,
                    std::span<double> out) {
    const long npts = g.points();
    for (long idx = 0; idx < npts; ++idx) {
        double x[2];
        point_coords(g, idx, x);
        out[idx] = f.eval(t, {x, std::size_t(g.dim)}, m[idx]);
    }
}

// One implicit backward step by lagged-Hamiltonian iteration. u holds the
// initial guess on entry and the solution on exit.
void hjb_step_lagged(const HamiltonianSpec& spec, const Grid& g, double dt, double t_src,
                     const ImplicitDiffusion& lin, std::span<const double> u_next,
                     std::span<const double> f_src, std::span<const double> m_src,
                     bool control_term, const SolverConfig& cfg, int k,
                     std::vector<double>& u) {
    const long npts = g.points();
    std::vector<double> grad(npts * g.dim), src(npts), src_new(npts), rhs(npts), v(npts);
    gradient(u, g, grad);
    hamiltonian_source(spec, t_src, g, m_src, grad, control_term, src);
    std::vector<double> history;
    for (int it = 0; it < cfg.inner_max_iter; ++it) {
        for (long i = 0; i < npts; ++i) rhs[i] = u_next[i] + dt * (f_src[i] - src[i]);
        lin.solve(rhs, v);
        gradient(v, g, grad);
        hamiltonian_source(spec, t_src, g, m_src, grad, control_term, src_new);
        double res = 0.0;
        for (long i = 0; i < npts; ++i) res = std::max(res, std::abs(src_new[i] - src[i]));
        u = v;
        src.swap(src_new);
        history.push_back(res);
        if (res <= cfg.inner_tol) return;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "backward step %d: lagged iteration stalled at residual %.3g "
                  "(dt too large for the drift magnitude)",
                  k, history.back());
    throw StepFailure(buf, k, history.back(), std::move(history));
}

// Same step by damped Newton with an analytic sparse Jacobian.
void hjb_step_newton(const HamiltonianSpec& spec, const Grid& g, double dt, double t_src,
                     std::span<const double> u_next, std::span<const double> f_src,
                     std::span<const double> m_src, bool control_term,
                     const SolverConfig& cfg, int k, std::vector<double>& u) {
    const long npts = g.points();
    const int d = g.dim;
    const double c = dt / (g.h() * g.h());
    const double i2h = 1.0 / (2.0 * g.h());

    auto residual = [&](const std::vector<double>& v, std::vector<double>& out) {
        std::vector<double> lap(npts), grad(npts * d), src(npts);
        laplacian(v, g, lap);
        gradient(v, g, grad);
        hamiltonian_source(spec, t_src, g, m_src, grad, control_term, src);
        for (long i = 0; i < npts; ++i)
            out[i] = v[i] - dt * lap[i] + dt * src[i] - u_next[i] - dt * f_src[i];
    };

    std::vector<double> R(npts), Rtry(npts), vtry(npts), grad(npts * d);
    residual(u, R);
    auto nrm = [&](const std::vector<double>& r) {
        double s = 0.0;
        for (double x : r) s += x * x;
        return std::sqrt(s);
    };
    double rn = nrm(R);
    std::vector<double> history{rn};
    const double target = cfg.inner_tol * std::sqrt(double(npts)) * 0.1;

    for (int it = 0; it < cfg.inner_max_iter && rn > target; ++it) {
        gradient(u, g, grad);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(npts * (1 + 4 * d));
        for (long idx = 0; idx < npts; ++idx) {
            double x[2], p[2], gp[2], dgp[2] = {0, 0};
            point_coords(g, idx, x);
            for (int cc = 0; cc < d; ++cc) p[cc] = grad[cc * npts + idx];
            std::span<const double> xs(x, std::size_t(d));
            std::span<const double> ps(p, std::size_t(d));
            spec.grad_p_eff(t_src, xs, m_src[idx], ps, {gp, std::size_t(d)});
            if (control_term) {
                spec.dm_grad_p(t_src, xs, m_src[idx], ps, {dgp, std::size_t(d)});
                for (int cc = 0; cc < d; ++cc) gp[cc] += m_src[idx] * dgp[cc];
            }
            trip.emplace_back(idx, idx, 1.0 + 2.0 * d * c);
            int i = g.ix(idx);
            int im, ip;
            axis_neighbors(g, i, im, ip);
            if (d == 1) {
                trip.emplace_back(idx, im, -c);
                trip.emplace_back(idx, ip, -c);
                if (!(g.boundary == Boundary::Neumann && (i == 0 || i == g.n - 1))) {
                    trip.emplace_back(idx, ip, dt * gp[0] * i2h);
                    trip.emplace_back(idx, im, -dt * gp[0] * i2h);
                }
            } else {
                int j = g.iy(idx);
                int jm, jp;
                axis_neighbors(g, j, jm, jp);
                trip.emplace_back(idx, g.index(im, j), -c);
                trip.emplace_back(idx, g.index(ip, j), -c);
                trip.emplace_back(idx, g.index(i, jm), -c);
                trip.emplace_back(idx, g.index(i, jp), -c);
                if (!(g.boundary == Boundary::Neumann && (i == 0 || i == g.n - 1))) {
                    trip.emplace_back(idx, g.index(ip, j), dt * gp[0] * i2h);
                    trip.emplace_back(idx, g.index(im, j), -dt * gp[0] * i2h);
                }
                if (!(g.boundary == Boundary::Neumann && (j == 0 || j == g.n - 1))) {
                    trip.emplace_back(idx, g.index(i, jp), dt * gp[1] * i2h);
                    trip.emplace_back(idx, g.index(i, jm), -dt * gp[1] * i2h);
                }
            }
        }
        Eigen::SparseMatrix<double> J(npts, npts);
        J.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            throw StepFailure("backward step: singular Newton matrix", k, rn, history);
        Eigen::Map<const Eigen::VectorXd> Rv(R.data(), npts);
        Eigen::VectorXd step = lu.solve(-Rv);

        double s = 1.0;
        bool accepted = false;
        while (s >= std::pow(2.0, -24)) {
            for (long i = 0; i < npts; ++i) vtry[i] = u[i] + s * step[i];
            residual(vtry, Rtry);
            double rt = nrm(Rtry);
            if (rt < (1.0 - 1e-4 * s) * rn) {
                u = vtry;
                R = Rtry;
                rn = rt;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        history.push_back(rn);
        if (!accepted)
            throw StepFailure("backward step: Newton line search stagnated", k, rn, history);
    }
    if (rn > target)
        throw StepFailure("backward step: Newton did not reach tolerance", k, rn, history);
}

} // namespace

SpaceTimeField solve_hjb_backward(const HamiltonianSpec& spec, const ProblemData& data,
                                  const SpaceTimeField& m_traj, const SolverConfig& config,
                                  bool with_control_term) {
    config.validate();
    const Grid& g = data.grid;
    const TimeGrid& time = config.time;
    if (!(m_traj.grid() == g) || !(m_traj.time_grid() == time))
        throw std::invalid_argument("solve_hjb_backward: density trajectory lattice mismatch");
    const int K = time.steps;
    const double dt = time.dt();
    const long npts = g.points();

    SpaceTimeField u = SpaceTimeField::scalar(g, time);

    // Terminal condition u_K = g(x, m_K), exact on the lattice.
    {
        auto uK = u.slice(K);
        auto mK = m_traj.slice(K);
        for (long i = 0; i < npts; ++i) {
            double x[2];
            point_coords(g, i, x);
            uK[i] = data.g.eval(time.T, {x, std::size_t(g.dim)}, mK[i]);
        }
    }

    ImplicitDiffusion lin(g, dt);
    std::vector<double> f_src(npts), ucur(npts);
    for (int k = K - 1; k >= 0; --k) {
        auto u_next = u.slice(k + 1);
        auto m_src = m_traj.slice(k + 1);
        double t_src = time.t(k + 1);
        coupling_slice(data.f, t_src, g, m_src, f_src);
        ucur.assign(u_next.begin(), u_next.end());
        if (config.scheme == Scheme::SemiImplicit)
            hjb_step_lagged(spec, g, dt, t_src, lin, u_next, f_src, m_src, with_control_term,
                            config, k, ucur);
        else
            hjb_step_newton(spec, g, dt, t_src, u_next, f_src, m_src, with_control_term,
                            config, k, ucur);
        std::copy(ucur.begin(), ucur.end(), u.slice(k).begin());
        for (double v : ucur)
            if (!std::isfinite(v))
                throw StepFailure("backward step produced a non-finite value", k,
                                  std::numeric_limits<double>::quiet_NaN());
    }
    return u;
}

SpaceTimeField solve_fp_forward(const HamiltonianSpec& spec, const ProblemData& data,
                                const SpaceTimeField& u_traj, const SolverConfig& config) {
    config.validate();
    const Grid& g = data.grid;
    const TimeGrid& time = config.time;
    if (!(u_traj.grid() == g) || !(u_traj.time_grid() == time))
        throw std::invalid_argument("solve_fp_forward: value trajectory lattice mismatch");
    const int K = time.steps;
    const double dt = time.dt();
    const long npts = g.points();
    const int d = g.dim;

    SpaceTimeField m = SpaceTimeField::scalar(g, time);
    std::copy(data.m0.begin(), data.m0.end(), m.slice(0).begin());

    ImplicitDiffusion lin(g, dt);
    std::vector<double> grad_u(npts * d), b(npts * d), flux(npts * d), divw(npts), rhs(npts),
        mnew(npts), mguess(npts), divw_new(npts);

    for (int k = 0; k < K; ++k) {
        auto m_prev = m.slice(k);
        gradient(u_traj.slice(k), g, grad_u);
        double t_src = time.t(k + 1);
        mguess.assign(m_prev.begin(), m_prev.end());

        auto flux_div = [&](const std::vector<double>& dens, std::vector<double>& out) {
            drift_field(spec, t_src, g, dens, grad_u, b);
            for (int c = 0; c < d; ++c)
                for (long i = 0; i < npts; ++i) flux[c * npts + i] = dens[i] * b[c * npts + i];
            divergence_adjoint(flux, g, out);
        };

        flux_div(mguess, divw);
        std::vector<double> history;
        bool done = false;
        for (int it = 0; it < config.inner_max_iter; ++it) {
            for (long i = 0; i < npts; ++i) rhs[i] = m_prev[i] + dt * divw[i];
            lin.solve(rhs, mnew);
            flux_div(mnew, divw_new);
            double res = 0.0;
            for (long i = 0; i < npts; ++i)
                res = std::max(res, std::abs(divw_new[i] - divw[i]));
            mguess = mnew;
            divw.swap(divw_new);
            history.push_back(res);
            if (res <= config.inner_tol) {
                done = true;
                break;
            }
        }
        if (!done) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "forward step %d: drift iteration stalled at residual %.3g", k,
                          history.back());
            throw StepFailure(buf, k, history.back(), std::move(history));
        }

        double lo = kernels::backend() == kernels::Backend::Parallel
                        ? kernels::par::vmin(mnew.data(), npts)
                        : kernels::ref::vmin(mnew.data(), npts);
        if (lo < -1e-12) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "forward step %d: density negative (min %.3g) beyond roundoff", k, lo);
            throw StepFailure(buf, k, lo);
        }
        if (config.positivity_floor > 0.0) {
            for (auto& v : mnew) v = std::max(v, config.positivity_floor);
        }
        for (double v : mnew)
            if (!std::isfinite(v))
                throw StepFailure("forward step produced a non-finite value", k,
                                  std::numeric_limits<double>::quiet_NaN());
        std::copy(mnew.begin(), mnew.end(), m.slice(k + 1).begin());
    }
    return m;
}

std::string BoundsReport::to_text() const {
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "sup_m = %.12g\ninf_m = %.12g\nsup_inv_m = %.12g\nl2h1_seminorm = %.12g\n"
                  "drift_lrprime = %.12g\nenergy_density_l1 = %.12g\n",
                  sup_m_global, inf_m_global, sup_inv_m, l2h1_seminorm, drift_lrprime,
                  energy_density_l1);
    return buf;
}

BoundsReport bounds_tracker(const SpaceTimeField& m_traj) {
    const Grid& g = m_traj.grid();
    const TimeGrid& time = m_traj.time_grid();
    BoundsReport r;
    r.sup_m_global = -std::numeric_limits<double>::infinity();
    r.inf_m_global = std::numeric_limits<double>::infinity();
    double h1 = 0.0;
    std::vector<double> grad(g.points() * g.dim), gsq(g.points());
    for (int k = 0; k <= time.steps; ++k) {
        auto sl = m_traj.slice(k);
        Norms nm = norms(sl, g);
        r.sup_m.push_back(nm.sup);
        r.inf_m.push_back(nm.inf);
        r.sup_m_global = std::max(r.sup_m_global, nm.sup);
        r.inf_m_global = std::min(r.inf_m_global, nm.inf);
        gradient(sl, g, grad);
        for (long i = 0; i < g.points(); ++i) {
            double s = 0.0;
            for (int c = 0; c < g.dim; ++c) {
                double v = grad[c * g.points() + i];
                s += v * v;
            }
            gsq[i] = s;
        }
        double w = (k == 0 || k == time.steps) ? 0.5 * time.dt() : time.dt();
        h1 += w * integrate(gsq, g);
    }
    r.l2h1_seminorm = std::sqrt(h1);
    r.sup_inv_m = r.inf_m_global > 0.0 ? 1.0 / r.inf_m_global
                                       : std::numeric_limits<double>::infinity();
    return r;
}

BoundsReport bounds_tracker(const SpaceTimeField& m_traj, const SpaceTimeField& drift,
                            double r_prime) {
    BoundsReport r = bounds_tracker(m_traj);
    const Grid& g = m_traj.grid();
    const TimeGrid& time = m_traj.time_grid();
    double lrp = 0.0, el1 = 0.0;
    std::vector<double> babs(g.points()), e(g.points());
    for (int k = 0; k <= time.steps; ++k) {
        auto msl = m_traj.slice(k);
        for (long i = 0; i < g.points(); ++i) {
            double s = 0.0;
            for (int c = 0; c < g.dim; ++c) {
                double v = drift.at(k, c, i);
                s += v * v;
            }
            babs[i] = std::pow(std::sqrt(s), r_prime);
            e[i] = (1.0 + msl[i]) * s;
        }
        double w = (k == 0 || k == time.steps) ? 0.5 * time.dt() : time.dt();
        lrp += w * integrate(babs, g);
        el1 += w * integrate(e, g);
    }
    r.drift_lrprime = std::pow(lrp, 1.0 / r_prime);
    r.energy_density_l1 = el1;
    return r;
}

} // namespace mfg
