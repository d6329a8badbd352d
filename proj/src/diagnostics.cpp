#include "mfg/diagnostics.hpp"

#include <cmath>
#include <cstdio>

#include "mfg/ops.hpp"

namespace mfg {

namespace {

inline void point_coords(const Grid& g, long idx, double* x) {
    x[0] = g.coord(g.ix(idx));
    if (g.dim == 2) x[1] = g.coord(g.iy(idx));
}

double trapezoid_weight(const TimeGrid& t, int k) {
    return (k == 0 || k == t.steps) ? 0.5 * t.dt() : t.dt();
}

ProblemData effective_data(const MFGSolution& sol) {
    return sol.spec.eps > 0.0 ? regularize_couplings(sol.data, sol.spec.eps) : sol.data;
}

} // namespace

double energy_identity_residual(const MFGSolution& sol) {
    const Grid& g = sol.data.grid;
    const TimeGrid& time = sol.config.time;
    const HamiltonianSpec& spec = sol.spec;
    ProblemData data = effective_data(sol);
    const long npts = g.points();
    const int d = g.dim;

    std::vector<double> grad(npts * d), integrand(npts);
    double x[2];
    double bulk = 0.0;
    for (int k = 0; k <= time.steps; ++k) {
        auto mk = sol.m.slice(k);
        auto uk = sol.u.slice(k);
        gradient(uk, g, grad);
        double ts = time.t(k);
        for (long i = 0; i < npts; ++i) {
            point_coords(g, i, x);
            std::span<const double> xs(x, std::size_t(d));
            double p[2], gp[2];
            for (int c = 0; c < d; ++c) p[c] = grad[c * npts + i];
            std::span<const double> ps(p, std::size_t(d));
            spec.grad_p_eff(ts, xs, mk[i], ps, {gp, std::size_t(d)});
            double dot = 0.0;
            for (int c = 0; c < d; ++c) dot += gp[c] * p[c];
            double H = spec.value_eff(ts, xs, mk[i], ps);
            integrand[i] = (data.f.eval(ts, xs, mk[i]) + dot - H) * mk[i];
        }
        bulk += trapezoid_weight(time, k) * integrate(integrand, g);
    }

    auto mT = sol.m.slice(time.steps);
    for (long i = 0; i < npts; ++i) {
        point_coords(g, i, x);
        integrand[i] = data.g.eval(time.T, {x, std::size_t(d)}, mT[i]) * mT[i];
    }
    double terminal = integrate(integrand, g);
    double initial = inner(sol.u.slice(0), sol.m.slice(0), g);
    return terminal + bulk - initial;
}

EnergyTerms energy_terms(const MFGSolution& sol) {
    const Grid& g = sol.data.grid;
    const TimeGrid& time = sol.config.time;
    const HamiltonianSpec& spec = sol.spec;
    ProblemData data = effective_data(sol);
    const long npts = g.points();
    const int d = g.dim;

    EnergyTerms out;
    std::vector<double> grad(npts * d), fm(npts), bracket(npts), hv(npts);
    double x[2];
    for (int k = 0; k <= time.steps; ++k) {
        auto mk = sol.m.slice(k);
        gradient(sol.u.slice(k), g, grad);
        double ts = time.t(k);
        for (long i = 0; i < npts; ++i) {
            point_coords(g, i, x);
            std::span<const double> xs(x, std::size_t(d));
            double p[2], gp[2];
            for (int c = 0; c < d; ++c) p[c] = grad[c * npts + i];
            std::span<const double> ps(p, std::size_t(d));
            spec.grad_p_eff(ts, xs, mk[i], ps, {gp, std::size_t(d)});
            double dot = 0.0;
            for (int c = 0; c < d; ++c) dot += gp[c] * p[c];
            double H = spec.value_eff(ts, xs, mk[i], ps);
            fm[i] = data.f.eval(ts, xs, mk[i]) * mk[i];
            bracket[i] = (dot - H) * mk[i];
            hv[i] = H;
        }
        double w = trapezoid_weight(time, k);
        out.term_fg += w * integrate(fm, g);
        out.term_bracket += w * integrate(bracket, g);
        out.term_H += w * integrate(hv, g);
    }
    auto mT = sol.m.slice(time.steps);
    std::vector<double> gm(npts);
    for (long i = 0; i < npts; ++i) {
        point_coords(g, i, x);
        gm[i] = data.g.eval(time.T, {x, std::size_t(d)}, mT[i]) * mT[i];
    }
    out.term_gm = integrate(gm, g);

    // Cap audit at L = 2 sup m0.
    double sup_m0 = norms(std::span<const double>(sol.data.m0), g).sup;
    CappedCouplings caps = coupling_cap(data, time, 2.0 * sup_m0);
    double fl = 0.0;
    for (int k = 0; k <= time.steps; ++k)
        fl += trapezoid_weight(time, k) * integrate(caps.f_L.slice(k), g);
    out.cap_integral = fl + integrate(caps.g_L, g);
    out.lhs = out.term_gm + out.term_fg + out.term_bracket + sup_m0 * out.term_H;
    // smallest C with lhs <= sup_m0 (S C + C^2)
    if (out.lhs <= 0.0 || sup_m0 <= 0.0) {
        out.smallest_C = 0.0;
    } else {
        double S = out.cap_integral;
        out.smallest_C = 0.5 * (-S + std::sqrt(S * S + 4.0 * out.lhs / sup_m0));
    }
    return out;
}

double uniqueness_gap(const MFGSolution& sol1, const MFGSolution& sol2) {
    const Grid& g = sol1.data.grid;
    const TimeGrid& time = sol1.config.time;
    if (!sol1.u.same_lattice(sol2.u) || !sol1.m.same_lattice(sol2.m))
        throw std::invalid_argument("uniqueness_gap: solutions live on different lattices");
    const HamiltonianSpec& spec = sol1.spec;
    ProblemData data = effective_data(sol1);
    const long npts = g.points();
    const int d = g.dim;

    std::vector<double> grad1(npts * d), grad2(npts * d), integrand(npts);
    double x[2];
    double bulk = 0.0;
    for (int k = 0; k <= time.steps; ++k) {
        auto m1 = sol1.m.slice(k);
        auto m2 = sol2.m.slice(k);
        gradient(sol1.u.slice(k), g, grad1);
        gradient(sol2.u.slice(k), g, grad2);
        double ts = time.t(k);
        for (long i = 0; i < npts; ++i) {
            point_coords(g, i, x);
            std::span<const double> xs(x, std::size_t(d));
            double p1[2], p2[2], g1[2], g2[2];
            for (int c = 0; c < d; ++c) {
                p1[c] = grad1[c * npts + i];
                p2[c] = grad2[c * npts + i];
            }
            std::span<const double> p1s(p1, std::size_t(d)), p2s(p2, std::size_t(d));
            spec.grad_p_eff(ts, xs, m1[i], p1s, {g1, std::size_t(d)});
            spec.grad_p_eff(ts, xs, m2[i], p2s, {g2, std::size_t(d)});
            double cross = 0.0;
            for (int c = 0; c < d; ++c)
                cross += (m1[i] * g1[c] - m2[i] * g2[c]) * (p1[c] - p2[c]);
            double dH = spec.value_eff(ts, xs, m1[i], p1s) - spec.value_eff(ts, xs, m2[i], p2s);
            double df = data.f.eval(ts, xs, m1[i]) - data.f.eval(ts, xs, m2[i]);
            integrand[i] = df * (m1[i] - m2[i]) + cross - dH * (m1[i] - m2[i]);
        }
        bulk += trapezoid_weight(time, k) * integrate(integrand, g);
    }
    auto m1T = sol1.m.slice(time.steps);
    auto m2T = sol2.m.slice(time.steps);
    for (long i = 0; i < npts; ++i) {
        point_coords(g, i, x);
        std::span<const double> xs(x, std::size_t(d));
        double dg = data.g.eval(time.T, xs, m1T[i]) - data.g.eval(time.T, xs, m2T[i]);
        integrand[i] = dg * (m1T[i] - m2T[i]);
    }
    return bulk + integrate(integrand, g);
}

double truncate_Tk(double s, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("truncate_Tk: need k > 0");
    return std::min(k, std::max(s, -k));
}

std::vector<double> truncate_Tk(std::span<const double> values, double k) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = truncate_Tk(values[i], k);
    return out;
}

namespace {
// S_1 with slope 1 on [0,1], 2-s on [1,2], 0 beyond; odd in r.
double s1(double r) {
    double a = std::abs(r);
    double v;
    if (a <= 1.0)
        v = a;
    else if (a <= 2.0)
        v = 2.0 * a - 0.5 * a * a - 0.5;
    else
        v = 1.5;
    return r < 0.0 ? -v : v;
}
} // namespace

double aux_Sn(double r, double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("aux_Sn: need n >= 1");
    return n * s1(r / n);
}

std::vector<double> aux_Sn(std::span<const double> values, double n) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = aux_Sn(values[i], n);
    return out;
}

std::string diagnostics_text(const MFGSolution& sol) {
    EnergyTerms et = energy_terms(sol);
    double res = energy_identity_residual(sol);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "energy_identity_residual = %.12g\n"
                  "term_fg = %.12g\nterm_gm = %.12g\nterm_bracket = %.12g\nterm_H = %.12g\n"
                  "energy_bound_lhs = %.12g\nenergy_bound_cap_integral = %.12g\n"
                  "energy_bound_smallest_C = %.12g\n",
                  res, et.term_fg, et.term_gm, et.term_bracket, et.term_H, et.lhs,
                  et.cap_integral, et.smallest_C);
    return buf;
}

} // namespace mfg
