#include "mfg/problem_data.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mfg/ops.hpp"

namespace mfg {

Coupling Coupling::power(double a, double q) {
    if (a < 0.0 || q < 0.0)
        throw std::invalid_argument("Coupling::power: need a >= 0 and q >= 0");
    Coupling c;
    c.kind = Kind::Power;
    c.a = a;
    c.q = q;
    return c;
}

Coupling Coupling::tabulated(std::function<double(double, std::span<const double>, double)> f) {
    Coupling c;
    c.kind = Kind::Tabulated;
    c.fn = std::move(f);
    return c;
}

double Coupling::eval(double t, std::span<const double> x, double m) const {
    double v;
    switch (kind) {
    case Kind::Zero: v = 0.0; break;
    case Kind::Power: v = a * std::pow(m, q); break;
    default: v = fn(t, x, m);
    }
    return std::min(v, cap);
}

namespace {
double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
    if (n % 2) ++n;
    double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}
} // namespace

double Coupling::primitive(double t, std::span<const double> x, double m) const {
    if (kind == Kind::Zero) return 0.0;
    if (kind == Kind::Power && !(std::isfinite(cap))) {
        return a * std::pow(m, q + 1.0) / (q + 1.0);
    }
    // Capped or tabulated: numeric quadrature of the (possibly capped) value.
    return simpson([&](double s) { return eval(t, x, s); }, 0.0, m, 256);
}

bool Coupling::monotone_on(double t, std::span<const double> x, double lo, double hi,
                           int samples) const {
    double prev = eval(t, x, lo);
    for (int i = 1; i < samples; ++i) {
        double m = lo + (hi - lo) * i / (samples - 1);
        double v = eval(t, x, m);
        if (v < prev - 1e-12 * std::max(1.0, std::abs(prev))) return false;
        prev = v;
    }
    return true;
}

std::vector<double> sample_m0(M0Kind kind, const Grid& grid, const M0Params& params) {
    const long npts = grid.points();
    std::vector<double> m0(npts, 1.0);
    const double a1 = params.amplitude;
    const double a2 = params.amplitude2;
    const double pi = std::acos(-1.0);

    auto mode = [&](double x, double k, bool odd) {
        // Periodic grids take full Fourier modes; Neumann grids take cosine
        // modes (zero normal derivative at the ends). Both integrate to zero.
        if (grid.is_periodic()) return odd ? std::sin(2.0 * pi * k * x) : std::cos(2.0 * pi * k * x);
        return std::cos(pi * k * x / grid.side);
    };

    if (kind != M0Kind::Uniform) {
        double floor_est = 1.0 - std::abs(a1) - (kind == M0Kind::TwoMode ? std::abs(a2) : 0.0);
        if (!(floor_est > 0.0)) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "sample_m0: amplitudes %g, %g drive the density to zero", a1, a2);
            throw std::invalid_argument(buf);
        }
        for (long idx = 0; idx < npts; ++idx) {
            double x = grid.coord(grid.ix(idx));
            double v;
            if (grid.dim == 1) {
                v = 1.0 + a1 * mode(x, 1.0, false);
                if (kind == M0Kind::TwoMode) v += a2 * mode(x, 2.0, true);
            } else {
                double y = grid.coord(grid.iy(idx));
                v = 1.0 + a1 * mode(x, 1.0, false) * mode(y, 1.0, false);
                if (kind == M0Kind::TwoMode) v += a2 * mode(x, 2.0, true) * mode(y, 2.0, true);
            }
            m0[idx] = v;
        }
    }
    double mass = integrate(m0, grid);
    for (auto& v : m0) v /= mass;
    return m0;
}

ProblemData ProblemData::make(const Grid& grid, Coupling f, Coupling g,
                              std::vector<double> m0) {
    if (long(m0.size()) != grid.points())
        throw std::invalid_argument("ProblemData: m0 does not match grid");
    ProblemData d{grid, std::move(f), std::move(g), std::move(m0), 0.0};
    double mass = integrate(d.m0, grid);
    if (std::abs(mass - 1.0) > 1e-10) {
        for (auto& v : d.m0) v /= mass;
    }
    double lo = d.m0[0];
    for (double v : d.m0) lo = std::min(lo, v);
    if (!(lo > 0.0))
        throw std::invalid_argument("ProblemData: m0 must be bounded away from zero");
    d.floor_c = lo;
    d.validate();
    return d;
}

void ProblemData::validate() const {
    const double x0[2] = {0.1, 0.2};
    std::span<const double> xs(x0, std::size_t(grid.dim));
    for (double t : {0.0, 0.5, 1.0}) {
        if (!f.monotone_on(t, xs, 0.0, 8.0))
            throw std::invalid_argument("ProblemData: f is not nondecreasing in m");
    }
    if (!g.monotone_on(0.0, xs, 0.0, 8.0))
        throw std::invalid_argument("ProblemData: g is not nondecreasing in m");
    // Bounded below: nondecreasing on [0, inf) means the value at 0 is the
    // sampled infimum.
    if (!std::isfinite(f.eval(0.0, xs, 0.0)) || !std::isfinite(g.eval(0.0, xs, 0.0)))
        throw std::invalid_argument("ProblemData: couplings must be bounded below");
}

CappedCouplings coupling_cap(const ProblemData& data, const TimeGrid& time, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("coupling_cap: need L > 0");
    const Grid& g = data.grid;
    const double x0[2] = {0.1, 0.2};
    std::span<const double> xs(x0, std::size_t(g.dim));
    for (double t : {0.0, time.T}) {
        if (!data.f.monotone_on(t, xs, 0.0, L))
            throw std::invalid_argument("coupling_cap: f not nondecreasing on [0, L]");
    }
    if (!data.g.monotone_on(0.0, xs, 0.0, L))
        throw std::invalid_argument("coupling_cap: g not nondecreasing on [0, L]");

    CappedCouplings out{SpaceTimeField::scalar(g, time), std::vector<double>(g.points())};
    double xp[2];
    for (int k = 0; k <= time.steps; ++k) {
        auto sl = out.f_L.slice(k);
        for (long i = 0; i < g.points(); ++i) {
            xp[0] = g.coord(g.ix(i));
            if (g.dim == 2) xp[1] = g.coord(g.iy(i));
            sl[i] = data.f.eval(time.t(k), std::span<const double>(xp, std::size_t(g.dim)), L);
        }
    }
    for (long i = 0; i < g.points(); ++i) {
        xp[0] = g.coord(g.ix(i));
        if (g.dim == 2) xp[1] = g.coord(g.iy(i));
        out.g_L[i] = data.g.eval(0.0, std::span<const double>(xp, std::size_t(g.dim)), L);
    }
    return out;
}

ProblemData regularize_couplings(const ProblemData& data, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("regularize_couplings: need eps > 0");
    ProblemData d = data;
    d.f.cap = std::min(d.f.cap, 1.0 / eps);
    d.g.cap = std::min(d.g.cap, 1.0 / eps);
    return d;
}

} // namespace mfg
