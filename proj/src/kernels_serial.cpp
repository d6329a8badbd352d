#include "mfg/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <vector>

namespace mfg::kernels {

namespace {
std::atomic<Backend> g_backend{Backend::Parallel};
}

void set_backend(Backend b) { g_backend.store(b, std::memory_order_relaxed); }
Backend backend() { return g_backend.load(std::memory_order_relaxed); }

namespace ref {

// Reference stencils, written index-by-index with no tricks. These are the
// correctness baseline the parallel kernels are tested against.

void laplacian(const Grid& g, const double* f, double* out) {
    const int n = g.n;
    const double ih2 = 1.0 / (g.h() * g.h());
    if (g.dim == 1) {
        if (g.is_periodic()) {
            for (int i = 0; i < n; ++i) {
                int im = (i == 0) ? n - 1 : i - 1;
                int ip = (i == n - 1) ? 0 : i + 1;
                out[i] = (f[im] - 2.0 * f[i] + f[ip]) * ih2;
            }
        } else {
            out[0] = (2.0 * f[1] - 2.0 * f[0]) * ih2;
            for (int i = 1; i < n - 1; ++i)
                out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * ih2;
            out[n - 1] = (2.0 * f[n - 2] - 2.0 * f[n - 1]) * ih2;
        }
        return;
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            long c = g.index(i, j);
            double fxm, fxp, fym, fyp;
            if (g.is_periodic()) {
                fxm = f[g.index(i == 0 ? n - 1 : i - 1, j)];
                fxp = f[g.index(i == n - 1 ? 0 : i + 1, j)];
                fym = f[g.index(i, j == 0 ? n - 1 : j - 1)];
                fyp = f[g.index(i, j == n - 1 ? 0 : j + 1)];
            } else {
                fxm = f[g.index(i == 0 ? 1 : i - 1, j)];
                fxp = f[g.index(i == n - 1 ? n - 2 : i + 1, j)];
                fym = f[g.index(i, j == 0 ? 1 : j - 1)];
                fyp = f[g.index(i, j == n - 1 ? n - 2 : j + 1)];
            }
            out[c] = (fxm + fxp + fym + fyp - 4.0 * f[c]) * ih2;
        }
    }
}

void gradient(const Grid& g, const double* f, double* out) {
    const int n = g.n;
    const long npts = g.points();
    const double i2h = 1.0 / (2.0 * g.h());
    if (g.dim == 1) {
        if (g.is_periodic()) {
            for (int i = 0; i < n; ++i) {
                int im = (i == 0) ? n - 1 : i - 1;
                int ip = (i == n - 1) ? 0 : i + 1;
                out[i] = (f[ip] - f[im]) * i2h;
            }
        } else {
            out[0] = 0.0;
            for (int i = 1; i < n - 1; ++i)
                out[i] = (f[i + 1] - f[i - 1]) * i2h;
            out[n - 1] = 0.0;
        }
        return;
    }
    double* gx = out;
    double* gy = out + npts;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            long c = g.index(i, j);
            if (g.is_periodic()) {
                gx[c] = (f[g.index(i == n - 1 ? 0 : i + 1, j)] -
                         f[g.index(i == 0 ? n - 1 : i - 1, j)]) * i2h;
                gy[c] = (f[g.index(i, j == n - 1 ? 0 : j + 1)] -
                         f[g.index(i, j == 0 ? n - 1 : j - 1)]) * i2h;
            } else {
                gx[c] = (i == 0 || i == n - 1)
                            ? 0.0
                            : (f[g.index(i + 1, j)] - f[g.index(i - 1, j)]) * i2h;
                gy[c] = (j == 0 || j == n - 1)
                            ? 0.0
                            : (f[g.index(i, j + 1)] - f[g.index(i, j - 1)]) * i2h;
            }
        }
    }
}

namespace {
// One axis of the negative gradient transpose on a Neumann grid. Interior
// neighbours carry unit trapezoid weight, so the formula only needs the
// receiving point's weight.
inline double neumann_axis_div(const double* v, int i, int n, long stride,
                               long base, double i2h) {
    double plus = (i + 1 <= n - 2) ? v[base + stride * (i + 1)] : 0.0;
    double minus = (i - 1 >= 1) ? v[base + stride * (i - 1)] : 0.0;
    double invw = (i == 0 || i == n - 1) ? 2.0 : 1.0;
    return (plus - minus) * i2h * invw;
}
} // namespace

void divergence(const Grid& g, const double* v, double* out) {
    const int n = g.n;
    const long npts = g.points();
    const double i2h = 1.0 / (2.0 * g.h());
    if (g.dim == 1) {
        if (g.is_periodic()) {
            for (int i = 0; i < n; ++i) {
                int im = (i == 0) ? n - 1 : i - 1;
                int ip = (i == n - 1) ? 0 : i + 1;
                out[i] = (v[ip] - v[im]) * i2h;
            }
        } else {
            for (int i = 0; i < n; ++i)
                out[i] = neumann_axis_div(v, i, n, 1, 0, i2h);
        }
        return;
    }
    const double* vx = v;
    const double* vy = v + npts;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            long c = g.index(i, j);
            double dx, dy;
            if (g.is_periodic()) {
                dx = (vx[g.index(i == n - 1 ? 0 : i + 1, j)] -
                      vx[g.index(i == 0 ? n - 1 : i - 1, j)]) * i2h;
                dy = (vy[g.index(i, j == n - 1 ? 0 : j + 1)] -
                      vy[g.index(i, j == 0 ? n - 1 : j - 1)]) * i2h;
            } else {
                dx = neumann_axis_div(vx, i, n, 1, g.index(0, j), i2h);
                dy = neumann_axis_div(vy, j, n, n, g.index(i, 0), i2h);
            }
            out[c] = dx + dy;
        }
    }
}

double weighted_sum(const Grid& g, const double* f) {
    const long npts = g.points();
    const long nblocks = (npts + reduction_block - 1) / reduction_block;
    double total = 0.0;
    for (long b = 0; b < nblocks; ++b) {
        long lo = b * reduction_block;
        long hi = std::min(npts, lo + reduction_block);
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += g.weight(i) * f[i];
        total += s;
    }
    return total;
}

double weighted_dot(const Grid& g, const double* f, const double* w) {
    const long npts = g.points();
    const long nblocks = (npts + reduction_block - 1) / reduction_block;
    double total = 0.0;
    for (long b = 0; b < nblocks; ++b) {
        long lo = b * reduction_block;
        long hi = std::min(npts, lo + reduction_block);
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += g.weight(i) * f[i] * w[i];
        total += s;
    }
    return total;
}

double vmax(const double* f, long n) {
    double m = f[0];
    for (long i = 1; i < n; ++i) m = std::max(m, f[i]);
    return m;
}

double vmin(const double* f, long n) {
    double m = f[0];
    for (long i = 1; i < n; ++i) m = std::min(m, f[i]);
    return m;
}

} // namespace ref
} // namespace mfg::kernels
