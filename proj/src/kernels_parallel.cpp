#include "mfg/kernels.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mfg::kernels::par {

// OpenMP twins of the reference kernels. Every output element is written by
// exactly one thread, so elementwise results match the serial backend
// bitwise. Reductions keep the serial block layout and only parallelize
// across blocks.

void laplacian(const Grid& g, const double* f, double* out) {
    const int n = g.n;
    const double ih2 = 1.0 / (g.h() * g.h());
    if (g.dim == 1) {
        if (g.is_periodic()) {
#pragma omp parallel for schedule(static)
            for (int i = 0; i < n; ++i) {
                int im = (i == 0) ? n - 1 : i - 1;
                int ip = (i == n - 1) ? 0 : i + 1;
                out[i] = (f[im] - 2.0 * f[i] + f[ip]) * ih2;
            }
        } else {
#pragma omp parallel for schedule(static)
            for (int i = 0; i < n; ++i) {
                if (i == 0)
                    out[i] = (2.0 * f[1] - 2.0 * f[0]) * ih2;
                else if (i == n - 1)
                    out[i] = (2.0 * f[n - 2] - 2.0 * f[n - 1]) * ih2;
                else
                    out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * ih2;
            }
        }
        return;
    }
    const bool per = g.is_periodic();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        int jm = per ? (j == 0 ? n - 1 : j - 1) : (j == 0 ? 1 : j - 1);
        int jp = per ? (j == n - 1 ? 0 : j + 1) : (j == n - 1 ? n - 2 : j + 1);
        for (int i = 0; i < n; ++i) {
            int im = per ? (i == 0 ? n - 1 : i - 1) : (i == 0 ? 1 : i - 1);
            int ip = per ? (i == n - 1 ? 0 : i + 1) : (i == n - 1 ? n - 2 : i + 1);
            long c = g.index(i, j);
            out[c] = (f[g.index(im, j)] + f[g.index(ip, j)] + f[g.index(i, jm)] +
                      f[g.index(i, jp)] - 4.0 * f[c]) * ih2;
        }
    }
}

void gradient(const Grid& g, const double* f, double* out) {
    const int n = g.n;
    const long npts = g.points();
    const double i2h = 1.0 / (2.0 * g.h());
    const bool per = g.is_periodic();
    if (g.dim == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            if (!per && (i == 0 || i == n - 1)) {
                out[i] = 0.0;
            } else {
                int im = (i == 0) ? n - 1 : i - 1;
                int ip = (i == n - 1) ? 0 : i + 1;
                out[i] = (f[ip] - f[im]) * i2h;
            }
        }
        return;
    }
    double* gx = out;
    double* gy = out + npts;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            long c = g.index(i, j);
            if (per) {
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
    const bool per = g.is_periodic();
    if (g.dim == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            if (per) {
                int im = (i == 0) ? n - 1 : i - 1;
                int ip = (i == n - 1) ? 0 : i + 1;
                out[i] = (v[ip] - v[im]) * i2h;
            } else {
                out[i] = neumann_axis_div(v, i, n, 1, 0, i2h);
            }
        }
        return;
    }
    const double* vx = v;
    const double* vy = v + npts;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            long c = g.index(i, j);
            double dx, dy;
            if (per) {
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
    std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (long b = 0; b < nblocks; ++b) {
        long lo = b * reduction_block;
        long hi = std::min(npts, lo + reduction_block);
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += g.weight(i) * f[i];
        partial[b] = s;
    }
    double total = 0.0;
    for (long b = 0; b < nblocks; ++b) total += partial[b];
    return total;
}

double weighted_dot(const Grid& g, const double* f, const double* w) {
    const long npts = g.points();
    const long nblocks = (npts + reduction_block - 1) / reduction_block;
    std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (long b = 0; b < nblocks; ++b) {
        long lo = b * reduction_block;
        long hi = std::min(npts, lo + reduction_block);
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += g.weight(i) * f[i] * w[i];
        partial[b] = s;
    }
    double total = 0.0;
    for (long b = 0; b < nblocks; ++b) total += partial[b];
    return total;
}

double vmax(const double* f, long n) {
    double m = f[0];
#pragma omp parallel for reduction(max : m) schedule(static)
    for (long i = 0; i < n; ++i) m = std::max(m, f[i]);
    return m;
}

double vmin(const double* f, long n) {
    double m = f[0];
#pragma omp parallel for reduction(min : m) schedule(static)
    for (long i = 0; i < n; ++i) m = std::min(m, f[i]);
    return m;
}

} // namespace mfg::kernels::par
