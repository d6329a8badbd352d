// Timing comparison of the serial reference kernels against the OpenMP
// kernels, plus a cross-check that both produce the same values.
// Usage: bench_kernels [n_1d] [n_2d] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mfg/kernels.hpp"
#include "mfg/ops.hpp"

using namespace mfg;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_per_call(const std::function<void()>& fn, int repeats) {
    fn(); // warm up
    auto t0 = clock_type::now();
    for (int i = 0; i < repeats; ++i) fn();
    auto dt = std::chrono::duration<double, std::milli>(clock_type::now() - t0);
    return dt.count() / repeats;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void bench_grid(const Grid& g, int repeats) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const long npts = g.points();
    std::vector<double> f(npts), v(npts * g.dim);
    for (auto& x : f) x = dist(rng);
    for (auto& x : v) x = dist(rng);
    std::vector<double> out_s(npts), out_p(npts), gout_s(npts * g.dim), gout_p(npts * g.dim);

    struct Row {
        const char* name;
        double serial_ms, parallel_ms, diff;
    };
    std::vector<Row> rows;

    rows.push_back({"laplacian",
                    ms_per_call([&] { kernels::ref::laplacian(g, f.data(), out_s.data()); }, repeats),
                    ms_per_call([&] { kernels::par::laplacian(g, f.data(), out_p.data()); }, repeats),
                    0.0});
    rows.back().diff = max_diff(out_s, out_p);

    rows.push_back({"gradient",
                    ms_per_call([&] { kernels::ref::gradient(g, f.data(), gout_s.data()); }, repeats),
                    ms_per_call([&] { kernels::par::gradient(g, f.data(), gout_p.data()); }, repeats),
                    0.0});
    rows.back().diff = max_diff(gout_s, gout_p);

    rows.push_back({"divergence",
                    ms_per_call([&] { kernels::ref::divergence(g, v.data(), out_s.data()); }, repeats),
                    ms_per_call([&] { kernels::par::divergence(g, v.data(), out_p.data()); }, repeats),
                    0.0});
    rows.back().diff = max_diff(out_s, out_p);

    double ws = 0, wp = 0;
    rows.push_back({"weighted_sum",
                    ms_per_call([&] { ws = kernels::ref::weighted_sum(g, f.data()); }, repeats),
                    ms_per_call([&] { wp = kernels::par::weighted_sum(g, f.data()); }, repeats),
                    std::abs(ws - wp)});

    std::printf("grid: dim=%d n=%d (%ld points), %s\n", g.dim, g.n, npts,
                g.is_periodic() ? "periodic" : "neumann");
    std::printf("%-14s %12s %12s %10s %12s\n", "kernel", "serial ms", "openmp ms", "speedup",
                "max |diff|");
    for (const auto& r : rows)
        std::printf("%-14s %12.4f %12.4f %9.2fx %12.3g\n", r.name, r.serial_ms, r.parallel_ms,
                    r.serial_ms / r.parallel_ms, r.diff);
    std::printf("\n");
}

} // namespace

int main(int argc, char** argv) {
    int n1 = argc > 1 ? std::atoi(argv[1]) : 1 << 20;
    int n2 = argc > 2 ? std::atoi(argv[2]) : 1024;
    int repeats = argc > 3 ? std::atoi(argv[3]) : 20;
#ifdef _OPENMP
    std::printf("openmp threads: %d\n\n", omp_get_max_threads());
#endif
    bench_grid(Grid::periodic(1, n1), repeats);
    bench_grid(Grid::periodic(2, n2), repeats);
    bench_grid(Grid::neumann(2, n2), repeats);
    return 0;
}
