#pragma once

#include "mfg/grid.hpp"

namespace mfg::kernels {

// Two interchangeable kernel backends: a plain serial reference and an
// OpenMP-parallel implementation. Elementwise kernels produce bitwise
// identical output in both. Reductions use a fixed block decomposition
// (serial combine over blocks) so sums are also bitwise reproducible
// regardless of backend or thread count.
enum class Backend { Serial, Parallel };

void set_backend(Backend b);
Backend backend();

inline constexpr long reduction_block = 1024;

// Serial reference kernels.
namespace ref {
void laplacian(const Grid& g, const double* f, double* out);
void gradient(const Grid& g, const double* f, double* out);          // dim * npts
void divergence(const Grid& g, const double* v, double* out);        // v: dim * npts
double weighted_sum(const Grid& g, const double* f);
double weighted_dot(const Grid& g, const double* f, const double* w);
double vmax(const double* f, long n);
double vmin(const double* f, long n);
} // namespace ref

// OpenMP kernels; same contracts as ref.
namespace par {
void laplacian(const Grid& g, const double* f, double* out);
void gradient(const Grid& g, const double* f, double* out);
void divergence(const Grid& g, const double* v, double* out);
double weighted_sum(const Grid& g, const double* f);
double weighted_dot(const Grid& g, const double* f, const double* w);
double vmax(const double* f, long n);
double vmin(const double* f, long n);
} // namespace par

} // namespace mfg::kernels
