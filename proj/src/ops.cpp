#include "mfg/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace mfg {

namespace {
void check_scalar(std::span<const double> f, const Grid& g, const char* op) {
    if (long(f.size()) != g.points())
        throw std::invalid_argument(std::string(op) + ": field slice does not match grid");
}
void check_vector(std::span<const double> v, const Grid& g, const char* op) {
    if (long(v.size()) != g.points() * g.dim)
        throw std::invalid_argument(std::string(op) + ": vector slice does not match grid");
}
bool par() { return kernels::backend() == kernels::Backend::Parallel; }
} // namespace

void laplacian(std::span<const double> f, const Grid& g, std::span<double> out) {
    check_scalar(f, g, "laplacian");
    check_scalar(out, g, "laplacian");
    if (par())
        kernels::par::laplacian(g, f.data(), out.data());
    else
        kernels::ref::laplacian(g, f.data(), out.data());
}

std::vector<double> laplacian(std::span<const double> f, const Grid& g) {
    std::vector<double> out(g.points());
    laplacian(f, g, out);
    return out;
}

void gradient(std::span<const double> f, const Grid& g, std::span<double> out) {
    check_scalar(f, g, "gradient");
    check_vector(out, g, "gradient");
    if (par())
        kernels::par::gradient(g, f.data(), out.data());
    else
        kernels::ref::gradient(g, f.data(), out.data());
}

std::vector<double> gradient(std::span<const double> f, const Grid& g) {
    std::vector<double> out(g.points() * g.dim);
    gradient(f, g, out);
    return out;
}

void divergence_adjoint(std::span<const double> v, const Grid& g, std::span<double> out) {
    check_vector(v, g, "divergence_adjoint");
    check_scalar(out, g, "divergence_adjoint");
    if (par())
        kernels::par::divergence(g, v.data(), out.data());
    else
        kernels::ref::divergence(g, v.data(), out.data());
}

std::vector<double> divergence_adjoint(std::span<const double> v, const Grid& g) {
    std::vector<double> out(g.points());
    divergence_adjoint(v, g, out);
    return out;
}

double integrate(std::span<const double> f, const Grid& g) {
    check_scalar(f, g, "integrate");
    return par() ? kernels::par::weighted_sum(g, f.data())
                 : kernels::ref::weighted_sum(g, f.data());
}

double inner(std::span<const double> f, std::span<const double> w, const Grid& g) {
    check_scalar(f, g, "inner");
    check_scalar(w, g, "inner");
    return par() ? kernels::par::weighted_dot(g, f.data(), w.data())
                 : kernels::ref::weighted_dot(g, f.data(), w.data());
}

double lp_norm(std::span<const double> f, const Grid& g, double p) {
    check_scalar(f, g, "lp_norm");
    double s = 0.0;
    const long npts = g.points();
    for (long i = 0; i < npts; ++i) s += g.weight(i) * std::pow(std::abs(f[i]), p);
    return std::pow(s, 1.0 / p);
}

Norms norms(std::span<const double> f, const Grid& g, double p) {
    check_scalar(f, g, "norms");
    Norms r;
    r.sup = par() ? kernels::par::vmax(f.data(), long(f.size()))
                  : kernels::ref::vmax(f.data(), long(f.size()));
    r.inf = par() ? kernels::par::vmin(f.data(), long(f.size()))
                  : kernels::ref::vmin(f.data(), long(f.size()));
    r.lp = lp_norm(f, g, p);
    return r;
}

double sup_abs(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

} // namespace mfg
