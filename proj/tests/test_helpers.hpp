#pragma once

#include <random>
#include <span>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"
#include "mfg/ops.hpp"

namespace mfg::testing {

inline std::vector<double> random_field(const Grid& g, std::mt19937_64& rng, double lo = -1.0,
                                        double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> f(g.points());
    for (auto& v : f) v = dist(rng);
    return f;
}

inline std::vector<double> random_vector_field(const Grid& g, std::mt19937_64& rng,
                                               double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> f(g.points() * g.dim);
    for (auto& v : f) v = dist(rng);
    return f;
}

// <grad phi, v> + <phi, div v> in the quadrature inner product; zero up to
// roundoff by construction of the divergence.
inline double pairing_residual(const Grid& g, std::span<const double> phi,
                               std::span<const double> v) {
    auto gphi = gradient(phi, g);
    auto divv = divergence_adjoint(v, g);
    double s = inner(phi, divv, g);
    for (int c = 0; c < g.dim; ++c) {
        std::span<const double> gc(gphi.data() + c * g.points(), g.points());
        std::span<const double> vc(v.data() + c * g.points(), g.points());
        s += inner(gc, vc, g);
    }
    return s;
}

inline double sup_diff_field(const SpaceTimeField& a, const SpaceTimeField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        s = std::max(s, std::abs(a.data()[i] - b.data()[i]));
    return s;
}

} // namespace mfg::testing
