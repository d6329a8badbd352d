#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/grid.hpp"

namespace mfg {

// Coupling cost f(t,x,m) or terminal cost g(x,m): nondecreasing in m and
// bounded below. Built-in power family a*m^q plus tabulated callables.
// An optional cap (set by regularize_couplings) truncates at 1/eps.
struct Coupling {
    enum class Kind { Zero, Power, Tabulated };

    Kind kind = Kind::Zero;
    double a = 0.0;
    double q = 1.0;
    std::function<double(double t, std::span<const double> x, double m)> fn;
    double cap = std::numeric_limits<double>::infinity();

    static Coupling zero() { return {}; }
    static Coupling power(double a, double q);
    static Coupling tabulated(std::function<double(double, std::span<const double>, double)> f);

    double eval(double t, std::span<const double> x, double m) const;
    // Primitive F(t,x,m) = integral of f(t,x,s) ds over [0,m]; closed form
    // for the power family, adaptive Simpson for tabulated couplings.
    double primitive(double t, std::span<const double> x, double m) const;

    bool monotone_on(double t, std::span<const double> x, double lo, double hi,
                     int samples = 65) const;
};

enum class M0Kind { Uniform, Bump, TwoMode };

struct M0Params {
    double amplitude = 0.0;    // first mode
    double amplitude2 = 0.0;   // second mode (TwoMode only)
};

// Positive initial density with unit mass on the grid.
std::vector<double> sample_m0(M0Kind kind, const Grid& grid, const M0Params& params = {});

struct ProblemData {
    Grid grid;
    Coupling f;                // running coupling f(t,x,m)
    Coupling g;                // terminal coupling g(x,m); t argument ignored
    std::vector<double> m0;    // unit mass, bounded below by floor_c > 0
    double floor_c = 0.0;

    static ProblemData make(const Grid& grid, Coupling f, Coupling g,
                            std::vector<double> m0);

    // Sampled audit of the structural hypotheses on f, g, m0: monotone in m,
    // bounded below, positive unit-mass initial density.
    void validate() const;
};

// Caps f_L(t,x) = sup_{m in [0,L]} f(t,x,m) (= f(t,x,L) for nondecreasing f)
// as a field over the time-space lattice, and g_L(x) over the grid.
// Flags a monotonicity violation before capping.
struct CappedCouplings {
    SpaceTimeField f_L;           // scalar over (t_k, x)
    std::vector<double> g_L;      // over the grid
};
CappedCouplings coupling_cap(const ProblemData& data, const TimeGrid& time, double L);

// f_eps = min(f, 1/eps), g_eps = min(g, 1/eps).
ProblemData regularize_couplings(const ProblemData& data, double eps);

} // namespace mfg
