#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/ops.hpp"
#include "mfg/problem_data.hpp"

using namespace mfg;

namespace {
const double x0[1] = {0.1};
const std::span<const double> xs(x0, 1);
} // namespace

TEST_CASE("coupling evaluation, caps, primitives") {
    Coupling f = Coupling::power(1.0, 1.0); // f(m) = m
    CHECK(f.eval(0, xs, 2.5) == doctest::Approx(2.5));
    CHECK(f.primitive(0, xs, 2.0) == doctest::Approx(2.0));

    Coupling f2 = Coupling::power(1.0, 2.0);
    CHECK(f2.eval(0, xs, 3.0) == doctest::Approx(9.0));

    Coupling z = Coupling::zero();
    CHECK(z.eval(0, xs, 7.0) == 0.0);
    CHECK(z.primitive(0, xs, 7.0) == 0.0);

    // capped primitive goes through quadrature and stays consistent
    Coupling fc = f;
    fc.cap = 1.5;
    CHECK(fc.eval(0, xs, 10.0) == doctest::Approx(1.5));
    // integral of min(s, 1.5) over [0,4] = 1.125 + 2.5*1.5
    CHECK(fc.primitive(0, xs, 4.0) == doctest::Approx(1.125 + 2.5 * 1.5).epsilon(1e-6));

    CHECK_THROWS_AS(Coupling::power(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("sample_m0: mass, floors, rejection") {
    // uniform on the unit torus is the constant 1
    {
        Grid g = Grid::periodic(1, 32);
        auto m0 = sample_m0(M0Kind::Uniform, g);
        for (double v : m0) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    }
    // single-mode bump 1 + 0.5 cos(2 pi x): unit mass, min 0.5
    {
        Grid g = Grid::periodic(1, 64);
        auto m0 = sample_m0(M0Kind::Bump, g, {0.5, 0.0});
        CHECK(integrate(m0, g) == doctest::Approx(1.0).epsilon(1e-12));
        double lo = m0[0];
        for (double v : m0) lo = std::min(lo, v);
        CHECK(lo == doctest::Approx(0.5).epsilon(1e-10));
    }
    // amplitude >= baseline is rejected before normalization
    {
        Grid g = Grid::periodic(1, 16);
        CHECK_THROWS_AS(sample_m0(M0Kind::Bump, g, {1.0, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(sample_m0(M0Kind::TwoMode, g, {0.7, 0.4}), std::invalid_argument);
    }
    // every kind lands at unit mass with a positive floor, both boundaries, both dims
    for (Grid g : {Grid::periodic(1, 48), Grid::neumann(1, 49), Grid::periodic(2, 20),
                   Grid::neumann(2, 21)}) {
        for (M0Kind kind : {M0Kind::Uniform, M0Kind::Bump, M0Kind::TwoMode}) {
            auto m0 = sample_m0(kind, g, {0.3, 0.15});
            CHECK(std::abs(integrate(m0, g) - 1.0) <= 1e-12);
            double lo = m0[0];
            for (double v : m0) lo = std::min(lo, v);
            CHECK(lo > 0.0);
        }
    }
}

TEST_CASE("ProblemData: construction audits") {
    Grid g = Grid::periodic(1, 32);
    auto m0 = sample_m0(M0Kind::Bump, g, {0.4, 0.0});
    ProblemData data =
        ProblemData::make(g, Coupling::power(1.0, 1.0), Coupling::power(1.0, 1.0), m0);
    CHECK(data.floor_c > 0.0);

    // nonmonotone coupling is flagged
    auto bad = Coupling::tabulated(
        [](double, std::span<const double>, double m) { return -m; });
    CHECK_THROWS_AS(ProblemData::make(g, bad, Coupling::zero(), m0), std::invalid_argument);

    // monotonicity audit on random sample pairs
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> md(0.0, 6.0);
    for (int trial = 0; trial < 200; ++trial) {
        double a = md(rng), b = md(rng);
        if (a > b) std::swap(a, b);
        CHECK(data.f.eval(0, xs, a) <= data.f.eval(0, xs, b) + 1e-14);
        CHECK(data.g.eval(0, xs, a) <= data.g.eval(0, xs, b) + 1e-14);
    }
    // bounded below with C = 0 for the power family
    CHECK(data.f.eval(0, xs, 0.0) >= 0.0);
    CHECK(data.g.eval(0, xs, 0.0) >= 0.0);
}

TEST_CASE("coupling_cap: monotone sup hits the right endpoint") {
    Grid g = Grid::periodic(1, 16);
    TimeGrid time(1.0, 4);
    auto m0 = sample_m0(M0Kind::Uniform, g);

    // f(m) = m: f_L = L everywhere
    {
        ProblemData data =
            ProblemData::make(g, Coupling::power(1.0, 1.0), Coupling::power(2.0, 1.0), m0);
        auto caps = coupling_cap(data, time, 3.0);
        for (int k = 0; k <= time.steps; ++k)
            for (double v : caps.f_L.slice(k)) CHECK(v == doctest::Approx(3.0));
        for (double v : caps.g_L) CHECK(v == doctest::Approx(6.0));
    }
    // f(m) = m^2 with L = 3 caps at 9
    {
        ProblemData data =
            ProblemData::make(g, Coupling::power(1.0, 2.0), Coupling::zero(), m0);
        auto caps = coupling_cap(data, time, 3.0);
        CHECK(caps.f_L.at(0, 0, 0) == doctest::Approx(9.0));
    }
    // cap monotone in L
    {
        ProblemData data =
            ProblemData::make(g, Coupling::power(1.0, 2.0), Coupling::power(1.0, 1.0), m0);
        auto c1 = coupling_cap(data, time, 1.5);
        auto c2 = coupling_cap(data, time, 2.5);
        for (long i = 0; i < g.points(); ++i) {
            CHECK(c1.f_L.at(0, 0, i) <= c2.f_L.at(0, 0, i) + 1e-14);
            CHECK(c1.g_L[i] <= c2.g_L[i] + 1e-14);
        }
    }
    // a nonmonotone tabulated input is flagged before capping
    {
        ProblemData data =
            ProblemData::make(g, Coupling::power(1.0, 1.0), Coupling::zero(), m0);
        data.f = Coupling::tabulated(
            [](double, std::span<const double>, double m) { return std::sin(3.0 * m); });
        CHECK_THROWS_AS(coupling_cap(data, time, 4.0), std::invalid_argument);
    }
}

TEST_CASE("regularize_couplings: truncation at 1/eps") {
    Grid g = Grid::periodic(1, 16);
    auto m0 = sample_m0(M0Kind::Uniform, g);
    ProblemData data =
        ProblemData::make(g, Coupling::power(1.0, 1.0), Coupling::power(1.0, 1.0), m0);

    // f(m) = m, eps = 0.25: f_eps(10) = 4
    ProblemData reg = regularize_couplings(data, 0.25);
    CHECK(reg.f.eval(0, xs, 10.0) == doctest::Approx(4.0));
    CHECK(reg.f.eval(0, xs, 2.0) == doctest::Approx(2.0));

    // bounded coupling below the cap is untouched
    ProblemData reg2 = regularize_couplings(data, 1e-6);
    for (double m : {0.0, 0.5, 3.0, 100.0})
        CHECK(reg2.f.eval(0, xs, m) == doctest::Approx(data.f.eval(0, xs, m)));

    // eps -> 0 pointwise recovery on samples
    for (double m : {0.5, 2.0, 7.0}) {
        double prev = -1e300;
        for (double eps : {1.0, 0.5, 0.1, 1e-3}) {
            double v = regularize_couplings(data, eps).f.eval(0, xs, m);
            CHECK(v >= prev - 1e-14);
            prev = v;
        }
        CHECK(prev == doctest::Approx(data.f.eval(0, xs, m)));
    }

    // monotonicity preserved
    CHECK(reg.f.monotone_on(0, xs, 0.0, 20.0));
    CHECK_THROWS_AS(regularize_couplings(data, 0.0), std::invalid_argument);
}
