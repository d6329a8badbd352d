#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/diagnostics.hpp"

using namespace mfg;

TEST_CASE("truncation T_k") {
    CHECK(truncate_Tk(3.0, 2.0) == 2.0);
    CHECK(truncate_Tk(-5.0, 2.0) == -2.0);
    CHECK(truncate_Tk(1.0, 2.0) == 1.0);
    CHECK_THROWS_AS(truncate_Tk(1.0, 0.0), std::invalid_argument);

    // T_k is idempotent and bounded
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> vd(-10.0, 10.0), kd(0.5, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        double v = vd(rng), k = kd(rng);
        double t = truncate_Tk(v, k);
        CHECK(std::abs(t) <= k);
        CHECK(truncate_Tk(t, k) == t);
        if (std::abs(v) <= k) CHECK(t == v);
    }
    auto vec = truncate_Tk(std::vector<double>{-3.0, 0.5, 3.0}, 1.0);
    CHECK(vec == std::vector<double>{-1.0, 0.5, 1.0});
}

namespace {
// Piecewise quadrature oracle for S_1: integrate the defining slope.
double s1_quadrature(double r) {
    auto slope = [](double s) {
        double a = std::abs(s);
        if (a <= 1.0) return 1.0;
        if (a <= 2.0) return 2.0 - a;
        return 0.0;
    };
    const int N = 200000;
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
        double s = r * (i + 0.5) / N;
        sum += slope(s) * r / N;
    }
    return sum;
}
} // namespace

TEST_CASE("auxiliary ramps S_n") {
    CHECK(aux_Sn(0.5, 1.0) == doctest::Approx(0.5));          // identity region
    CHECK(aux_Sn(3.0, 1.0) == doctest::Approx(1.5));          // saturated: 1 + 1/2
    CHECK(aux_Sn(3.0, 1.0) == doctest::Approx(s1_quadrature(3.0)).epsilon(1e-6));
    CHECK(aux_Sn(1.7, 1.0) == doctest::Approx(s1_quadrature(1.7)).epsilon(1e-6));
    CHECK(aux_Sn(-3.0, 1.0) == doctest::Approx(-1.5));
    CHECK_THROWS_AS(aux_Sn(1.0, 0.5), std::invalid_argument);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> vd(-30.0, 30.0);
    for (int trial = 0; trial < 500; ++trial) {
        double v = vd(rng);
        for (double n : {1.0, 2.0, 8.0}) {
            double s = aux_Sn(v, n);
            if (std::abs(v) <= n) CHECK(s == doctest::Approx(v));     // S_n(r) = r on [-n, n]
            CHECK(std::abs(s) <= 1.5 * n + 1e-12);
            // |S_n'| <= 1 via a difference quotient
            double h = 1e-6;
            CHECK(std::abs(aux_Sn(v + h, n) - s) <= h * (1.0 + 1e-6));
            if (std::abs(v) >= 2.0 * n + h)
                CHECK(aux_Sn(v + h, n) == doctest::Approx(s)); // flat beyond 2n
        }
    }
    // pointwise convergence to the identity as n grows
    for (double v : {-7.3, 0.2, 4.9}) {
        double err_small = std::abs(aux_Sn(v, 2.0) - v);
        double err_big = std::abs(aux_Sn(v, 64.0) - v);
        CHECK(err_big <= err_small);
        CHECK(err_big == doctest::Approx(0.0));
    }
}
