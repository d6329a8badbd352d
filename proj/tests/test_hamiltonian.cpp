#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/hamiltonian.hpp"

using namespace mfg;

namespace {

const std::span<const double> no_x{};

double H1(const HamiltonianSpec& s, double m, double p) {
    return s.value(0.0, no_x, m, std::span<const double>(&p, 1));
}
double G1(const HamiltonianSpec& s, double m, double p) {
    double g;
    s.grad_p(0.0, no_x, m, std::span<const double>(&p, 1), std::span<double>(&g, 1));
    return g;
}

// Independent conjugate oracle: dense scan of s |v| - h s^r refined around
// the best sample.
double conjugate_scan(double h, double r, double v) {
    auto phi = [&](double s) { return s * v - h * std::pow(s, r); };
    double lo = 0.0, hi = 4.0 * std::pow(v / (r * h) + 1.0, 1.0 / (r - 1.0));
    double best = 0.0, bests = 0.0;
    for (int pass = 0; pass < 6; ++pass) {
        const int N = 2000;
        for (int i = 0; i <= N; ++i) {
            double s = lo + (hi - lo) * i / N;
            double val = phi(s);
            if (val > best) {
                best = val;
                bests = s;
            }
        }
        double w = (hi - lo) / N;
        lo = std::max(0.0, bests - 2.0 * w);
        hi = bests + 2.0 * w;
    }
    return best;
}

} // namespace

TEST_CASE("spec construction invariants") {
    CHECK_THROWS_AS(HamiltonianSpec::canonical(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(HamiltonianSpec::canonical(2.0, -0.1), std::invalid_argument);
    HamiltonianSpec s = HamiltonianSpec::canonical(1.4, 0.5);
    CHECK(s.r_prime() == doctest::Approx(3.5));
    CHECK(s.r_prime() > 2.0); // r < 2 forces a superquadratic conjugate
    CHECK(s.lambda == doctest::Approx(0.5 / 0.4));
}

TEST_CASE("value and derivatives: pinned points") {
    // H(m=1, p=(1,0)) = 0.5 at r=2, alpha=1
    HamiltonianSpec s21 = HamiltonianSpec::canonical(2.0, 1.0);
    double p2[2] = {1.0, 0.0};
    CHECK(s21.value(0.0, no_x, 1.0, {p2, 2}) == doctest::Approx(0.5));
    double g2[2];
    s21.grad_p(0.0, no_x, 1.0, {p2, 2}, {g2, 2});
    CHECK(g2[0] == doctest::Approx(1.0));
    CHECK(g2[1] == doctest::Approx(0.0));
    CHECK(s21.dm(0.0, no_x, 1.0, {p2, 2}) == doctest::Approx(-0.5));

    // H(m, 0) = 0 and grad at 0 is the limit value 0
    double z[2] = {0.0, 0.0};
    CHECK(s21.value(0.0, no_x, 0.7, {z, 2}) == 0.0);
    s21.grad_p(0.0, no_x, 0.7, {z, 2}, {g2, 2});
    CHECK(g2[0] == 0.0);

    // r=1.4, alpha=0.5: H(2, (1)) = 1/(1.4 sqrt(2))
    HamiltonianSpec s14 = HamiltonianSpec::canonical(1.4, 0.5);
    CHECK(H1(s14, 2.0, 1.0) == doctest::Approx(1.0 / (1.4 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(H1(s14, 2.0, 1.0) == doctest::Approx(0.50508).epsilon(1e-4));

    // r=1.4, alpha=1: grad_p H(2, (1)) = 0.5
    HamiltonianSpec s141 = HamiltonianSpec::canonical(1.4, 1.0);
    CHECK(G1(s141, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-13));

    // alpha = 0: no density dependence
    HamiltonianSpec s0 = HamiltonianSpec::canonical(1.7, 0.0);
    double p1 = 0.9;
    CHECK(s0.dm(0.0, no_x, 1.0, {&p1, 1}) == 0.0);
    CHECK(s0.dm(0.0, no_x, 3.0, {&p1, 1}) == 0.0);

    // domain errors
    CHECK_THROWS_AS(H1(s14, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(H1(s14, 0.0, 1.0), std::domain_error);
    // with eps > 0 the density argument is clamped instead
    HamiltonianSpec se = HamiltonianSpec::canonical(1.4, 0.5, 0.1);
    CHECK(H1(se, -1.0, 1.0) == doctest::Approx(H1(s14, 0.1, 1.0)));
    // Hessian singular at p = 0 only for r < 2
    double hm[4];
    double z1 = 0.0;
    CHECK_THROWS_AS(s14.hess_p(0.0, no_x, 1.0, std::span<const double>(&z1, 1),
                               std::span<double>(hm, 1)),
                    std::domain_error);
    s21.hess_p(0.0, no_x, 2.0, {z, 2}, {hm, 4});
    CHECK(hm[0] == doctest::Approx(0.5));
    CHECK(hm[3] == doctest::Approx(0.5));
    CHECK(hm[1] == 0.0);
}

TEST_CASE("derivatives match central finite differences at 100 regular points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> md(0.5, 2.5), pd(-2.0, 2.0), rd(1.2, 2.4),
        ad(0.0, 1.2);
    for (int trial = 0; trial < 100; ++trial) {
        double r = rd(rng), alpha = ad(rng);
        HamiltonianSpec s = HamiltonianSpec::canonical(r, alpha);
        const int d = 1 + (trial % 2);
        double m = md(rng);
        double p[2] = {pd(rng), d == 2 ? pd(rng) : 0.0};
        double np = std::sqrt(p[0] * p[0] + p[1] * p[1]);
        if (np < 0.3) p[0] += 0.5;
        std::span<const double> ps(p, std::size_t(d));
        const double dm_step = 1e-6, dp = 1e-6;

        // dm against central difference of value
        double fd = (s.value(0, no_x, m + dm_step, ps) - s.value(0, no_x, m - dm_step, ps)) /
                    (2 * dm_step);
        CHECK(s.dm(0, no_x, m, ps) ==
              doctest::Approx(fd).epsilon(1e-5).scale(std::abs(fd) + 1e-8));

        // grad_p against central differences
        double g[2];
        s.grad_p(0, no_x, m, ps, {g, std::size_t(d)});
        double gp_hi[2], gp_lo[2];
        for (int c = 0; c < d; ++c) {
            double pp[2] = {p[0], p[1]}, pm[2] = {p[0], p[1]};
            pp[c] += dp;
            pm[c] -= dp;
            double fdc = (s.value(0, no_x, m, {pp, std::size_t(d)}) -
                          s.value(0, no_x, m, {pm, std::size_t(d)})) /
                         (2 * dp);
            CHECK(g[c] == doctest::Approx(fdc).epsilon(1e-5).scale(std::abs(fdc) + 1e-8));
        }

        // dm_grad_p against central difference of grad_p in m
        double dgp[2];
        s.dm_grad_p(0, no_x, m, ps, {dgp, std::size_t(d)});
        s.grad_p(0, no_x, m + dm_step, ps, {gp_hi, std::size_t(d)});
        s.grad_p(0, no_x, m - dm_step, ps, {gp_lo, std::size_t(d)});
        for (int c = 0; c < d; ++c) {
            double fdc = (gp_hi[c] - gp_lo[c]) / (2 * dm_step);
            CHECK(dgp[c] == doctest::Approx(fdc).epsilon(1e-5).scale(std::abs(fdc) + 1e-8));
        }

        // hess_p against central differences of grad_p in p
        double hm[4];
        s.hess_p(0, no_x, m, ps, {hm, std::size_t(d * d)});
        for (int c = 0; c < d; ++c) {
            double pp[2] = {p[0], p[1]}, pm[2] = {p[0], p[1]};
            pp[c] += dp;
            pm[c] -= dp;
            s.grad_p(0, no_x, m, {pp, std::size_t(d)}, {gp_hi, std::size_t(d)});
            s.grad_p(0, no_x, m, {pm, std::size_t(d)}, {gp_lo, std::size_t(d)});
            for (int rr = 0; rr < d; ++rr) {
                double fdc = (gp_hi[rr] - gp_lo[rr]) / (2 * dp);
                CHECK(hm[rr * d + c] ==
                      doctest::Approx(fdc).epsilon(1e-5).scale(std::abs(fdc) + 1e-8));
            }
        }
    }
    // the spec's pinned finite-difference point
    HamiltonianSpec s = HamiltonianSpec::canonical(1.4, 0.5);
    double m = 1.3, p = 0.7, dlt = 1e-5;
    double fd = (H1(s, m + dlt, p) - H1(s, m - dlt, p)) / (2 * dlt);
    CHECK(std::abs(s.dm(0, no_x, m, std::span<const double>(&p, 1)) - fd) <= 1e-6);
}

TEST_CASE("kappa clamp") {
    CHECK(kappa_eps(0.1, 0.05) == doctest::Approx(0.1));
    CHECK(kappa_eps(0.1, 5.0) == doctest::Approx(5.0));
    CHECK(kappa_eps(0.1, 100.0) == doctest::Approx(10.0));
    CHECK(kappa_eps(0.1, -3.0) == doctest::Approx(0.1));
}

TEST_CASE("regularized Hamiltonian") {
    // H_eps = H/(1 + eps H^{(r-1)/r}); with H = 1 and eps = 0.5 this is 2/3
    HamiltonianSpec s = HamiltonianSpec::canonical(2.0, 0.0, 0.5);
    double p = std::sqrt(2.0); // H = |p|^2/2 = 1
    CHECK(s.value_reg(0, no_x, 1.0, std::span<const double>(&p, 1)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // p = 0: value and gradient vanish
    double z = 0.0, g = 1.0;
    CHECK(s.value_reg(0, no_x, 1.0, std::span<const double>(&z, 1)) == 0.0);
    s.grad_p_reg(0, no_x, 1.0, std::span<const double>(&z, 1), std::span<double>(&g, 1));
    CHECK(g == 0.0);

    // eps -> 0 limit at the pinned point
    HamiltonianSpec s6 = HamiltonianSpec::canonical(2.0, 1.0, 1e-6);
    double p2[2] = {1.0, 0.0};
    CHECK(std::abs(s6.value_reg(0, no_x, 1.0, {p2, 2}) - 0.5) <= 1e-6);

    // sandwich on a wide sample set
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> md(0.05, 20.0), pd(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        double m = md(rng), pv = pd(rng);
        std::span<const double> ps(&pv, 1);
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
            HamiltonianSpec se = HamiltonianSpec::canonical(1.4, 0.8, eps);
            double he = se.value_reg(0, no_x, m, ps);
            double cap =
                HamiltonianSpec::canonical(1.4, 0.8).value(0, no_x, kappa_eps(eps, m), ps);
            CHECK(he >= 0.0);
            CHECK(he <= cap * (1.0 + 1e-12));
        }
    }
    // monotone increase as eps decreases, sampled where kappa is the
    // identity for every eps in the ladder (outside, the moving clamp can
    // break pointwise monotonicity for alpha > 0)
    std::uniform_real_distribution<double> mid(0.15, 9.5);
    for (int trial = 0; trial < 200; ++trial) {
        double m = mid(rng), pv = pd(rng);
        std::span<const double> ps(&pv, 1);
        double prev = -1.0;
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
            HamiltonianSpec se = HamiltonianSpec::canonical(1.4, 0.8, eps);
            double he = se.value_reg(0, no_x, m, ps);
            CHECK(he >= prev - 1e-12);
            prev = he;
        }
    }

    // bounded slope: |grad H_eps| stays bounded as |p| grows
    HamiltonianSpec sb = HamiltonianSpec::canonical(1.4, 0.5, 1e-2);
    double worst = 0.0;
    for (double pv : {1.0, 10.0, 100.0, 1e4, 1e6}) {
        double gb;
        sb.grad_p_reg(0, no_x, 1.0, std::span<const double>(&pv, 1), std::span<double>(&gb, 1));
        worst = std::max(worst, std::abs(gb));
    }
    CHECK(worst < 1e3); // C(eps), not growing with p
}

TEST_CASE("convexity of H in p (sampled)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> md(0.1, 5.0), pd(-2.0, 2.0), th(0.0, 1.0);
    for (const auto& s : {HamiltonianSpec::canonical(1.4, 0.5),
                          HamiltonianSpec::canonical(2.0, 1.0),
                          HamiltonianSpec::canonical(3.0, 0.2)}) {
        for (int trial = 0; trial < 500; ++trial) {
            double m = md(rng), t = th(rng);
            double p[2] = {pd(rng), pd(rng)}, q[2] = {pd(rng), pd(rng)};
            double mid[2] = {t * p[0] + (1 - t) * q[0], t * p[1] + (1 - t) * q[1]};
            double lhs = s.value(0, no_x, m, {mid, 2});
            double rhs = t * s.value(0, no_x, m, {p, 2}) + (1 - t) * s.value(0, no_x, m, {q, 2});
            CHECK(lhs <= rhs + 1e-12);
        }
    }
}

TEST_CASE("lower envelope with declared constants") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> md(-2.0, 2.0), pd(-4.0, 4.0);
    HamiltonianSpec s = HamiltonianSpec::canonical(1.4, 0.9);
    for (int trial = 0; trial < 2000; ++trial) {
        double m = std::pow(10.0, md(rng));
        double p[2] = {pd(rng), pd(rng)};
        double np = std::sqrt(p[0] * p[0] + p[1] * p[1]);
        double env = std::pow(m, s.lambda) + std::pow(m, -s.lambda);
        CHECK(s.value(0, no_x, m, {p, 2}) >= std::pow(np, s.r) / (s.env_C * env) - 1e-12);
    }
}

TEST_CASE("Legendre transform: closed forms and the scan oracle") {
    // r=2, alpha=0: the classical conjugate of |p|^2/2
    HamiltonianSpec s20 = HamiltonianSpec::canonical(2.0, 0.0);
    double v2[2] = {2.0, 0.0};
    CHECK(s20.lagrangian(0, no_x, 1.0, {v2, 2}) == doctest::Approx(2.0).epsilon(1e-12));
    double w2[2] = {2.0, 0.0};
    CHECK(s20.tilde_lagrangian(0, no_x, 2.0, {w2, 2}) == doctest::Approx(1.0).epsilon(1e-12));

    // canonical closed form vs independent dense scan of the sup
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> md(0.3, 3.0), vd(0.1, 2.5), rd(1.2, 2.5),
        ad(0.0, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        double r = rd(rng), alpha = ad(rng), m = md(rng), v = vd(rng);
        HamiltonianSpec s = HamiltonianSpec::canonical(r, alpha);
        double closed = s.lagrangian(0, no_x, m, std::span<const double>(&v, 1));
        double scan = conjugate_scan(std::pow(m, -alpha) / r, r, v);
        CHECK(closed == doctest::Approx(scan).epsilon(1e-6));
    }

    // the pinned value: r=1.4, alpha=0.7, m=2, v=(1) -> 2^{1.75}/3.5
    {
        HamiltonianSpec s = HamiltonianSpec::canonical(1.4, 0.7);
        double v = 1.0;
        double closed = s.lagrangian(0, no_x, 2.0, std::span<const double>(&v, 1));
        CHECK(closed == doctest::Approx(std::pow(2.0, 1.75) / 3.5).epsilon(1e-12));
        CHECK(closed == doctest::Approx(0.9610244745756738).epsilon(1e-9));
        double scan = conjugate_scan(std::pow(2.0, -0.7) / 1.4, 1.4, 1.0);
        CHECK(std::abs(closed - scan) <= 1e-6);
    }

    // GeneralH radial search agrees with the canonical closed form when
    // handed the same coefficient
    {
        double r = 1.6, alpha = 0.8;
        auto h = [=](double, std::span<const double>, double m) {
            return std::pow(m, -alpha) / r;
        };
        auto dh = [=](double, std::span<const double>, double m) {
            return -alpha * std::pow(m, -alpha - 1.0) / r;
        };
        HamiltonianSpec gen = HamiltonianSpec::general(r, h, dh, alpha / (r - 1.0), 10.0);
        HamiltonianSpec can = HamiltonianSpec::canonical(r, alpha);
        for (double v : {0.2, 1.0, 2.7}) {
            std::span<const double> vs(&v, 1);
            CHECK(gen.lagrangian(0, no_x, 1.7, vs) ==
                  doctest::Approx(can.lagrangian(0, no_x, 1.7, vs)).epsilon(1e-9));
        }
        double w = 1.3, gw_gen, gw_can;
        gen.grad_w_tilde_lagrangian(0, no_x, 0.8, std::span<const double>(&w, 1),
                                    std::span<double>(&gw_gen, 1));
        can.grad_w_tilde_lagrangian(0, no_x, 0.8, std::span<const double>(&w, 1),
                                    std::span<double>(&gw_can, 1));
        CHECK(gw_gen == doctest::Approx(gw_can).epsilon(1e-9));
        CHECK(gen.dm_tilde_lagrangian(0, no_x, 0.8, std::span<const double>(&w, 1)) ==
              doctest::Approx(
                  can.dm_tilde_lagrangian(0, no_x, 0.8, std::span<const double>(&w, 1)))
                  .epsilon(1e-6));
    }

    CHECK_THROWS_AS(s20.lagrangian(0, no_x, -1.0, {v2, 2}), std::domain_error);
    CHECK_THROWS_AS(s20.tilde_lagrangian(0, no_x, 0.0, {w2, 2}), std::domain_error);
}

TEST_CASE("Fenchel round trip and the H-L cross identity") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> md(0.3, 3.0), pd(-2.0, 2.0), rd(1.25, 2.2),
        ad(0.0, 1.2);
    for (int trial = 0; trial < 300; ++trial) {
        double r = rd(rng), alpha = ad(rng), m = md(rng);
        const int d = 1 + (trial % 2);
        HamiltonianSpec s = HamiltonianSpec::canonical(r, alpha);
        double p[2] = {pd(rng), d == 2 ? pd(rng) : 0.0};
        if (std::abs(p[0]) + std::abs(p[1]) < 0.05) p[0] = 0.5;
        std::span<const double> ps(p, std::size_t(d));
        double gp[2];
        s.grad_p(0, no_x, m, ps, {gp, std::size_t(d)});
        double w[2];
        for (int c = 0; c < d; ++c) w[c] = -m * gp[c];
        std::span<const double> ws(w, std::size_t(d));

        // tilde_L(m,w) + m H(m,p) = -p.w at the optimality pairing
        double lhs = s.tilde_lagrangian(0, no_x, m, ws) + m * s.value(0, no_x, m, ps);
        double rhs = 0.0;
        for (int c = 0; c < d; ++c) rhs -= p[c] * w[c];
        CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)));

        // grad_w tilde_L(m, w) = -p (first-order criterion)
        double gw[2];
        s.grad_w_tilde_lagrangian(0, no_x, m, ws, {gw, std::size_t(d)});
        for (int c = 0; c < d; ++c) CHECK(gw[c] == doctest::Approx(-p[c]).epsilon(1e-9));

        // H + m dm_H = -dm_tilde_L at the pairing (two algebraic routes)
        double left = s.value(0, no_x, m, ps) + m * s.dm(0, no_x, m, ps);
        double right = -s.dm_tilde_lagrangian(0, no_x, m, ws);
        CHECK(left == doctest::Approx(right).epsilon(1e-9));
    }
}

TEST_CASE("monotonicity integrand: pinned values and sign property") {
    HamiltonianSpec s = HamiltonianSpec::canonical(2.0, 1.0);
    double p0[2] = {0.0, 0.0}, p1[2] = {1.0, 0.0};
    CHECK(monotonicity_integrand(s, 1.0, {p1, 2}, 1.0, {p1, 2}) == doctest::Approx(0.0));
    CHECK(monotonicity_integrand(s, 1.0, {p0, 2}, 1.0, {p1, 2}) == doctest::Approx(1.0));
    // m0=1, m1=2, p fixed: -(1/4 - 1/2) = 0.25
    CHECK(monotonicity_integrand(s, 1.0, {p1, 2}, 2.0, {p1, 2}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(monotonicity_integrand(s, -1.0, {p1, 2}, 1.0, {p1, 2}), std::domain_error);

    // nonnegative on 1e4 samples whenever the uniqueness check passes,
    // strictly positive when the gradients differ
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> md(0.05, 10.0), pd(-3.0, 3.0);
    for (const auto& sp : {HamiltonianSpec::canonical(1.4, 1.0),
                           HamiltonianSpec::canonical(2.0, 1.5),
                           HamiltonianSpec::canonical(1.4, 0.5)}) {
        REQUIRE(check_hypotheses(sp, 1, 2000).find("uniqueness")->pass);
        for (int trial = 0; trial < 10000; ++trial) {
            double m0 = md(rng), m1 = md(rng);
            double q0[2] = {pd(rng), pd(rng)}, q1[2] = {pd(rng), pd(rng)};
            double v = monotonicity_integrand(sp, m0, {q0, 2}, m1, {q1, 2});
            CHECK(v >= -1e-10);
            double dp = std::hypot(q1[0] - q0[0], q1[1] - q0[1]);
            if (dp >= 1e-3) CHECK(v > 0.0);
        }
    }
}

TEST_CASE("hypothesis checks: exact thresholds and sampled envelopes") {
    // growth bound: d=1 boundary at 1.5, strict
    CHECK(growth_exponent_bound(1) == 1.5);
    CHECK(growth_exponent_bound(2) == doctest::Approx(4.0 / 3.0));
    CHECK(check_hypotheses(HamiltonianSpec::canonical(1.4, 1.0), 1).find("growth")->pass);
    CHECK_FALSE(check_hypotheses(HamiltonianSpec::canonical(1.5, 1.0), 1).find("growth")->pass);

    // uniqueness bound 4(r-1)/r; r=1.4 boundary is 8/7
    CHECK(std::abs(uniqueness_alpha_bound(1.4) - 8.0 / 7.0) <= 1e-15);
    CHECK(uniqueness_alpha_bound(2.0) == doctest::Approx(2.0));
    CHECK(check_hypotheses(HamiltonianSpec::canonical(1.4, 1.0), 1).find("uniqueness")->pass);
    CHECK_FALSE(
        check_hypotheses(HamiltonianSpec::canonical(1.4, 1.2), 1).find("uniqueness")->pass);

    // the sampled quadratic form agrees with the closed-form verdict
    auto rep_pass = check_hypotheses(HamiltonianSpec::canonical(1.4, 1.0), 1, 20000);
    CHECK(rep_pass.find("uniqueness_form")->pass);
    auto rep_fail = check_hypotheses(HamiltonianSpec::canonical(1.4, 1.2), 1, 20000);
    CHECK_FALSE(rep_fail.find("uniqueness_form")->pass);

    // canonical family: grad_p H . p - r H = 0 exactly (homogeneity)
    HamiltonianSpec s = HamiltonianSpec::canonical(1.4, 0.5);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> md(0.1, 5.0), pd(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        double m = md(rng);
        double p[2] = {pd(rng), pd(rng)};
        double g[2];
        s.grad_p(0, no_x, m, {p, 2}, {g, 2});
        double dot = g[0] * p[0] + g[1] * p[1];
        CHECK(dot - s.r * s.value(0, no_x, m, {p, 2}) == doctest::Approx(0.0).epsilon(1e-12));
    }
    auto rep = check_hypotheses(s, 1);
    CHECK(rep.find("dh_bounded_below")->pass);
    CHECK(rep.find("h_positive")->pass);
    CHECK(rep.find("dh_bounded")->pass);
    CHECK(rep.all_pass());
    CHECK(rep.to_text().find("growth: PASS") != std::string::npos);
}
