#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mfg/grid.hpp"

namespace mfg {

// Congestion Hamiltonian family H(t,x,m,p) = h(t,x,m)|p|^r. The canonical
// member is H = |p|^r / (r m^alpha), i.e. h = m^{-alpha}/r, which blows up
// as the density m approaches zero. All members are radial and convex in p.
enum class HamiltonianFamily { CanonicalPower, GeneralH };

// Callable coefficient for the GeneralH family.
using CoefficientFn = std::function<double(double t, std::span<const double> x, double m)>;

struct HamiltonianSpec {
    double r = 2.0;           // gradient growth exponent, > 1
    double alpha = 0.0;       // canonical congestion exponent, >= 0
    double eps = 0.0;         // regularization strength; 0 = unregularized
    HamiltonianFamily family = HamiltonianFamily::CanonicalPower;
    CoefficientFn h_fn;       // GeneralH: h(t,x,m)
    CoefficientFn dm_h_fn;    // GeneralH: d/dm h(t,x,m)
    double lambda = 0.0;      // declared blow-up exponent for envelope checks
    double env_C = 1.0;       // declared envelope constant

    static HamiltonianSpec canonical(double r, double alpha, double eps = 0.0);
    static HamiltonianSpec general(double r, CoefficientFn h, CoefficientFn dm_h,
                                   double lambda, double env_C, double eps = 0.0);

    double r_prime() const { return r / (r - 1.0); }
    HamiltonianSpec with_eps(double e) const {
        HamiltonianSpec s = *this;
        s.eps = e;
        return s;
    }

    // Clamp of the density argument used by the regularized system:
    // kappa_eps(m) = min(max(m, eps), 1/eps). Total on all real m.
    double kappa(double m) const;

    // Raw family evaluations. With eps == 0 a nonpositive density is a
    // domain error; with eps > 0 the density argument is clamped by kappa.
    double value(double t, std::span<const double> x, double m,
                 std::span<const double> p) const;
    void grad_p(double t, std::span<const double> x, double m,
                std::span<const double> p, std::span<double> out) const;
    double dm(double t, std::span<const double> x, double m,
              std::span<const double> p) const;
    void dm_grad_p(double t, std::span<const double> x, double m,
                   std::span<const double> p, std::span<double> out) const;
    // Row-major dim x dim matrix; singular at p = 0 when r < 2 (domain error).
    void hess_p(double t, std::span<const double> x, double m,
                std::span<const double> p, std::span<double> out) const;

    // Regularized Hamiltonian H_eps = H(kappa(m), p) / (1 + eps H(kappa(m), p)^{(r-1)/r})
    // and its p-gradient; the slope of H_eps is bounded uniformly in p.
    double value_reg(double t, std::span<const double> x, double m,
                     std::span<const double> p) const;
    void grad_p_reg(double t, std::span<const double> x, double m,
                    std::span<const double> p, std::span<double> out) const;

    // What the solvers evaluate: the regularized forms when eps > 0.
    double value_eff(double t, std::span<const double> x, double m,
                     std::span<const double> p) const {
        return eps > 0.0 ? value_reg(t, x, m, p) : value(t, x, m, p);
    }
    void grad_p_eff(double t, std::span<const double> x, double m,
                    std::span<const double> p, std::span<double> out) const {
        if (eps > 0.0)
            grad_p_reg(t, x, m, p, out);
        else
            grad_p(t, x, m, p, out);
    }

    // Running cost L(t,x,m,v) = sup_p p.v - H(t,x,m,-p): closed form for the
    // canonical family, bounded golden-section/Newton search over the radial
    // dual variable for GeneralH.
    double lagrangian(double t, std::span<const double> x, double m,
                      std::span<const double> v) const;
    // Momentum form tilde_L(t,x,m,w) = m L(t,x,m,w/m) and its derivatives.
    double tilde_lagrangian(double t, std::span<const double> x, double m,
                            std::span<const double> w) const;
    double dm_tilde_lagrangian(double t, std::span<const double> x, double m,
                               std::span<const double> w) const;
    void grad_w_tilde_lagrangian(double t, std::span<const double> x, double m,
                                 std::span<const double> w, std::span<double> out) const;
};

double kappa_eps(double eps, double m);

// Integrand of the uniqueness lemma:
//   (m1 grad_p H(m1,p1) - m0 grad_p H(m0,p0)).(p1-p0)
//   - (H(m1,p1) - H(m0,p0))(m1-m0),
// nonnegative whenever the structural uniqueness condition holds, strictly
// positive for p1 != p0.
double monotonicity_integrand(const HamiltonianSpec& spec, double m0,
                              std::span<const double> p0, double m1,
                              std::span<const double> p1, double t = 0.0,
                              std::span<const double> x = {});

// Structural hypothesis checkers.
double growth_exponent_bound(int dim);        // (d+2)/(d+1)
double uniqueness_alpha_bound(double r);      // 4(r-1)/r

struct HypothesisCheck {
    std::string key;
    bool pass = false;
    std::string detail;   // includes a witness point on failure
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass() const;
    const HypothesisCheck* find(const std::string& key) const;
    std::string to_text() const;
};

HypothesisReport check_hypotheses(const HamiltonianSpec& spec, int dim,
                                  int sample_budget = 10000);

} // namespace mfg
