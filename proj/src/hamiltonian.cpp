#include "mfg/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace mfg {

namespace {

double pnorm(std::span<const double> p) {
    double s = 0.0;
    for (double c : p) s += c * c;
    return std::sqrt(s);
}

[[noreturn]] void bad_density(double m) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "Hamiltonian: nonpositive density m=%g with eps=0", m);
    throw std::domain_error(buf);
}

} // namespace

HamiltonianSpec HamiltonianSpec::canonical(double r, double alpha, double eps) {
    if (!(r > 1.0)) throw std::invalid_argument("HamiltonianSpec: need r > 1");
    if (alpha < 0.0) throw std::invalid_argument("HamiltonianSpec: need alpha >= 0");
    if (eps < 0.0) throw std::invalid_argument("HamiltonianSpec: need eps >= 0");
    HamiltonianSpec s;
    s.r = r;
    s.alpha = alpha;
    s.eps = eps;
    s.family = HamiltonianFamily::CanonicalPower;
    // The Legendre transform carries exponent alpha/(r-1), which exceeds
    // alpha when r < 2; declaring the max keeps every envelope valid.
    s.lambda = std::max(alpha, alpha / (r - 1.0));
    s.env_C = r + s.r_prime() + 1.0;
    return s;
}

HamiltonianSpec HamiltonianSpec::general(double r, CoefficientFn h, CoefficientFn dm_h,
                                         double lambda, double env_C, double eps) {
    if (!(r > 1.0)) throw std::invalid_argument("HamiltonianSpec: need r > 1");
    if (!h) throw std::invalid_argument("HamiltonianSpec: GeneralH needs h(t,x,m)");
    HamiltonianSpec s;
    s.r = r;
    s.eps = eps;
    s.family = HamiltonianFamily::GeneralH;
    s.h_fn = std::move(h);
    s.dm_h_fn = std::move(dm_h);
    s.lambda = lambda;
    s.env_C = env_C;
    return s;
}

double kappa_eps(double eps, double m) {
    return std::min(std::max(m, eps), 1.0 / eps);
}

double HamiltonianSpec::kappa(double m) const { return kappa_eps(eps, m); }

namespace {

// Coefficient h and dh/dm of H = h(t,x,m)|p|^r at an admissible density.
struct Coeff {
    double h;
    double dh;
};

Coeff coeff(const HamiltonianSpec& s, double t, std::span<const double> x, double m) {
    if (s.family == HamiltonianFamily::CanonicalPower) {
        double h = std::pow(m, -s.alpha) / s.r;
        return {h, -s.alpha * std::pow(m, -s.alpha - 1.0) / s.r};
    }
    double h = s.h_fn(t, x, m);
    double dh = s.dm_h_fn ? s.dm_h_fn(t, x, m) : 0.0;
    return {h, dh};
}

// Applies the eps-clamp rule shared by all raw evaluations. Returns the
// effective density and the chain-rule factor for m-derivatives.
struct MArg {
    double m;
    double dfactor;
};

MArg admissible(const HamiltonianSpec& s, double m) {
    if (s.eps > 0.0) {
        double mk = kappa_eps(s.eps, m);
        bool interior = m > s.eps && m < 1.0 / s.eps;
        return {mk, interior ? 1.0 : 0.0};
    }
    if (m <= 0.0) bad_density(m);
    return {m, 1.0};
}

} // namespace

double HamiltonianSpec::value(double t, std::span<const double> x, double m,
                              std::span<const double> p) const {
    MArg a = admissible(*this, m);
    return coeff(*this, t, x, a.m).h * std::pow(pnorm(p), r);
}

void HamiltonianSpec::grad_p(double t, std::span<const double> x, double m,
                             std::span<const double> p, std::span<double> out) const {
    MArg a = admissible(*this, m);
    double np = pnorm(p);
    if (np == 0.0) {
        for (auto& o : out) o = 0.0;
        return;
    }
    double c = coeff(*this, t, x, a.m).h * r * std::pow(np, r - 2.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * p[i];
}

double HamiltonianSpec::dm(double t, std::span<const double> x, double m,
                           std::span<const double> p) const {
    MArg a = admissible(*this, m);
    return a.dfactor * coeff(*this, t, x, a.m).dh * std::pow(pnorm(p), r);
}

void HamiltonianSpec::dm_grad_p(double t, std::span<const double> x, double m,
                                std::span<const double> p, std::span<double> out) const {
    MArg a = admissible(*this, m);
    double np = pnorm(p);
    if (np == 0.0) {
        for (auto& o : out) o = 0.0;
        return;
    }
    double c = a.dfactor * coeff(*this, t, x, a.m).dh * r * std::pow(np, r - 2.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * p[i];
}

void HamiltonianSpec::hess_p(double t, std::span<const double> x, double m,
                             std::span<const double> p, std::span<double> out) const {
    MArg a = admissible(*this, m);
    const std::size_t d = p.size();
    double np = pnorm(p);
    if (np == 0.0) {
        if (r < 2.0)
            throw std::domain_error("hess_p: singular at p = 0 for r < 2");
        for (auto& o : out) o = 0.0;
        if (r == 2.0) {
            double c = coeff(*this, t, x, a.m).h * 2.0;
            for (std::size_t i = 0; i < d; ++i) out[i * d + i] = c;
        }
        return;
    }
    double h = coeff(*this, t, x, a.m).h;
    double c1 = h * r * std::pow(np, r - 2.0);
    double c2 = h * r * (r - 2.0) * std::pow(np, r - 4.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out[i * d + j] = c2 * p[i] * p[j] + (i == j ? c1 : 0.0);
}

double HamiltonianSpec::value_reg(double t, std::span<const double> x, double m,
                                  std::span<const double> p) const {
    if (!(eps > 0.0)) throw std::invalid_argument("value_reg: needs eps > 0");
    double mk = kappa_eps(eps, m);
    double hk = coeff(*this, t, x, mk).h * std::pow(pnorm(p), r);
    double damp = 1.0 + eps * std::pow(hk, (r - 1.0) / r);
    return hk / damp;
}

void HamiltonianSpec::grad_p_reg(double t, std::span<const double> x, double m,
                                 std::span<const double> p, std::span<double> out) const {
    if (!(eps > 0.0)) throw std::invalid_argument("grad_p_reg: needs eps > 0");
    double mk = kappa_eps(eps, m);
    double np = pnorm(p);
    if (np == 0.0) {
        for (auto& o : out) o = 0.0;
        return;
    }
    double h = coeff(*this, t, x, mk).h;
    double hk = h * std::pow(np, r);
    double hs = std::pow(hk, (r - 1.0) / r);
    double damp = 1.0 + eps * hs;
    double factor = (1.0 + eps / r * hs) / (damp * damp);
    double c = factor * h * r * std::pow(np, r - 2.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * p[i];
}

namespace {

// Radial dual search for the GeneralH running cost: maximize
// phi(s) = s|v| - h s^r over s >= 0. Golden-section bracket, then a few
// Newton polish steps on phi'.
double radial_conjugate(double h, double r, double nv) {
    if (nv == 0.0) return 0.0;
    if (h < 0.0) throw std::domain_error("lagrangian: negative coefficient h");
    if (h == 0.0) throw std::domain_error("lagrangian: h = 0 gives an unbounded transform");
    auto phi = [&](double s) { return s * nv - h * std::pow(s, r); };
    double sstar = std::pow(nv / (r * h), 1.0 / (r - 1.0));
    double lo = 0.0, hi = 2.5 * sstar;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = phi(c), fd = phi(d);
    while (hi - lo > 1e-12 * (1.0 + sstar)) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = phi(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = phi(d);
        }
    }
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        double g = nv - h * r * std::pow(s, r - 1.0);
        double gg = -h * r * (r - 1.0) * std::pow(s, r - 2.0);
        if (gg == 0.0) break;
        double snew = s - g / gg;
        if (snew > 0.0 && std::isfinite(snew)) s = snew;
    }
    return phi(s);
}

} // namespace

double HamiltonianSpec::lagrangian(double t, std::span<const double> x, double m,
                                   std::span<const double> v) const {
    if (m <= 0.0) bad_density(m);
    double nv = pnorm(v);
    if (family == HamiltonianFamily::CanonicalPower) {
        double rp = r_prime();
        return std::pow(m, alpha / (r - 1.0)) * std::pow(nv, rp) / rp;
    }
    return radial_conjugate(h_fn(t, x, m), r, nv);
}

double HamiltonianSpec::tilde_lagrangian(double t, std::span<const double> x, double m,
                                         std::span<const double> w) const {
    if (m <= 0.0) bad_density(m);
    double nv = pnorm(w) / m;
    if (family == HamiltonianFamily::CanonicalPower) {
        double rp = r_prime();
        return m * std::pow(m, alpha / (r - 1.0)) * std::pow(nv, rp) / rp;
    }
    return m * radial_conjugate(h_fn(t, x, m), r, nv);
}

double HamiltonianSpec::dm_tilde_lagrangian(double t, std::span<const double> x, double m,
                                            std::span<const double> w) const {
    if (m <= 0.0) bad_density(m);
    if (family == HamiltonianFamily::CanonicalPower) {
        double rp = r_prime();
        double e = 1.0 + alpha / (r - 1.0) - rp;
        return e * std::pow(m, e - 1.0) * std::pow(pnorm(w), rp) / rp;
    }
    double d = std::min(1e-6 * std::max(m, 1.0), 0.5 * m);
    return (tilde_lagrangian(t, x, m + d, w) - tilde_lagrangian(t, x, m - d, w)) / (2.0 * d);
}

void HamiltonianSpec::grad_w_tilde_lagrangian(double t, std::span<const double> x, double m,
                                              std::span<const double> w,
                                              std::span<double> out) const {
    if (m <= 0.0) bad_density(m);
    double nw = pnorm(w);
    if (nw == 0.0) {
        for (auto& o : out) o = 0.0;
        return;
    }
    if (family == HamiltonianFamily::CanonicalPower) {
        double rp = r_prime();
        // grad_v L evaluated at v = w/m; the trailing /m maps w to v.
        double c = std::pow(m, alpha / (r - 1.0)) * std::pow(nw / m, rp - 2.0) / m;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * w[i];
        return;
    }
    // The maximizing dual variable of the radial transform is the gradient.
    double h = h_fn(t, x, m);
    if (h <= 0.0) throw std::domain_error("grad_w_tilde_lagrangian: need h > 0");
    double nv = nw / m;
    double sstar = std::pow(nv / (r * h), 1.0 / (r - 1.0));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sstar * w[i] / nw;
}

double monotonicity_integrand(const HamiltonianSpec& spec, double m0,
                              std::span<const double> p0, double m1,
                              std::span<const double> p1, double t,
                              std::span<const double> x) {
    if (m0 <= 0.0 || m1 <= 0.0)
        throw std::domain_error("monotonicity_integrand: densities must be positive");
    const std::size_t d = p0.size();
    double g0[2] = {0, 0}, g1[2] = {0, 0};
    spec.grad_p(t, x, m0, p0, std::span<double>(g0, d));
    spec.grad_p(t, x, m1, p1, std::span<double>(g1, d));
    double cross = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        cross += (m1 * g1[i] - m0 * g0[i]) * (p1[i] - p0[i]);
    double dh = spec.value(t, x, m1, p1) - spec.value(t, x, m0, p0);
    return cross - dh * (m1 - m0);
}

double growth_exponent_bound(int dim) { return (dim + 2.0) / (dim + 1.0); }

double uniqueness_alpha_bound(double r) { return 4.0 * (r - 1.0) / r; }

bool HypothesisReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const HypothesisCheck* HypothesisReport::find(const std::string& key) const {
    for (const auto& c : checks)
        if (c.key == key) return &c;
    return nullptr;
}

std::string HypothesisReport::to_text() const {
    std::string s;
    for (const auto& c : checks) {
        s += c.key;
        s += ": ";
        s += c.pass ? "PASS" : "FAIL";
        if (!c.detail.empty()) {
            s += " (";
            s += c.detail;
            s += ")";
        }
        s += "\n";
    }
    return s;
}

namespace {

std::string fmt_vec(const double* p, int d) {
    char buf[96];
    if (d == 1)
        std::snprintf(buf, sizeof buf, "(%.6g)", p[0]);
    else
        std::snprintf(buf, sizeof buf, "(%.6g,%.6g)", p[0], p[1]);
    return buf;
}

std::string fmt_point(double m, const double* p, int d, double mt = 0, const double* pt = nullptr) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "witness m=%.6g p=", m);
    std::string s = buf + fmt_vec(p, d);
    if (pt) {
        std::snprintf(buf, sizeof buf, " mt=%.6g pt=", mt);
        s += buf + fmt_vec(pt, d);
    }
    return s;
}

} // namespace

HypothesisReport check_hypotheses(const HamiltonianSpec& spec, int dim, int sample_budget) {
    HypothesisReport rep;
    char buf[256];

    // Growth condition r < (d+2)/(d+1), strict.
    {
        double bound = growth_exponent_bound(dim);
        bool pass = spec.r < bound;
        std::snprintf(buf, sizeof buf, "r=%.17g %s %.17g", spec.r, pass ? "<" : ">=", bound);
        rep.checks.push_back({"growth", pass, buf});
    }

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    auto rand_m = [&] { return std::pow(10.0, -2.0 + 4.0 * unit(rng)); };
    auto rand_p = [&](double* p) {
        double scale = std::pow(10.0, -1.0 + 2.0 * unit(rng));
        double n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            p[i] = sym(rng);
            n2 += p[i] * p[i];
        }
        n2 = std::sqrt(n2);
        if (n2 == 0.0) {
            p[0] = 1.0;
            n2 = 1.0;
        }
        for (int i = 0; i < dim; ++i) p[i] *= scale / n2;
    };
    const double x0[2] = {0.0, 0.0};
    std::span<const double> xs(x0, std::size_t(dim));

    // Structural uniqueness condition. For the canonical family the exact
    // inequality 0 <= alpha < 4(r-1)/r decides it; the sampled quadratic
    // form below corroborates for both families.
    if (spec.family == HamiltonianFamily::CanonicalPower) {
        double bound = uniqueness_alpha_bound(spec.r);
        bool pass = spec.alpha >= 0.0 && spec.alpha < bound;
        std::snprintf(buf, sizeof buf, "alpha=%.17g %s 4(r-1)/r=%.17g", spec.alpha,
                      pass ? "<" : ">=", bound);
        rep.checks.push_back({"uniqueness", pass, buf});
    } else {
        // (h growth): 0 <= -dm_h * m < 4(r-1)/r * h on a log-spaced density grid.
        bool pass = true;
        std::string detail = "sampled coefficient growth";
        double cr = uniqueness_alpha_bound(spec.r);
        int ns = std::max(sample_budget / 10, 100);
        for (int i = 0; i < ns && pass; ++i) {
            double m = std::pow(10.0, -3.0 + 6.0 * (i + 0.5) / ns);
            double h = spec.h_fn(0.0, xs, m);
            double dh = spec.dm_h_fn ? spec.dm_h_fn(0.0, xs, m) : 0.0;
            double lhs = -dh * m;
            if (!(lhs >= -1e-12 * std::abs(h) && lhs < cr * h)) {
                pass = false;
                std::snprintf(buf, sizeof buf, "-dm_h*m=%.6g outside [0, %.6g*h) at m=%.6g",
                              lhs, cr, m);
                detail = buf;
            }
        }
        rep.checks.push_back({"uniqueness", pass, detail});
    }

    // Sampled quadratic form of the uniqueness assumption:
    // -dm_H mt^2 + m <hess_p pt, pt> + m mt pt . dm_grad_p > 0.
    {
        bool pass = true;
        double worst = 0.0;
        std::string detail;
        HamiltonianSpec raw = spec.with_eps(0.0);
        for (int s = 0; s < sample_budget; ++s) {
            double m = rand_m();
            double p[2], pt[2];
            rand_p(p);
            rand_p(pt);
            double mt = sym(rng);
            double hm[4];
            raw.hess_p(0.0, xs, m, std::span<const double>(p, std::size_t(dim)),
                       std::span<double>(hm, std::size_t(dim * dim)));
            double dgp[2];
            raw.dm_grad_p(0.0, xs, m, std::span<const double>(p, std::size_t(dim)),
                          std::span<double>(dgp, std::size_t(dim)));
            double q = -raw.dm(0.0, xs, m, std::span<const double>(p, std::size_t(dim))) * mt * mt;
            double scale = std::abs(q);
            double t2 = 0.0, t3 = 0.0;
            for (int i = 0; i < dim; ++i) {
                for (int j = 0; j < dim; ++j) t2 += hm[i * dim + j] * pt[i] * pt[j];
                t3 += pt[i] * dgp[i];
            }
            t2 *= m;
            t3 *= m * mt;
            scale += std::abs(t2) + std::abs(t3);
            double form = q + t2 + t3;
            double normalized = scale > 0.0 ? form / scale : form;
            if (normalized < worst) {
                worst = normalized;
                if (normalized < -1e-10) {
                    pass = false;
                    detail = fmt_point(m, p, dim, mt, pt);
                }
            }
        }
        if (detail.empty()) {
            std::snprintf(buf, sizeof buf, "min normalized form %.3g over %d samples", worst,
                          sample_budget);
            detail = buf;
        }
        rep.checks.push_back({"uniqueness_form", pass, detail});
    }

    // (DH bounded below): grad_p H . p - r H >= -C.
    {
        bool pass = true;
        double worstdev = 0.0;
        std::string detail;
        for (int s = 0; s < sample_budget; ++s) {
            double m = rand_m();
            double p[2];
            rand_p(p);
            std::span<const double> ps(p, std::size_t(dim));
            double g[2];
            spec.grad_p(0.0, xs, m, ps, std::span<double>(g, std::size_t(dim)));
            double dot = 0.0;
            for (int i = 0; i < dim; ++i) dot += g[i] * p[i];
            double v = dot - spec.r * spec.value(0.0, xs, m, ps);
            worstdev = std::min(worstdev, v);
            if (v < -spec.env_C) {
                pass = false;
                detail = fmt_point(m, p, dim);
                break;
            }
        }
        if (detail.empty()) {
            std::snprintf(buf, sizeof buf, "min(grad_p H.p - rH)=%.3g >= -C=-%.3g", worstdev,
                          spec.env_C);
            detail = buf;
        }
        rep.checks.push_back({"dh_bounded_below", pass, detail});
    }

    // (H positive) and (DH bounded) envelopes with the declared (C, lambda).
    {
        bool pass_pos = true, pass_grad = true;
        std::string dpos, dgrad;
        for (int s = 0; s < sample_budget; ++s) {
            double m = rand_m();
            double p[2];
            rand_p(p);
            std::span<const double> ps(p, std::size_t(dim));
            double np = 0.0;
            for (int i = 0; i < dim; ++i) np += p[i] * p[i];
            np = std::sqrt(np);
            double env = std::pow(m, spec.lambda) + std::pow(m, -spec.lambda);
            double H = spec.value(0.0, xs, m, ps);
            if (pass_pos && H < std::pow(np, spec.r) / (spec.env_C * env) - 1e-12) {
                pass_pos = false;
                dpos = fmt_point(m, p, dim);
            }
            double g[2];
            spec.grad_p(0.0, xs, m, ps, std::span<double>(g, std::size_t(dim)));
            double ng = 0.0;
            for (int i = 0; i < dim; ++i) ng += g[i] * g[i];
            ng = std::sqrt(ng);
            if (pass_grad &&
                ng > spec.env_C * env * (1.0 + std::pow(np, spec.r - 1.0)) + 1e-12) {
                pass_grad = false;
                dgrad = fmt_point(m, p, dim);
            }
        }
        if (dpos.empty()) dpos = "sampled lower envelope holds";
        if (dgrad.empty()) dgrad = "sampled gradient envelope holds";
        rep.checks.push_back({"h_positive", pass_pos, dpos});
        rep.checks.push_back({"dh_bounded", pass_grad, dgrad});
    }

    return rep;
}

} // namespace mfg
