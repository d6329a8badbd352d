#include "mfg/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "mfg/kernels.hpp"

namespace mfg {

namespace {

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "grid.dim", "grid.n", "grid.side", "grid.boundary",
        "time.T", "time.K",
        "hamiltonian.family", "hamiltonian.r", "hamiltonian.alpha", "hamiltonian.eps",
        "f.kind", "f.a", "f.q",
        "g.kind", "g.b", "g.s",
        "m0.kind", "m0.amplitude", "m0.amplitude2",
        "solver.scheme", "solver.inner_tol", "solver.inner_max_iter",
        "solver.positivity_floor",
        "picard.theta", "picard.tol", "picard.max_outer", "picard.eps_ladder",
        "sweep.T_values",
        "refine.target", "refine.n_values", "refine.space_K", "refine.time_K_values",
        "refine.time_n",
        "kernels.backend",
        "output.dir",
    };
    return keys;
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt_num(v[i]);
    }
    return s;
}

} // namespace

ScenarioConfig ScenarioConfig::from_map(const ConfigMap& map) {
    auto bad = map.unknown_keys(known_keys());
    if (!bad.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : bad) msg += " " + k;
        throw std::invalid_argument(msg);
    }
    ScenarioConfig c;
    c.dim = map.get_int("grid.dim", c.dim);
    c.n = map.get_int("grid.n", c.n);
    c.side = map.get_double("grid.side", c.side);
    c.boundary = map.get_string("grid.boundary", c.boundary);
    c.T = map.get_double("time.T", c.T);
    c.K = map.get_int("time.K", c.K);
    c.family = map.get_string("hamiltonian.family", c.family);
    c.r = map.get_double("hamiltonian.r", c.r);
    c.alpha = map.get_double("hamiltonian.alpha", c.alpha);
    c.eps = map.get_double("hamiltonian.eps", c.eps);
    c.f_kind = map.get_string("f.kind", c.f_kind);
    c.f_a = map.get_double("f.a", c.f_a);
    c.f_q = map.get_double("f.q", c.f_q);
    c.g_kind = map.get_string("g.kind", c.g_kind);
    c.g_b = map.get_double("g.b", c.g_b);
    c.g_s = map.get_double("g.s", c.g_s);
    c.m0_kind = map.get_string("m0.kind", c.m0_kind);
    c.m0_amplitude = map.get_double("m0.amplitude", c.m0_amplitude);
    c.m0_amplitude2 = map.get_double("m0.amplitude2", c.m0_amplitude2);
    c.scheme = map.get_string("solver.scheme", c.scheme);
    c.inner_tol = map.get_double("solver.inner_tol", c.inner_tol);
    c.inner_max_iter = map.get_int("solver.inner_max_iter", c.inner_max_iter);
    c.positivity_floor = map.get_double("solver.positivity_floor", c.positivity_floor);
    c.theta = map.get_double("picard.theta", c.theta);
    c.tol = map.get_double("picard.tol", c.tol);
    c.max_outer = map.get_int("picard.max_outer", c.max_outer);
    c.eps_ladder = map.get_list("picard.eps_ladder", c.eps_ladder);
    c.sweep_T = map.get_list("sweep.T_values", c.sweep_T);
    c.refine_target = map.get_string("refine.target", c.refine_target);
    c.refine_n = map.get_list("refine.n_values", c.refine_n);
    c.refine_space_K = map.get_int("refine.space_K", c.refine_space_K);
    c.refine_time_K = map.get_list("refine.time_K_values", c.refine_time_K);
    c.refine_time_n = map.get_int("refine.time_n", c.refine_time_n);
    c.backend = map.get_string("kernels.backend", c.backend);
    c.out_dir = map.get_string("output.dir", c.out_dir);

    // Growth condition check up front; a warning, not a gate.
    double bound = growth_exponent_bound(c.dim);
    if (c.r >= bound) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "warning: r=%g violates the growth condition r < %g for d=%d; "
                      "short-time convergence is not covered",
                      c.r, bound, c.dim);
        log_info(buf);
    }
    return c;
}

std::string ScenarioConfig::echo() const {
    std::ostringstream s;
    s << "[grid]\n"
      << "dim = " << dim << "\n"
      << "n = " << n << "\n"
      << "side = " << fmt_num(side) << "\n"
      << "boundary = " << boundary << "\n"
      << "[time]\n"
      << "T = " << fmt_num(T) << "\n"
      << "K = " << K << "\n"
      << "[hamiltonian]\n"
      << "family = " << family << "\n"
      << "r = " << fmt_num(r) << "\n"
      << "alpha = " << fmt_num(alpha) << "\n"
      << "eps = " << fmt_num(eps) << "\n"
      << "[f]\n"
      << "kind = " << f_kind << "\n"
      << "a = " << fmt_num(f_a) << "\n"
      << "q = " << fmt_num(f_q) << "\n"
      << "[g]\n"
      << "kind = " << g_kind << "\n"
      << "b = " << fmt_num(g_b) << "\n"
      << "s = " << fmt_num(g_s) << "\n"
      << "[m0]\n"
      << "kind = " << m0_kind << "\n"
      << "amplitude = " << fmt_num(m0_amplitude) << "\n"
      << "amplitude2 = " << fmt_num(m0_amplitude2) << "\n"
      << "[solver]\n"
      << "scheme = " << scheme << "\n"
      << "inner_tol = " << fmt_num(inner_tol) << "\n"
      << "inner_max_iter = " << inner_max_iter << "\n"
      << "positivity_floor = " << fmt_num(positivity_floor) << "\n"
      << "[picard]\n"
      << "theta = " << fmt_num(theta) << "\n"
      << "tol = " << fmt_num(tol) << "\n"
      << "max_outer = " << max_outer << "\n";
    if (!eps_ladder.empty()) s << "eps_ladder = " << fmt_list(eps_ladder) << "\n";
    s << "[sweep]\n"
      << "T_values = " << fmt_list(sweep_T) << "\n"
      << "[refine]\n"
      << "target = " << refine_target << "\n"
      << "n_values = " << fmt_list(refine_n) << "\n"
      << "space_K = " << refine_space_K << "\n"
      << "time_K_values = " << fmt_list(refine_time_K) << "\n"
      << "time_n = " << refine_time_n << "\n"
      << "[kernels]\n"
      << "backend = " << backend << "\n"
      << "[output]\n"
      << "dir = " << out_dir << "\n";
    return s.str();
}

Grid ScenarioConfig::make_grid() const {
    if (boundary == "periodic") return Grid::periodic(dim, n, side);
    if (boundary == "neumann") return Grid::neumann(dim, n, side);
    throw std::invalid_argument("grid.boundary must be periodic or neumann");
}

TimeGrid ScenarioConfig::make_time() const { return TimeGrid(T, K); }

HamiltonianSpec ScenarioConfig::make_spec() const {
    if (family == "canonical") return HamiltonianSpec::canonical(r, alpha, eps);
    throw std::invalid_argument("hamiltonian.family: only 'canonical' is configurable; "
                                "GeneralH needs code-level callables");
}

namespace {
Coupling make_coupling(const std::string& kind, double a, double q, const char* which) {
    if (kind == "zero") return Coupling::zero();
    if (kind == "power") return Coupling::power(a, q);
    throw std::invalid_argument(std::string(which) + ".kind must be power or zero");
}
} // namespace

ProblemData ScenarioConfig::make_data() const {
    Grid grid = make_grid();
    M0Kind kind;
    if (m0_kind == "uniform")
        kind = M0Kind::Uniform;
    else if (m0_kind == "bump")
        kind = M0Kind::Bump;
    else if (m0_kind == "two_mode")
        kind = M0Kind::TwoMode;
    else
        throw std::invalid_argument("m0.kind must be uniform, bump or two_mode");
    auto m0 = sample_m0(kind, grid, {m0_amplitude, m0_amplitude2});
    return ProblemData::make(grid, make_coupling(f_kind, f_a, f_q, "f"),
                             make_coupling(g_kind, g_b, g_s, "g"), std::move(m0));
}

SolverConfig ScenarioConfig::make_solver() const {
    SolverConfig sc;
    sc.time = make_time();
    if (scheme == "semi_implicit")
        sc.scheme = Scheme::SemiImplicit;
    else if (scheme == "fully_implicit")
        sc.scheme = Scheme::FullyImplicit;
    else
        throw std::invalid_argument("solver.scheme must be semi_implicit or fully_implicit");
    sc.inner_tol = inner_tol;
    sc.inner_max_iter = inner_max_iter;
    sc.positivity_floor = positivity_floor;
    sc.validate();
    return sc;
}

PicardOptions ScenarioConfig::make_picard() const {
    PicardOptions p;
    p.theta = theta;
    p.tol = tol;
    p.max_outer = max_outer;
    p.eps_ladder = eps_ladder;
    return p;
}

void ScenarioConfig::apply_backend() const {
    if (backend == "parallel")
        kernels::set_backend(kernels::Backend::Parallel);
    else if (backend == "serial")
        kernels::set_backend(kernels::Backend::Serial);
    else
        throw std::invalid_argument("kernels.backend must be parallel or serial");
}

} // namespace mfg
