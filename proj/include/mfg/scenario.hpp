#pragma once

#include "mfg/config.hpp"
#include "mfg/mfg_solver.hpp"

namespace mfg {

// Every knob of a run, with defaults forming the canonical test scenario:
// d = 1 periodic unit torus, r = 1.4, alpha = 0.5, f = g = m, asymmetric
// two-mode initial bump, eps = 1e-3.
struct ScenarioConfig {
    // grid
    int dim = 1;
    int n = 64;
    double side = 1.0;
    std::string boundary = "periodic";
    // time
    double T = 0.1;
    int K = 64;
    // hamiltonian
    std::string family = "canonical";
    double r = 1.4;
    double alpha = 0.5;
    double eps = 1e-3;
    // couplings
    std::string f_kind = "power";
    double f_a = 1.0;
    double f_q = 1.0;
    std::string g_kind = "power";
    double g_b = 1.0;
    double g_s = 1.0;
    // initial density
    std::string m0_kind = "two_mode";
    double m0_amplitude = 0.3;
    double m0_amplitude2 = 0.15;
    // solver
    std::string scheme = "semi_implicit";
    double inner_tol = 1e-10;
    int inner_max_iter = 50;
    double positivity_floor = 0.0;
    // picard
    double theta = 0.5;
    double tol = 1e-9;
    int max_outer = 300;
    std::vector<double> eps_ladder;    // empty: decades down to eps
    // sweeps and refinement studies
    std::vector<double> sweep_T = {0.4, 0.2, 0.1, 0.05};
    std::string refine_target = "hjb_mms";
    std::vector<double> refine_n = {32, 64, 128};
    int refine_space_K = 4096;
    std::vector<double> refine_time_K = {16, 32, 64};
    int refine_time_n = 512;
    // kernels
    std::string backend = "parallel";
    // output
    std::string out_dir = "out";

    static ScenarioConfig from_map(const ConfigMap& map);

    // Canonical text form; parsing the echo reproduces the scenario.
    std::string echo() const;

    Grid make_grid() const;
    TimeGrid make_time() const;
    HamiltonianSpec make_spec() const;
    ProblemData make_data() const;
    SolverConfig make_solver() const;
    PicardOptions make_picard() const;
    void apply_backend() const;
};

} // namespace mfg
