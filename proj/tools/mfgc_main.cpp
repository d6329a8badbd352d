// mfgc: configuration-driven experiment runner for the congestion game and
// control solvers. Subcommands: solve-mfg, solve-mftc, oracle,
// check-hypotheses, refine-study, compare, sweep-T.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include <CLI11.hpp>

#include "mfg/diagnostics.hpp"
#include "mfg/io.hpp"
#include "mfg/mftc.hpp"
#include "mfg/scenario.hpp"

namespace fs = std::filesystem;
using namespace mfg;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    int jobs = 1;
};

ScenarioConfig load_scenario(const CommonArgs& args) {
    ConfigMap map = args.config_path.empty() ? ConfigMap{} : ConfigMap::parse_file(args.config_path);
    for (const auto& s : args.sets) map.set_override(s);
    ScenarioConfig cfg = ScenarioConfig::from_map(map);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

void prepare_out(const ScenarioConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    write_text_file(cfg.out_dir + "/effective_config.cfg", cfg.echo());
}

int run_solve(const ScenarioConfig& cfg, bool control) {
    cfg.apply_backend();
    prepare_out(cfg);
    HamiltonianSpec spec = cfg.make_spec();
    ProblemData data = cfg.make_data();
    SolverConfig solver = cfg.make_solver();
    PicardOptions picard = cfg.make_picard();

    std::pair<MFGSolution, ConvergenceReport> result =
        control ? mftc_solve(spec, data, solver, picard)
                : picard_solve(spec, data, solver, picard);
    const MFGSolution& sol = result.first;
    const ConvergenceReport& rep = result.second;

    std::string extra;
    if (control && rep.converged) {
        ControlPair pair = induced_pair(sol);
        double J = objective_J(pair, spec, data);
        double feas = feasibility_residual(pair, data);
        extra = "J = " + format17(J) + "\nfeasibility_residual = " + format17(feas) + "\n";
        write_fields_csv(cfg.out_dir + "/fields.csv", sol, &pair);
    } else {
        write_fields_csv(cfg.out_dir + "/fields.csv", sol);
    }
    write_iterations_csv(cfg.out_dir + "/iterations.csv", rep);
    HypothesisReport hyp = check_hypotheses(spec, cfg.dim);
    write_text_file(cfg.out_dir + "/summary.txt", run_summary(cfg, &rep, &sol, &hyp, extra));

    char buf[200];
    std::snprintf(buf, sizeof buf, "%s: %s after %d outer iterations (final delta %.3g)",
                  control ? "solve-mftc" : "solve-mfg", diagnosis_name(rep.diagnosis),
                  rep.iterations, rep.deltas_m.empty() ? 0.0 : rep.deltas_m.back());
    log_info(buf);
    return rep.converged ? 0 : 2;
}

int run_oracle(const ScenarioConfig& cfg) {
    cfg.apply_backend();
    prepare_out(cfg);
    HamiltonianSpec spec = cfg.make_spec();
    ProblemData data = cfg.make_data();
    SolverConfig solver = cfg.make_solver();
    try {
        MFGSolution sol = newton_oracle_solve(spec, data, solver);
        Residuals res = pde_residuals(sol);
        write_fields_csv(cfg.out_dir + "/fields.csv", sol);
        std::string extra = "oracle_residual_hjb_sup = " + format17(res.hjb_sup) +
                            "\noracle_residual_fp_sup = " + format17(res.fp_sup) +
                            "\noracle_mass_err = " + format17(res.mass_err) + "\n";
        write_text_file(cfg.out_dir + "/summary.txt", run_summary(cfg, nullptr, &sol, nullptr, extra));
        log_info("oracle: converged, residual sup " + format17(std::max(res.hjb_sup, res.fp_sup)));
        return 0;
    } catch (const NewtonOracleFailure& e) {
        std::string extra = std::string("oracle_failure = ") + e.what() + "\n";
        extra += "residual_history =";
        for (double r : e.residual_history) extra += " " + format17(r);
        extra += "\n";
        write_text_file(cfg.out_dir + "/summary.txt",
                        run_summary(cfg, nullptr, nullptr, nullptr, extra));
        log_info(std::string("oracle: ") + e.what());
        return 2;
    }
}

int run_check(const ScenarioConfig& cfg) {
    cfg.apply_backend();
    prepare_out(cfg);
    HypothesisReport hyp = check_hypotheses(cfg.make_spec(), cfg.dim);
    std::string text = hyp.to_text();
    std::fputs(text.c_str(), stdout);
    write_text_file(cfg.out_dir + "/summary.txt", run_summary(cfg, nullptr, nullptr, &hyp));
    return 0;
}

// Manufactured backward solve: u*(t,x) = (T - t) sin(2 pi x) with r = 2,
// alpha = 0 and the matching source; measures sup error against u*.
double mms_hjb_error(int n, int K, double T, Scheme scheme) {
    const double pi = std::acos(-1.0);
    Grid g = Grid::periodic(1, n);
    TimeGrid time(T, K);
    HamiltonianSpec spec = HamiltonianSpec::canonical(2.0, 0.0, 0.0);
    auto fstar = [pi, T](double t, std::span<const double> x, double) {
        double s = std::sin(2.0 * pi * x[0]);
        double c = std::cos(2.0 * pi * x[0]);
        double tau = T - t;
        return s + tau * 4.0 * pi * pi * s + 0.5 * tau * tau * 4.0 * pi * pi * c * c;
    };
    ProblemData data = ProblemData::make(
        g, Coupling::tabulated(fstar), Coupling::zero(),
        sample_m0(M0Kind::Uniform, g));
    SolverConfig solver;
    solver.time = time;
    solver.scheme = scheme;
    SpaceTimeField m1 = SpaceTimeField::scalar(g, time, 1.0);
    SpaceTimeField u = solve_hjb_backward(spec, data, m1, solver);
    double err = 0.0;
    for (int k = 0; k <= K; ++k) {
        double tau = T - time.t(k);
        auto uk = u.slice(k);
        for (long i = 0; i < g.points(); ++i) {
            double ex = tau * std::sin(2.0 * pi * g.coord(g.ix(i)));
            err = std::max(err, std::abs(uk[i] - ex));
        }
    }
    return err;
}

int run_refine(const ScenarioConfig& cfg) {
    cfg.apply_backend();
    prepare_out(cfg);
    std::string extra;
    std::string csv = "study,level,n,K,value\n";
    if (cfg.refine_target == "hjb_mms") {
        Scheme scheme = cfg.make_solver().scheme;
        std::vector<double> space_err, time_err;
        for (std::size_t l = 0; l < cfg.refine_n.size(); ++l) {
            int n = int(cfg.refine_n[l]);
            double e = mms_hjb_error(n, cfg.refine_space_K, cfg.T, scheme);
            space_err.push_back(e);
            csv += "space," + std::to_string(l) + "," + std::to_string(n) + "," +
                   std::to_string(cfg.refine_space_K) + "," + format17(e) + "\n";
        }
        for (std::size_t l = 0; l < cfg.refine_time_K.size(); ++l) {
            int K = int(cfg.refine_time_K[l]);
            double e = mms_hjb_error(cfg.refine_time_n, K, cfg.T, scheme);
            time_err.push_back(e);
            csv += "time," + std::to_string(l) + "," + std::to_string(cfg.refine_time_n) + "," +
                   std::to_string(K) + "," + format17(e) + "\n";
        }
        auto order = [](const std::vector<double>& e) {
            return e.size() < 2 ? 0.0 : std::log2(e[e.size() - 2] / e.back());
        };
        extra += "space_errors =";
        for (double e : space_err) extra += " " + format17(e);
        extra += "\nspace_order = " + format17(order(space_err));
        extra += "\ntime_errors =";
        for (double e : time_err) extra += " " + format17(e);
        extra += "\ntime_order = " + format17(order(time_err)) + "\n";
    } else if (cfg.refine_target == "energy") {
        HamiltonianSpec spec = cfg.make_spec();
        std::vector<double> res;
        int n0 = int(cfg.refine_n.front());
        for (std::size_t l = 0; l < cfg.refine_n.size(); ++l) {
            ScenarioConfig c2 = cfg;
            c2.n = int(cfg.refine_n[l]);
            double scale = double(c2.n) / n0;
            c2.K = int(std::lround(cfg.K * scale * scale));
            auto [sol, rep] = picard_solve(spec, c2.make_data(), c2.make_solver(),
                                           c2.make_picard());
            double e = std::abs(energy_identity_residual(sol));
            res.push_back(e);
            csv += "energy," + std::to_string(l) + "," + std::to_string(c2.n) + "," +
                   std::to_string(c2.K) + "," + format17(e) + "\n";
        }
        extra += "energy_residuals =";
        for (double e : res) extra += " " + format17(e);
        if (res.size() >= 2) {
            double order = std::log(res[res.size() - 2] / res.back()) / std::log(4.0);
            extra += "\nenergy_order = " + format17(order);
        }
        extra += "\n";
    } else {
        throw std::invalid_argument("refine.target must be hjb_mms or energy");
    }
    write_text_file(cfg.out_dir + "/refine.csv", csv);
    write_text_file(cfg.out_dir + "/summary.txt", run_summary(cfg, nullptr, nullptr, nullptr, extra));
    log_info("refine-study written to " + cfg.out_dir);
    return 0;
}

int run_compare(const ScenarioConfig& cfg) {
    cfg.apply_backend();
    ScenarioConfig c2 = cfg;
    c2.eps = 0.0;             // the control machinery is unregularized
    c2.eps_ladder = {0.0};
    prepare_out(c2);
    CompareReport rep = compare_mfg_mftc(c2.make_spec(), c2.make_data(), c2.make_solver(),
                                         c2.make_picard());
    std::string extra = rep.to_text();
    write_text_file(c2.out_dir + "/summary.txt", run_summary(c2, nullptr, nullptr, nullptr, extra));
    std::string csv = "quantity,value\ndist_u," + format17(rep.dist_u) + "\ndist_m," +
                      format17(rep.dist_m) + "\nJ_mftc," + format17(rep.J_mftc) +
                      "\nJ_mfg_pair," + format17(rep.J_mfg_pair) + "\n";
    write_text_file(c2.out_dir + "/compare.csv", csv);
    log_info("compare: dist_m " + format17(rep.dist_m) + ", J gap " +
             format17(rep.J_mfg_pair - rep.J_mftc));
    return (rep.mfg_report.converged && rep.mftc_report.converged) ? 0 : 2;
}

int run_sweep(const ScenarioConfig& cfg, int jobs) {
    cfg.apply_backend();
    prepare_out(cfg);
    const auto& Ts = cfg.sweep_T;
    std::vector<int> iters(Ts.size(), 0);
    std::vector<bool> conv(Ts.size(), false);
    std::vector<std::string> diag(Ts.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= Ts.size()) return;
            ScenarioConfig c2 = cfg;
            c2.T = Ts[i];
            char sub[64];
            std::snprintf(sub, sizeof sub, "%s/T_%g", cfg.out_dir.c_str(), Ts[i]);
            c2.out_dir = sub;
            fs::create_directories(c2.out_dir);
            write_text_file(c2.out_dir + "/effective_config.cfg", c2.echo());
            auto [sol, rep] = picard_solve(c2.make_spec(), c2.make_data(), c2.make_solver(),
                                           c2.make_picard());
            write_iterations_csv(c2.out_dir + "/iterations.csv", rep);
            HypothesisReport hyp = check_hypotheses(c2.make_spec(), c2.dim);
            write_text_file(c2.out_dir + "/summary.txt", run_summary(c2, &rep, &sol, &hyp));
            iters[i] = rep.iterations;
            conv[i] = rep.converged;
            diag[i] = diagnosis_name(rep.diagnosis);
        }
    };
    int nw = std::max(1, std::min<int>(jobs, int(Ts.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::string csv = "T,iterations,converged,diagnosis\n";
    bool all = true;
    for (std::size_t i = 0; i < Ts.size(); ++i) {
        csv += format17(Ts[i]) + "," + std::to_string(iters[i]) + "," +
               (conv[i] ? "1" : "0") + "," + diag[i] + "\n";
        all = all && conv[i];
    }
    write_text_file(cfg.out_dir + "/sweep.csv", csv);
    log_info("sweep-T written to " + cfg.out_dir + "/sweep.csv");
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"congestion mean field game solver and verification suite"};
    app.require_subcommand(1);

    CommonArgs args;
    app.add_option("--config", args.config_path, "scenario configuration file");
    app.add_option("--set", args.sets, "override key=value (repeatable)");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_option("--jobs", args.jobs, "parallel workers for sweeps");

    auto* s_mfg = app.add_subcommand("solve-mfg", "run the damped fixed-point game solver");
    auto* s_mftc = app.add_subcommand("solve-mftc", "run the control companion solver");
    auto* s_oracle = app.add_subcommand("oracle", "run the monolithic Newton oracle");
    auto* s_check = app.add_subcommand("check-hypotheses", "evaluate structural hypotheses");
    auto* s_refine = app.add_subcommand("refine-study", "convergence-order studies");
    auto* s_compare = app.add_subcommand("compare", "game vs control comparison");
    auto* s_sweep = app.add_subcommand("sweep-T", "horizon sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ScenarioConfig cfg = load_scenario(args);
        if (s_mfg->parsed()) return run_solve(cfg, false);
        if (s_mftc->parsed()) {
            if (cfg.eps != 0.0) {
                log_info("solve-mftc runs unregularized; forcing hamiltonian.eps = 0");
                cfg.eps = 0.0;
                cfg.eps_ladder = {0.0};
            }
            return run_solve(cfg, true);
        }
        if (s_oracle->parsed()) return run_oracle(cfg);
        if (s_check->parsed()) return run_check(cfg);
        if (s_refine->parsed()) return run_refine(cfg);
        if (s_compare->parsed()) return run_compare(cfg);
        if (s_sweep->parsed()) return run_sweep(cfg, args.jobs);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
