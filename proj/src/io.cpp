#include "mfg/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "mfg/diagnostics.hpp"

namespace mfg {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << content;
}

void write_fields_csv(const std::string& path, const MFGSolution& sol,
                      const ControlPair* pair) {
    const Grid& g = sol.data.grid;
    const TimeGrid& time = sol.config.time;
    std::string out;
    out += "t,x";
    if (g.dim == 2) out += ",y";
    out += ",u,m,b_x";
    if (g.dim == 2) out += ",b_y";
    if (pair) {
        out += ",w_x";
        if (g.dim == 2) out += ",w_y";
    }
    out += "\n";
    for (int k = 0; k <= time.steps; ++k) {
        for (long i = 0; i < g.points(); ++i) {
            out += format17(time.t(k));
            out += ",";
            out += format17(g.coord(g.ix(i)));
            if (g.dim == 2) {
                out += ",";
                out += format17(g.coord(g.iy(i)));
            }
            out += ",";
            out += format17(sol.u.at(k, 0, i));
            out += ",";
            out += format17(sol.m.at(k, 0, i));
            for (int c = 0; c < g.dim; ++c) {
                out += ",";
                out += format17(sol.drift.at(k, c, i));
            }
            if (pair)
                for (int c = 0; c < g.dim; ++c) {
                    out += ",";
                    out += format17(pair->w.at(k, c, i));
                }
            out += "\n";
        }
    }
    write_text_file(path, out);
}

void write_iterations_csv(const std::string& path, const ConvergenceReport& rep) {
    std::string out = "iteration,delta_m,delta_u\n";
    for (std::size_t i = 0; i < rep.deltas_m.size(); ++i) {
        out += std::to_string(i + 1);
        out += ",";
        out += format17(rep.deltas_m[i]);
        out += ",";
        out += format17(i < rep.deltas_u.size() ? rep.deltas_u[i] : 0.0);
        out += "\n";
    }
    write_text_file(path, out);
}

std::string report_json(const ConvergenceReport& rep) {
    nlohmann::json j;
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["diagnosis"] = diagnosis_name(rep.diagnosis);
    j["message"] = rep.message;
    j["eps_stages"] = rep.eps_stages;
    j["stage_iterations"] = rep.stage_iterations;
    j["deltas_m"] = rep.deltas_m;
    j["deltas_u"] = rep.deltas_u;
    j["residuals"] = {{"hjb_sup", rep.hjb_res_sup},
                      {"fp_sup", rep.fp_res_sup},
                      {"terminal_sup", rep.terminal_res},
                      {"mass_err", rep.mass_err}};
    j["bounds"] = {{"sup_m", rep.bounds.sup_m_global},
                   {"inf_m", rep.bounds.inf_m_global},
                   {"sup_inv_m", rep.bounds.sup_inv_m},
                   {"l2h1_seminorm", rep.bounds.l2h1_seminorm},
                   {"drift_lrprime", rep.bounds.drift_lrprime},
                   {"energy_density_l1", rep.bounds.energy_density_l1}};
    return j.dump(2);
}

std::string run_summary(const ScenarioConfig& cfg, const ConvergenceReport* rep,
                        const MFGSolution* sol, const HypothesisReport* hyp,
                        const std::string& extra) {
    std::string s = "== config ==\n";
    s += cfg.echo();
    if (rep) {
        s += "== report ==\n";
        s += report_json(*rep);
        s += "\n";
    }
    if (sol && sol->u.all_finite() && sol->m.all_finite()) {
        s += "== diagnostics ==\n";
        s += diagnostics_text(*sol);
        s += "== bounds ==\n";
        s += bounds_tracker(sol->m, sol->drift, sol->spec.r_prime()).to_text();
    }
    if (hyp) {
        s += "== hypotheses ==\n";
        s += hyp->to_text();
    }
    if (!extra.empty()) {
        s += "== study ==\n";
        s += extra;
    }
    return s;
}

} // namespace mfg
