#pragma once

#include <string>

#include "mfg/hamiltonian.hpp"
#include "mfg/mftc.hpp"
#include "mfg/scenario.hpp"

namespace mfg {

std::string format17(double v);

// Plot-ready lattice dump: header row, one line per (time level, point),
// columns t,x[,y],u,m,b_x[,b_y][,w_x[,w_y]], 17 significant digits.
void write_fields_csv(const std::string& path, const MFGSolution& sol,
                      const ControlPair* pair = nullptr);

void write_iterations_csv(const std::string& path, const ConvergenceReport& rep);

std::string report_json(const ConvergenceReport& rep);

void write_text_file(const std::string& path, const std::string& content);

// Human-readable run summary with delimited blocks; the config block is the
// exact effective configuration (also written separately for round trips).
std::string run_summary(const ScenarioConfig& cfg, const ConvergenceReport* rep,
                        const MFGSolution* sol, const HypothesisReport* hyp,
                        const std::string& extra = "");

} // namespace mfg
