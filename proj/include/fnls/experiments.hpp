#pragma once

#include <ostream>
#include <string>

#include "fnls/config.hpp"
#include "fnls/error.hpp"
#include "fnls/ground_state.hpp"

namespace fnls {

// Process exit codes of the batch runners.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNotConverged = 3, kExitNumerical = 4 };

// Map a library error onto an exit code.
int exit_code_for(const Error& e);

// Ground state for the config: loaded from dynamics.ground_state when set
// (and polished by the solver), otherwise solved from a centred Gaussian.
GroundStateResult obtain_ground_state(const ExperimentConfig& cfg);

// Each runner writes into out_dir (created if needed), embeds the resolved
// config and its hash in every file, logs one-line progress to log, and
// returns an exit code.
int run_ground(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int run_mc_curve(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int run_evolve(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int run_classify(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int run_dichotomy(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int run_gn_probe(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int run_virial_check(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

}  // namespace fnls
