#pragma once

#include <string>
#include <vector>

#include "smtjpop/config.hpp"

namespace smtjpop {

struct RunResult {
    std::string out_dir;
    std::vector<std::string> files;  // relative names, manifest last
};

/// Execute one fully validated experiment config: run the simulation, write
/// every output file plus the checksummed run manifest into cfg.out_dir.
/// Identical (config, seed) produce byte-identical data files.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace smtjpop
