#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smtjpop/basis.hpp"
#include "smtjpop/datapath.hpp"
#include "smtjpop/energy.hpp"
#include "smtjpop/learning.hpp"

namespace smtjpop {

struct PopulationConfig {
    std::size_t n = 0;
    double v_min = 0.0;
    double v_max = 0.0;
    VariabilitySpec variability;
    std::vector<JunctionParams> explicit_params;  // non-empty = explicit list
    bool keep_biases = false;

    Population build(RngStream rng) const;
};

struct RatesBlock {
    double bias_min = 0.0;
    double bias_max = 0.0;
    int points = 41;
    long window_steps = 100000;
    double dt = 439e-6;
};

struct FitBlock {
    std::string table_path;
};

struct BasisBlock {
    double stim_min = 0.0;
    double stim_max = 0.0;
    int points = 50;
    std::string target = "barometric";  // or "trajectory"
    std::string trajectory_path;
    long window_steps = 100000;
    double dt = 439e-6;
};

struct TaskBlock {
    std::string transform = "identity";
    std::map<std::string, double> params;
};

struct SweepBlock {
    std::string kind;                   // vc_variability | delta_variability |
                                        // population_size | energy_window | fault
    std::vector<double> values;         // sweep points (meaning depends on kind)
    std::vector<long> window_steps_list;
    long relearn_steps = 1500;
};

struct DatapathBlock {
    DatapathConfig dp;
    CostParams costs;
    bool compare_float = false;
};

struct ExperimentConfig {
    std::string experiment;  // rates | fit | basis | learn | sweep | datapath
    std::uint64_t seed = 0;
    RateMode mode = RateMode::monte_carlo;
    std::string out_dir = "smtjpop_out";

    std::optional<PopulationConfig> pop_in;
    std::optional<PopulationConfig> pop_out;
    std::optional<TaskBlock> task;
    LearnConfig learn;
    std::optional<RatesBlock> rates;
    std::optional<FitBlock> fit;
    std::optional<BasisBlock> basis;
    std::optional<SweepBlock> sweep;
    std::optional<DatapathBlock> datapath;
    EnergyConfig energy;

    std::string config_path;  // for the manifest
    nlohmann::json raw;       // exact parsed document
};

/// Parse and fully validate a config document; unknown keys are rejected
/// with the path of the offending key. Relative file paths inside the config
/// resolve against the config file's directory.
ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::string& config_path);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace smtjpop
