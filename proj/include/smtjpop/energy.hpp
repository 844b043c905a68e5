#pragma once

#include <vector>

#include "smtjpop/learning.hpp"

namespace smtjpop {

struct EnergyConfig {
    double ra_product = 20.0;        // ohm * um^2
    double diameter = 7.7e-9;        // m
    double v_stim_max = 0.1;         // V, worst-case stimulus amplitude
    double resistance_override = 0;  // ohms; > 0 wins over the RA formula
};

/// R = RA / junction area. RA is quoted in ohm*um^2; diameter in meters.
double junction_resistance(const EnergyConfig& cfg);

/// Static power of holding the tuning biases: sum of v0^2/R over junctions.
double shift_power(const Population& pop, double resistance);

/// Worst-case stimulus drive power: n * v_stim_max^2 / R.
double stimulus_power(std::size_t n, double v_stim_max, double resistance);

/// Average-case variant integrating an actual stimulus value.
double stimulus_power_at(std::size_t n, double v_stim, double resistance);

struct PrecisionPoint {
    long window_steps;
    double window_s;
    double energy_j;  // (shift + stimulus power) * window duration
    double error_pct;
    double error_std;
};

struct PrecisionSweep {
    std::vector<PrecisionPoint> points;
    std::vector<long> excluded;  // window lengths that produced no decode
};

/// Read-out precision vs energy per operation: evaluate one trained system
/// at different observation window lengths; energy is the input population's
/// total power times the window duration.
PrecisionSweep precision_energy_sweep(const Transform& task,
                                      const LearnConfig& cfg,
                                      Population& pop_in, Population& pop_out,
                                      const WeightMatrix& w,
                                      const std::vector<long>& window_steps,
                                      const EnergyConfig& ecfg, RngStream rng);

}  // namespace smtjpop
