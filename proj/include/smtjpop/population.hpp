#pragma once

#include <cstdint>
#include <vector>

#include "smtjpop/device.hpp"

namespace smtjpop {

/// Parameter spread across a population. delta is uniform over
/// center ± span/2; v_c is Gaussian (resampled until positive).
struct VariabilitySpec {
    double delta_center = 13.78;
    double delta_span = 0.0;
    double v_c_mean = 0.142;
    double v_c_std = 0.0;
    double phi0 = 1e9;
};

/// An ordered bank of junctions with evenly spaced tuning biases. Dead
/// junctions stay in place (mask, not removal) so weight-matrix indices
/// survive fault injection.
struct Population {
    std::vector<JunctionParams> params;
    std::vector<JunctionState> states;
    std::vector<char> dead;
    double v_min = 0.0;
    double v_max = 0.0;

    std::size_t size() const { return params.size(); }
    bool alive(std::size_t i) const { return !dead[i]; }
    double bias(std::size_t i) const { return params[i].v0; }
    double range_width() const { return v_max - v_min; }
};

/// One simulated observation window.
struct RateWindow {
    std::vector<double> counts;  // full P<->AP cycles = transitions/2
    double duration = 0.0;
    double dt = 0.0;
    long steps = 0;

    std::vector<double> rates() const {
        std::vector<double> r(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i)
            r[i] = counts[i] / duration;
        return r;
    }
};

struct SampledCounts {
    std::vector<std::uint64_t> sampled;  // comparator view, one look per clock
    std::vector<std::uint64_t> exact;    // true transition count, same trajectory
};

/// Evenly biased population over [v_min, v_max] with sampled variability.
Population build_population(std::size_t n, double v_min, double v_max,
                            const VariabilitySpec& variability, RngStream rng);

/// Population from explicit per-junction parameters (e.g. a measured set);
/// biases spread evenly over the range unless params already carry v0 spread
/// (keep_biases = true).
Population make_population(std::vector<JunctionParams> params, double v_min,
                           double v_max, bool keep_biases = false);

/// Step every live junction for `steps` timesteps under a common stimulus
/// (v_eff_i = stimulus - v0_i) and count full cycles. Junction states carry
/// over between windows. Per-junction RNG substreams make the result
/// independent of evaluation order.
RateWindow simulate_window(Population& pop, double stimulus, long steps,
                           double dt, RngStream rng);

/// Clocked-comparator view: continuous-time telegraph trajectories sampled
/// once per clock edge; a count registers only when consecutive samples
/// differ, so multiple switches within one clock period are missed. Returns
/// the sampled count next to the exact count of the same trajectory.
SampledCounts sampled_event_count(Population& pop, double stimulus,
                                  double clock_dt, std::uint64_t cycles,
                                  RngStream rng);

/// Same comparator view, but each junction sits at its own drive point
/// (v_eff[i] directly, not stimulus - v0_i); used for output populations.
SampledCounts sampled_event_count_driven(Population& pop,
                                         const std::vector<double>& v_eff,
                                         double clock_dt, std::uint64_t cycles,
                                         RngStream rng);

/// Population vector read-out (weighted mean of biases): sum v0_j r_j / sum r_j.
double decode(const Population& pop, const std::vector<double>& rates);

/// Analytic per-junction rates at a stimulus; dead junctions report 0.
std::vector<double> analytic_rates(const Population& pop, double stimulus);

/// Mark round(fraction * n) distinct junctions dead (in place).
void kill_neurons(Population& pop, double fraction, RngStream rng);

}  // namespace smtjpop
