#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "smtjpop/population.hpp"

namespace smtjpop {

enum class Direction : std::uint8_t { decrease, hold, increase };

struct WeightMatrix {
    std::vector<double> w;  // row-major (input i, output j)
    std::size_t n_in = 0;
    std::size_t n_out = 0;

    double at(std::size_t i, std::size_t j) const { return w[i * n_out + j]; }
    double& at(std::size_t i, std::size_t j) { return w[i * n_out + j]; }
};

struct LearnConfig {
    double alpha = 0.001;          // learning rate
    double catch_halfwidth = 0.02; // fraction of the output range
    double f0_norm = 518.0743;     // Hz, nominal natural rate F0 in the rule
    long steps = 3000;             // learning trials
    int eval_trials = 50;          // fresh trials per evaluation point
    long eval_every = 100;         // evaluation cadence in steps
    long window_steps = 100;       // Monte Carlo observation window length
    double dt = 439e-6;            // s per Monte Carlo step
    bool analytic = false;         // noise-free mode (rates from the formula)
    double rate_floor_frac = 1e-3; // floor for target rates, fraction of r0
};

/// A named 1D target transform with its declared input/output ranges.
struct Transform {
    std::string name;
    std::function<double(double)> f;
    double in_min = 0.0, in_max = 0.0;
    double out_min = 0.0, out_max = 0.0;
};

struct EvalPoint {
    long step;
    double mean_err_pct;  // mean |Y - T(Z)| over eval trials, % of out range
    double std_err_pct;
};

struct LearnResult {
    std::vector<EvalPoint> curve;
    WeightMatrix w;
    long clamp_events = 0;  // forward rates pushed back into (floor, r0]
};

struct DriveResult {
    std::vector<double> rates;
    double y = 0.0;
    long clamp_events = 0;
};

/// Linear transfer: target output rate j = sum_i w_ij * r_in_i.
std::vector<double> forward(const std::vector<double>& rates_in,
                            const WeightMatrix& w);

/// Random positive weights scaled so initial forward rates land near the
/// output population's natural rate: uniform in [0, 2*f0_out/(f0_in*n_in)).
WeightMatrix init_weights(std::size_t n_in, std::size_t n_out, double f0_in,
                          double f0_out, RngStream rng);

/// Push each output junction toward its target rate: clamp the rate into
/// (floor, r0], invert the tuning curve for the drive bias, observe the
/// population, decode. Analytic mode skips the Monte Carlo observation and
/// reports the clamped targets themselves.
DriveResult drive_output(Population& pop_out,
                         const std::vector<double>& target_rates, long steps,
                         double dt, bool analytic, double rate_floor_frac,
                         RngStream rng);

/// Strike verdict for one trial: inside the catch zone everything holds;
/// otherwise junctions tuned beyond the decoded position (on the overshoot
/// side) are decreased and the rest increased, pulling Y toward the target.
std::vector<Direction> trial_direction(double y, double target,
                                       double catch_halfwidth_volts,
                                       const Population& pop_out);

/// w_ij <- (w_ij ± alpha*r_in_i/F0) / (1+alpha), per output column's verdict.
void update_weights(WeightMatrix& w, const std::vector<double>& rates_in,
                    const std::vector<Direction>& dir, double alpha,
                    double f0_norm);

/// Named transforms with declared ranges. Optional params override the
/// reconstruction constants (e.g. inverse: k, z0).
Transform transform_library(const std::string& name,
                            const std::map<std::string, double>& params = {});

/// One evaluation point: mean/std error over fresh random stimuli, no updates.
EvalPoint evaluate(const Transform& task, const LearnConfig& cfg,
                   Population& pop_in, Population& pop_out,
                   const WeightMatrix& w, long step, RngStream rng);

/// Full trial-and-error loop; returns the error curve (step 0, every
/// eval_every, final) plus the trained weights.
LearnResult run_learning(const Transform& task, const LearnConfig& cfg,
                         Population& pop_in, Population& pop_out,
                         WeightMatrix w, RngStream rng);

/// Concatenate per-population rate vectors; offsets map population k to its
/// first index in the combined vector.
std::vector<double> concat_inputs(
    const std::vector<std::vector<double>>& rate_vectors,
    std::vector<std::size_t>* offsets = nullptr);

struct LearnResult2D {
    std::vector<EvalPoint> curve;  // mean Euclidean distance, % of out range
    WeightMatrix w_x, w_y;
    long clamp_events = 0;
};

/// Two-input polar -> Cartesian task: populations for R and phi feed one
/// concatenated input; separate weight matrices drive the x and y output
/// populations, each with its own catch test on its own axis.
LearnResult2D run_learning_polar(const LearnConfig& cfg, Population& pop_r,
                                 Population& pop_phi, Population& pop_x,
                                 Population& pop_y, RngStream rng);

struct ChainStage {
    const WeightMatrix* w;
    Population* pop;
};

/// Feed a stimulus through input population and every stage in turn; the
/// measured rates of stage k drive stage k+1. Returns the final decoded Y.
double chain_forward(Population& pop_in, const std::vector<ChainStage>& stages,
                     double stimulus, const LearnConfig& cfg, RngStream rng,
                     long* clamp_events = nullptr);

/// Kill a fraction of both populations of a trained system, then resume
/// learning from the surviving weights.
LearnResult relearn_after_fault(const Transform& task, const LearnConfig& cfg,
                                Population& pop_in, Population& pop_out,
                                WeightMatrix w, double fraction, RngStream rng);

}  // namespace smtjpop
