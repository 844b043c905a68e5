#pragma once

#include <string>
#include <vector>

#include "smtjpop/population.hpp"

namespace smtjpop {

enum class RateMode { analytic, monte_carlo };

/// Rates of every junction at every probed stimulus; row k = stimulus k,
/// column i = junction i. The tuning curves act as a basis set.
struct BasisMatrix {
    std::vector<double> entries;  // row-major, rows x cols
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> stimuli;

    double at(std::size_t k, std::size_t i) const {
        return entries[k * cols + i];
    }
    double& at(std::size_t k, std::size_t i) { return entries[k * cols + i]; }
};

struct WeightSolution {
    std::vector<double> weights;  // one per junction
    double residual_rel = 0.0;    // ||R w - H|| / ||H||
};

/// Piecewise-linear function through sampled points, inputs strictly
/// increasing; evaluation clamps outside the sampled span.
struct SampledFunction {
    std::vector<double> inputs;
    std::vector<double> outputs;

    double operator()(double x) const;
};

struct Trajectory {
    SampledFunction x;
    SampledFunction y;
};

/// Probe the population's tuning curves over a stimulus grid, either
/// noise-free from the rate formula or by Monte Carlo windows.
BasisMatrix measure_basis(Population& pop, const std::vector<double>& stimuli,
                          long steps, double dt, RateMode mode, RngStream rng);

/// Least-squares mixing weights: minimize ||R w - targets||_2. Columns are
/// equilibrated to unit norm before a rank-revealing QR solve; near-dependent
/// columns (condition contribution beyond 1e10) are reported by index.
WeightSolution solve_weights(const BasisMatrix& r,
                             const std::vector<double>& targets);

/// Weighted sum of rates: the reconstructed function value.
double reconstruct(const std::vector<double>& weights,
                   const std::vector<double>& rates);

/// Altitude-vs-current target used as the nonlinear benchmark function.
double barometric_target(double i_amps);

/// Parametric (t, x, y) trajectory from delimited text with a header line.
Trajectory load_trajectory(const std::string& path);

}  // namespace smtjpop
