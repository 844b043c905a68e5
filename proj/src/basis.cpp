#include "smtjpop/basis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace smtjpop {

double SampledFunction::operator()(double x) const {
    if (inputs.empty()) throw SimulationError("sampled function is empty");
    if (x <= inputs.front()) return outputs.front();
    if (x >= inputs.back()) return outputs.back();
    auto it = std::upper_bound(inputs.begin(), inputs.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - inputs.begin());
    std::size_t lo = hi - 1;
    double t = (x - inputs[lo]) / (inputs[hi] - inputs[lo]);
    return outputs[lo] + t * (outputs[hi] - outputs[lo]);
}

BasisMatrix measure_basis(Population& pop, const std::vector<double>& stimuli,
                          long steps, double dt, RateMode mode, RngStream rng) {
    if (stimuli.empty()) throw ConfigError("basis needs at least one stimulus");
    BasisMatrix m;
    m.rows = stimuli.size();
    m.cols = pop.size();
    m.stimuli = stimuli;
    m.entries.assign(m.rows * m.cols, 0.0);
    for (std::size_t k = 0; k < m.rows; ++k) {
        std::vector<double> r =
            (mode == RateMode::analytic)
                ? analytic_rates(pop, stimuli[k])
                : simulate_window(pop, stimuli[k], steps, dt, rng.at(k)).rates();
        for (std::size_t i = 0; i < m.cols; ++i) m.at(k, i) = r[i];
    }
    return m;
}

WeightSolution solve_weights(const BasisMatrix& r,
                             const std::vector<double>& targets) {
    if (r.rows < r.cols)
        throw ConfigError("solve needs at least as many stimuli as junctions");
    if (targets.size() != r.rows)
        throw ConfigError("target vector length does not match basis rows");

    Eigen::MatrixXd a(r.rows, r.cols);
    for (std::size_t k = 0; k < r.rows; ++k)
        for (std::size_t i = 0; i < r.cols; ++i) a(k, i) = r.at(k, i);
    Eigen::VectorXd h(r.rows);
    for (std::size_t k = 0; k < r.rows; ++k) h(k) = targets[k];

    // Equilibrate columns to unit norm so the rank test compares curve
    // *shapes*, not magnitudes (rates span decades across junctions).
    Eigen::VectorXd col_norm(r.cols);
    for (std::size_t i = 0; i < r.cols; ++i) {
        double n = a.col(i).norm();
        col_norm(i) = n > 0.0 ? n : 1.0;
        a.col(i) /= col_norm(i);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    const auto& qr_mat = qr.matrixQR();
    double lead = std::abs(qr_mat(0, 0));
    std::size_t rank = 0;
    for (std::size_t i = 0; i < r.cols; ++i)
        if (std::abs(qr_mat(i, i)) > lead / 1e10) ++rank;
    if (rank < r.cols) {
        // The pivoting pushed the offending columns to the back; name them.
        std::ostringstream msg;
        msg << "basis is rank deficient: near-dependent junction columns";
        for (std::size_t i = rank; i < r.cols; ++i)
            msg << ' ' << qr.colsPermutation().indices()(static_cast<int>(i));
        throw SimulationError(msg.str());
    }

    Eigen::VectorXd w = qr.solve(h);
    for (std::size_t i = 0; i < r.cols; ++i) w(i) /= col_norm(i);

    WeightSolution sol;
    sol.weights.assign(w.data(), w.data() + w.size());
    Eigen::MatrixXd raw(r.rows, r.cols);
    for (std::size_t k = 0; k < r.rows; ++k)
        for (std::size_t i = 0; i < r.cols; ++i) raw(k, i) = r.at(k, i);
    double hn = h.norm();
    sol.residual_rel = (raw * w - h).norm() / (hn > 0.0 ? hn : 1.0);
    return sol;
}

double reconstruct(const std::vector<double>& weights,
                   const std::vector<double>& rates) {
    if (weights.size() != rates.size())
        throw ConfigError("weight/rate dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * rates[i];
    return s;
}

double barometric_target(double i_amps) {
    double base = (i_amps + 4.2e-4) / 0.1;
    if (base < 0.0) throw ConfigError("barometric target outside domain");
    return 1.0 + 0.3 * (1.0 - std::pow(base, 1.0 / 5.255));
}

Trajectory load_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trajectory file: " + path);
    Trajectory traj;
    std::string line;
    long line_no = 0;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ss(line);
        double t, x, y;
        if (!(ss >> t >> x >> y)) {
            if (!header_skipped) {  // one non-numeric header line is allowed
                header_skipped = true;
                continue;
            }
            throw ConfigError("trajectory parse error at line " +
                              std::to_string(line_no) + " of " + path);
        }
        header_skipped = true;
        if (!traj.x.inputs.empty() && t <= traj.x.inputs.back())
            throw ConfigError("trajectory parameter not increasing at line " +
                              std::to_string(line_no) + " of " + path);
        traj.x.inputs.push_back(t);
        traj.x.outputs.push_back(x);
        traj.y.inputs.push_back(t);
        traj.y.outputs.push_back(y);
    }
    if (traj.x.inputs.size() < 2)
        throw ConfigError("trajectory needs at least 2 samples: " + path);
    return traj;
}

}  // namespace smtjpop
