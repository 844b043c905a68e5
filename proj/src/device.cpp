#include "smtjpop/device.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace smtjpop {
namespace {

// Squared log-rate residual of the tuning curve against samples.
// theta = (ln delta, ln x_c, x0). Log residuals because rates span decades.
double log_residual(const std::array<double, 3>& theta, double phi0,
                    const std::vector<std::pair<double, double>>& samples) {
    double delta = std::exp(theta[0]);
    double x_c = std::exp(theta[1]);
    double x0 = theta[2];
    double log_r0 = std::log(0.5 * phi0) - delta;
    double sum = 0.0;
    for (const auto& [x, r] : samples) {
        double z = delta * (x - x0) / x_c;
        // log(cosh z) computed overflow-free
        double lc = std::abs(z) + std::log1p(std::exp(-2.0 * std::abs(z))) -
                    0.6931471805599453;
        double e = (log_r0 - lc) - std::log(r);
        sum += e * e;
    }
    return sum;
}

// Plain Nelder-Mead over 3 parameters; good enough here because the grid
// stage already lands near the basin.
std::array<double, 3> nelder_mead(
    std::array<double, 3> start, const std::array<double, 3>& scale,
    double phi0, const std::vector<std::pair<double, double>>& samples) {
    constexpr int kDim = 3;
    std::array<std::array<double, 3>, kDim + 1> pts;
    std::array<double, kDim + 1> fv;
    pts[0] = start;
    for (int i = 0; i < kDim; ++i) {
        pts[i + 1] = start;
        pts[i + 1][i] += scale[i];
    }
    for (int i = 0; i <= kDim; ++i) fv[i] = log_residual(pts[i], phi0, samples);

    for (int iter = 0; iter < 4000; ++iter) {
        std::array<int, kDim + 1> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return fv[a] < fv[b]; });
        int best = idx[0], worst = idx[kDim], second = idx[kDim - 1];

        double spread = 0.0;
        for (int i = 0; i < kDim; ++i)
            spread = std::max(spread, std::abs(pts[worst][i] - pts[best][i]));
        if (spread < 1e-12 && fv[worst] - fv[best] < 1e-16) break;

        std::array<double, 3> centroid{0, 0, 0};
        for (int i = 0; i <= kDim; ++i) {
            if (i == worst) continue;
            for (int d = 0; d < kDim; ++d) centroid[d] += pts[i][d] / kDim;
        }
        auto blend = [&](double t) {
            std::array<double, 3> p;
            for (int d = 0; d < kDim; ++d)
                p[d] = centroid[d] + t * (centroid[d] - pts[worst][d]);
            return p;
        };

        auto refl = blend(1.0);
        double f_refl = log_residual(refl, phi0, samples);
        if (f_refl < fv[best]) {
            auto exp_pt = blend(2.0);
            double f_exp = log_residual(exp_pt, phi0, samples);
            if (f_exp < f_refl) { pts[worst] = exp_pt; fv[worst] = f_exp; }
            else { pts[worst] = refl; fv[worst] = f_refl; }
        } else if (f_refl < fv[second]) {
            pts[worst] = refl;
            fv[worst] = f_refl;
        } else {
            auto con = blend(f_refl < fv[worst] ? 0.5 : -0.5);
            double f_con = log_residual(con, phi0, samples);
            if (f_con < std::min(f_refl, fv[worst])) {
                pts[worst] = con;
                fv[worst] = f_con;
            } else {
                for (int i = 0; i <= kDim; ++i) {
                    if (i == best) continue;
                    for (int d = 0; d < kDim; ++d)
                        pts[i][d] = 0.5 * (pts[i][d] + pts[best][d]);
                    fv[i] = log_residual(pts[i], phi0, samples);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= kDim; ++i)
        if (fv[i] < fv[best]) best = i;
    return pts[best];
}

}  // namespace

long advance_telegraph(JunctionState& st, const JunctionParams& p, double v_eff,
                       long steps, double dt, RngStream& rng) {
    EscapeRates er = escape_rates(p, v_eff);
    double p_from_p = switch_probability(er.from_p, dt);
    double p_from_ap = switch_probability(er.from_ap, dt);
    long transitions = 0;
    long remaining = steps;
    while (remaining > 0) {
        double pr =
            (st.orientation == Orientation::P) ? p_from_p : p_from_ap;
        if (pr <= 0.0) break;  // frozen in this state for the rest of the window
        long jump = 1;
        if (pr < 1.0) {
            // steps until the next switch: G = 1 + floor(log U / log(1-pr)),
            // the inverse-CDF draw of the geometric law the step loop obeys
            double g = std::log(rng.uniform()) / std::log1p(-pr);
            if (!(g < static_cast<double>(remaining))) break;  // outlives window
            jump += static_cast<long>(g);
        }
        st.orientation = (st.orientation == Orientation::P) ? Orientation::AP
                                                            : Orientation::P;
        st.elapsed = 0.0;
        ++transitions;
        remaining -= jump;
    }
    // whatever tail had no switch just ages the state
    st.elapsed += dt * static_cast<double>(remaining);
    return transitions;
}

JunctionParams fit_params(const std::vector<std::pair<double, double>>& samples,
                          double phi0) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : samples)
        if (std::isfinite(s.first) && s.second > 0.0 && std::isfinite(s.second))
            pts.push_back(s);
    if (pts.size() < 3)
        throw ConfigError("fit needs at least 3 samples with positive rate");

    auto [r_lo, r_hi] = std::minmax_element(
        pts.begin(), pts.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    if (r_hi->second <= r_lo->second * (1.0 + 1e-12))
        throw SimulationError("unidentifiable: all sample rates are equal");

    auto [x_lo, x_hi] = std::minmax_element(pts.begin(), pts.end());
    double span = x_hi->first - x_lo->first;
    if (!(span > 0.0))
        throw SimulationError("unidentifiable: all sample biases are equal");

    // Initial guesses: peak sample → delta; farthest sample → x_c via the
    // large-argument asymptote log cosh(z) ≈ |z| − log 2.
    double x0_init = r_hi->first;
    double delta_init = std::max(0.5, std::log(0.5 * phi0 / r_hi->second));
    const auto& far = std::abs(x_lo->first - x0_init) >
                              std::abs(x_hi->first - x0_init)
                          ? *x_lo
                          : *x_hi;
    double drop = std::log(r_hi->second / far.second) + 0.6931471805599453;
    double xc_init = drop > 0.1
                         ? delta_init * std::abs(far.first - x0_init) / drop
                         : 0.5 * span;

    // Coarse grid around the guesses, then local descent from the best cell.
    std::array<double, 3> best_theta{std::log(delta_init), std::log(xc_init),
                                     x0_init};
    double best_f = std::numeric_limits<double>::infinity();
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int c = -3; c <= 3; ++c) {
                std::array<double, 3> th{std::log(delta_init) + 0.25 * a,
                                         std::log(xc_init) + 0.5 * b,
                                         x0_init + span / 12.0 * c};
                double f = log_residual(th, phi0, pts);
                if (f < best_f) { best_f = f; best_theta = th; }
            }

    auto th = nelder_mead(best_theta, {0.1, 0.1, span / 50.0}, phi0, pts);
    th = nelder_mead(th, {1e-4, 1e-4, span * 1e-5}, phi0, pts);  // polish

    JunctionParams out;
    out.delta = std::exp(th[0]);
    out.v_c = std::exp(th[1]);
    out.phi0 = phi0;
    out.v0 = th[2];
    return out;
}

double rate_from_trace(const std::vector<double>& resistance, double dt,
                       double threshold) {
    if (resistance.size() < 2 || !(dt > 0.0)) return 0.0;
    std::size_t crossings = 0;
    bool above = resistance.front() > threshold;
    for (double r : resistance) {
        bool now = r > threshold;
        if (now != above) { ++crossings; above = now; }
    }
    double duration = static_cast<double>(resistance.size()) * dt;
    return static_cast<double>(crossings / 2) / duration;
}

}  // namespace smtjpop
