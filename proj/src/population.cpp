#include "smtjpop/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace smtjpop {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(n - 1);
    return v;
}

}  // namespace

Population build_population(std::size_t n, double v_min, double v_max,
                            const VariabilitySpec& variability, RngStream rng) {
    if (n < 2) throw ConfigError("population needs at least 2 junctions");
    if (!(v_min < v_max)) throw ConfigError("population range must be non-empty");
    if (variability.delta_span < 0.0 || variability.v_c_std < 0.0)
        throw ConfigError("variability spans must be non-negative");

    Population pop;
    pop.v_min = v_min;
    pop.v_max = v_max;
    auto biases = linspace(v_min, v_max, n);
    pop.params.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream js = rng.at(rng_tag::kPopulationBuild, i);
        JunctionParams p;
        p.delta = variability.delta_center +
                  variability.delta_span * (js.uniform() - 0.5);
        p.v_c = variability.v_c_mean;
        if (variability.v_c_std > 0.0) {
            do {
                p.v_c = js.gaussian(variability.v_c_mean, variability.v_c_std);
            } while (p.v_c <= 0.0);
        }
        p.phi0 = variability.phi0;
        p.v0 = biases[i];
        validate(p);
        pop.params.push_back(p);
    }
    pop.states.assign(n, JunctionState{});
    pop.dead.assign(n, 0);
    return pop;
}

Population make_population(std::vector<JunctionParams> params, double v_min,
                           double v_max, bool keep_biases) {
    if (params.empty()) throw ConfigError("population needs at least 1 junction");
    if (!(v_min < v_max)) throw ConfigError("population range must be non-empty");
    Population pop;
    pop.v_min = v_min;
    pop.v_max = v_max;
    if (!keep_biases) {
        if (params.size() == 1) {
            params[0].v0 = 0.5 * (v_min + v_max);
        } else {
            auto biases = linspace(v_min, v_max, params.size());
            for (std::size_t i = 0; i < params.size(); ++i)
                params[i].v0 = biases[i];
        }
    }
    for (const auto& p : params) validate(p);
    pop.params = std::move(params);
    pop.states.assign(pop.params.size(), JunctionState{});
    pop.dead.assign(pop.params.size(), 0);
    return pop;
}

RateWindow simulate_window(Population& pop, double stimulus, long steps,
                           double dt, RngStream rng) {
    if (steps < 1) throw ConfigError("window needs at least 1 step");
    RateWindow win;
    win.steps = steps;
    win.dt = dt;
    win.duration = static_cast<double>(steps) * dt;
    win.counts.assign(pop.size(), 0.0);

    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!pop.alive(i)) continue;
        RngStream js = rng.at(i);
        long transitions = advance_telegraph(pop.states[i], pop.params[i],
                                             stimulus - pop.params[i].v0, steps,
                                             dt, js);
        win.counts[i] = 0.5 * static_cast<double>(transitions);
    }
    return win;
}

namespace {

// Event-driven comparator sampling of one junction: draw exponential dwells
// and walk the clock edges through them, so the exact switch count and the
// comparator's sampled view come from one and the same trajectory.
void sample_one_junction(JunctionState& st, const EscapeRates& er,
                         double clock_dt, std::uint64_t cycles, RngStream js,
                         std::uint64_t& sampled, std::uint64_t& exact) {
    Orientation orient = st.orientation;
    Orientation last_seen = orient;
    double horizon = static_cast<double>(cycles) * clock_dt;
    auto draw_dwell = [&](Orientation o) {
        double phi = (o == Orientation::P) ? er.from_p : er.from_ap;
        if (phi <= 0.0) return horizon * 2.0 + 1.0;  // effectively frozen
        return -std::log1p(-js.uniform()) / phi;
    };
    double t_switch = draw_dwell(orient);
    for (std::uint64_t k = 1; k <= cycles; ++k) {
        double t_edge = static_cast<double>(k) * clock_dt;
        while (t_switch <= t_edge) {
            orient = (orient == Orientation::P) ? Orientation::AP
                                                : Orientation::P;
            ++exact;
            t_switch += draw_dwell(orient);
        }
        // the first edge only latches the comparator reference; counting
        // starts between consecutive latched samples (a single sample can
        // never register a transition)
        if (k > 1 && orient != last_seen) ++sampled;
        last_seen = orient;
    }
    st.orientation = orient;
    st.elapsed = 0.0;
}

}  // namespace

SampledCounts sampled_event_count(Population& pop, double stimulus,
                                  double clock_dt, std::uint64_t cycles,
                                  RngStream rng) {
    if (!(clock_dt > 0.0)) throw ConfigError("clock period must be positive");
    SampledCounts out;
    out.sampled.assign(pop.size(), 0);
    out.exact.assign(pop.size(), 0);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!pop.alive(i)) continue;
        EscapeRates er = escape_rates(pop.params[i], stimulus - pop.bias(i));
        sample_one_junction(pop.states[i], er, clock_dt, cycles, rng.at(i),
                            out.sampled[i], out.exact[i]);
    }
    return out;
}

SampledCounts sampled_event_count_driven(Population& pop,
                                         const std::vector<double>& v_eff,
                                         double clock_dt, std::uint64_t cycles,
                                         RngStream rng) {
    if (!(clock_dt > 0.0)) throw ConfigError("clock period must be positive");
    if (v_eff.size() != pop.size())
        throw ConfigError("drive vector size does not match population");
    SampledCounts out;
    out.sampled.assign(pop.size(), 0);
    out.exact.assign(pop.size(), 0);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!pop.alive(i)) continue;
        EscapeRates er = escape_rates(pop.params[i], v_eff[i]);
        sample_one_junction(pop.states[i], er, clock_dt, cycles, rng.at(i),
                            out.sampled[i], out.exact[i]);
    }
    return out;
}

double decode(const Population& pop, const std::vector<double>& rates) {
    if (rates.size() != pop.size())
        throw ConfigError("decode: rate vector size does not match population");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!pop.alive(i)) continue;
        num += pop.bias(i) * rates[i];
        den += rates[i];
    }
    if (den <= 0.0) throw SimulationError("population silent");
    return num / den;
}

std::vector<double> analytic_rates(const Population& pop, double stimulus) {
    std::vector<double> r(pop.size(), 0.0);
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (pop.alive(i))
            r[i] = analytic_rate(pop.params[i], stimulus - pop.bias(i));
    return r;
}

void kill_neurons(Population& pop, double fraction, RngStream rng) {
    if (fraction < 0.0 || fraction > 1.0)
        throw ConfigError("kill fraction must be in [0, 1]");
    std::size_t n = pop.size();
    std::size_t k = static_cast<std::size_t>(std::llround(fraction * n));
    if (k == 0) return;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    RngStream fs = rng.at(rng_tag::kFault);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(
                                fs.uniform() * static_cast<double>(n - i));
        if (j >= n) j = n - 1;
        std::swap(idx[i], idx[j]);
        pop.dead[idx[i]] = 1;
    }
}

}  // namespace smtjpop
