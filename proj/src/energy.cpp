#include "smtjpop/energy.hpp"

#include <cmath>

namespace smtjpop {

double junction_resistance(const EnergyConfig& cfg) {
    if (cfg.resistance_override > 0.0) return cfg.resistance_override;
    if (!(cfg.ra_product > 0.0) || !(cfg.diameter > 0.0))
        throw ConfigError("energy config: RA product and diameter must be > 0");
    double area_m2 = 3.14159265358979323846 * cfg.diameter * cfg.diameter / 4.0;
    return cfg.ra_product * 1e-12 / area_m2;  // ohm*um^2 -> ohm*m^2
}

double shift_power(const Population& pop, double resistance) {
    if (!(resistance > 0.0)) throw ConfigError("resistance must be > 0");
    double p = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        double v = pop.bias(i);
        p += v * v / resistance;
    }
    return p;
}

double stimulus_power(std::size_t n, double v_stim_max, double resistance) {
    if (!(resistance > 0.0)) throw ConfigError("resistance must be > 0");
    return static_cast<double>(n) * v_stim_max * v_stim_max / resistance;
}

double stimulus_power_at(std::size_t n, double v_stim, double resistance) {
    if (!(resistance > 0.0)) throw ConfigError("resistance must be > 0");
    return static_cast<double>(n) * v_stim * v_stim / resistance;
}

PrecisionSweep precision_energy_sweep(const Transform& task,
                                      const LearnConfig& cfg,
                                      Population& pop_in, Population& pop_out,
                                      const WeightMatrix& w,
                                      const std::vector<long>& window_steps,
                                      const EnergyConfig& ecfg, RngStream rng) {
    double r_ohm = junction_resistance(ecfg);
    double power = shift_power(pop_in, r_ohm) +
                   stimulus_power(pop_in.size(), ecfg.v_stim_max, r_ohm);
    PrecisionSweep sweep;
    for (std::size_t k = 0; k < window_steps.size(); ++k) {
        long steps = window_steps[k];
        if (steps < 1) {
            sweep.excluded.push_back(steps);  // no observation, nothing decodes
            continue;
        }
        LearnConfig eval_cfg = cfg;
        eval_cfg.window_steps = steps;
        try {
            EvalPoint pt = evaluate(task, eval_cfg, pop_in, pop_out, w,
                                    static_cast<long>(k),
                                    rng.at(rng_tag::kSweep, k));
            double duration = static_cast<double>(steps) * cfg.dt;
            sweep.points.push_back({steps, duration, power * duration,
                                    pt.mean_err_pct, pt.std_err_pct});
        } catch (const SimulationError&) {
            sweep.excluded.push_back(steps);  // window too short to see a spike
        }
    }
    return sweep;
}

}  // namespace smtjpop
