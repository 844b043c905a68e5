#include "smtjpop/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace smtjpop {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> input_rates(Population& pop, double stimulus,
                                const LearnConfig& cfg, RngStream rng) {
    if (cfg.analytic) return analytic_rates(pop, stimulus);
    return simulate_window(pop, stimulus, cfg.window_steps, cfg.dt, rng).rates();
}

double err_pct(double y, double target, double range) {
    return 100.0 * std::abs(y - target) / range;
}

}  // namespace

std::vector<double> forward(const std::vector<double>& rates_in,
                            const WeightMatrix& w) {
    if (rates_in.size() != w.n_in)
        throw ConfigError("forward: input rate vector does not match weights");
    std::vector<double> out(w.n_out, 0.0);
    for (std::size_t i = 0; i < w.n_in; ++i) {
        double r = rates_in[i];
        if (r == 0.0) continue;
        const double* row = &w.w[i * w.n_out];
        for (std::size_t j = 0; j < w.n_out; ++j) out[j] += row[j] * r;
    }
    return out;
}

WeightMatrix init_weights(std::size_t n_in, std::size_t n_out, double f0_in,
                          double f0_out, RngStream rng) {
    WeightMatrix w;
    w.n_in = n_in;
    w.n_out = n_out;
    w.w.resize(n_in * n_out);
    double hi = 2.0 * f0_out / (f0_in * static_cast<double>(n_in));
    RngStream ws = rng.at(rng_tag::kWeightInit);
    for (double& x : w.w) x = ws.uniform(0.0, hi);
    return w;
}

DriveResult drive_output(Population& pop_out,
                         const std::vector<double>& target_rates, long steps,
                         double dt, bool analytic, double rate_floor_frac,
                         RngStream rng) {
    if (target_rates.size() != pop_out.size())
        throw ConfigError("drive: target rate vector does not match population");
    DriveResult res;
    std::vector<double> v_eff(pop_out.size(), 0.0);
    std::vector<double> clamped(pop_out.size(), 0.0);
    for (std::size_t j = 0; j < pop_out.size(); ++j) {
        if (!pop_out.alive(j)) continue;
        double r0 = natural_rate(pop_out.params[j]);
        double t = target_rates[j];
        double lo = rate_floor_frac * r0;
        if (t < lo || t > r0) ++res.clamp_events;
        t = std::clamp(t, lo, r0);
        clamped[j] = t;
        v_eff[j] = invert_rate(pop_out.params[j], t).v_eff;
    }
    if (analytic) {
        res.rates = clamped;
        res.y = decode(pop_out, res.rates);
        return res;
    }
    // Each output junction is driven individually: bias v0_j plus the drive
    // offset gives it an effective operating point at v_eff over its own
    // curve, so simulate with a per-junction stimulus of v0_j + v_eff_j.
    RateWindow win;
    win.steps = steps;
    win.dt = dt;
    win.duration = static_cast<double>(steps) * dt;
    win.counts.assign(pop_out.size(), 0.0);
    for (std::size_t j = 0; j < pop_out.size(); ++j) {
        if (!pop_out.alive(j)) continue;
        RngStream js = rng.at(j);
        long transitions = advance_telegraph(pop_out.states[j],
                                             pop_out.params[j], v_eff[j], steps,
                                             dt, js);
        win.counts[j] = 0.5 * static_cast<double>(transitions);
    }
    res.rates = win.rates();
    res.y = decode(pop_out, res.rates);
    return res;
}

std::vector<Direction> trial_direction(double y, double target,
                                       double catch_halfwidth_volts,
                                       const Population& pop_out) {
    std::vector<Direction> dir(pop_out.size(), Direction::hold);
    if (std::abs(y - target) <= catch_halfwidth_volts) return dir;
    for (std::size_t j = 0; j < pop_out.size(); ++j) {
        double v0 = pop_out.bias(j);
        if (v0 == y) continue;
        bool beyond = (y > target) ? (v0 > y) : (v0 < y);
        dir[j] = beyond ? Direction::decrease : Direction::increase;
    }
    return dir;
}

void update_weights(WeightMatrix& w, const std::vector<double>& rates_in,
                    const std::vector<Direction>& dir, double alpha,
                    double f0_norm) {
    if (rates_in.size() != w.n_in || dir.size() != w.n_out)
        throw ConfigError("update: dimension mismatch");
    double inv = 1.0 / (1.0 + alpha);
    for (std::size_t i = 0; i < w.n_in; ++i) {
        double nudge = alpha * rates_in[i] / f0_norm;
        double* row = &w.w[i * w.n_out];
        for (std::size_t j = 0; j < w.n_out; ++j) {
            switch (dir[j]) {
                case Direction::increase: row[j] = (row[j] + nudge) * inv; break;
                case Direction::decrease: row[j] = (row[j] - nudge) * inv; break;
                case Direction::hold: break;
            }
        }
    }
}

Transform transform_library(const std::string& name,
                            const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    Transform t;
    t.name = name;
    if (name == "identity") {
        t.f = [](double z) { return z; };
        t.in_min = -0.15; t.in_max = 0.15;
        t.out_min = -0.15; t.out_max = 0.15;
    } else if (name == "double") {
        t.f = [](double z) { return 2.0 * z; };
        t.in_min = -0.15; t.in_max = 0.15;
        t.out_min = -0.3; t.out_max = 0.3;
    } else if (name == "square") {
        t.f = [](double z) { return z * z / 0.15; };
        t.in_min = -0.15; t.in_max = 0.15;
        t.out_min = 0.0; t.out_max = 0.15;
    } else if (name == "sine") {
        // Amplitude-normalized so the target stays inside the output range.
        double amp = get("amplitude_v", 0.15);
        t.f = [amp](double z) { return amp * std::sin(z * kPi / 0.15); };
        t.in_min = -0.15; t.in_max = 0.15;
        t.out_min = -amp; t.out_max = amp;
    } else if (name == "inverse") {
        double k = get("k", 0.045);
        double z0 = get("z0_v", 0.3);
        t.f = [k, z0](double z) { return k / (z + z0); };
        t.in_min = -0.15; t.in_max = 0.15;
        t.out_min = k / (t.in_max + z0);
        t.out_max = k / (t.in_min + z0);
    } else if (name == "sine_sq") {
        // Composition target for the two-stage series: square after sine.
        double amp = get("amplitude_v", 0.15);
        t.f = [amp](double z) {
            double s = amp * std::sin(z * kPi / 0.15);
            return s * s / 0.15;
        };
        t.in_min = -0.15; t.in_max = 0.15;
        t.out_min = 0.0; t.out_max = amp * amp / 0.15;
    } else {
        throw ConfigError("unknown transform: " + name);
    }
    return t;
}

EvalPoint evaluate(const Transform& task, const LearnConfig& cfg,
                   Population& pop_in, Population& pop_out,
                   const WeightMatrix& w, long step, RngStream rng) {
    double range = task.out_max - task.out_min;
    std::vector<double> errs;
    errs.reserve(static_cast<std::size_t>(cfg.eval_trials));
    for (int e = 0; e < cfg.eval_trials; ++e) {
        RngStream es = rng.at(static_cast<std::uint64_t>(e));
        double z = es.at(0).uniform(task.in_min, task.in_max);
        try {
            auto r_in = input_rates(pop_in, z, cfg, es.at(1));
            auto targets = forward(r_in, w);
            auto drive = drive_output(pop_out, targets, cfg.window_steps,
                                      cfg.dt, cfg.analytic,
                                      cfg.rate_floor_frac, es.at(2));
            errs.push_back(err_pct(drive.y, task.f(z), range));
        } catch (const SimulationError&) {
            // a short window can decode nothing on one trial; skip it
        }
    }
    if (errs.empty()) throw SimulationError("population silent");
    double mean = std::accumulate(errs.begin(), errs.end(), 0.0) /
                  static_cast<double>(errs.size());
    double var = 0.0;
    for (double e : errs) var += (e - mean) * (e - mean);
    var /= static_cast<double>(errs.size());
    return {step, mean, std::sqrt(var)};
}

LearnResult run_learning(const Transform& task, const LearnConfig& cfg,
                         Population& pop_in, Population& pop_out,
                         WeightMatrix w, RngStream rng) {
    if (w.n_in != pop_in.size() || w.n_out != pop_out.size())
        throw ConfigError("learning: weight dims do not match populations");
    double range = task.out_max - task.out_min;
    double catch_v = cfg.catch_halfwidth * range;

    LearnResult res;
    res.curve.push_back(evaluate(task, cfg, pop_in, pop_out, w, 0,
                                 rng.at(rng_tag::kEval, 0)));
    for (long t = 1; t <= cfg.steps; ++t) {
        double z = rng.at(rng_tag::kStimulus, static_cast<std::uint64_t>(t))
                       .uniform(task.in_min, task.in_max);
        auto r_in = input_rates(pop_in, z, cfg,
                                rng.at(rng_tag::kTrialWindow,
                                       static_cast<std::uint64_t>(t), 0));
        auto targets = forward(r_in, w);
        DriveResult drive;
        try {
            drive = drive_output(pop_out, targets, cfg.window_steps, cfg.dt,
                                 cfg.analytic, cfg.rate_floor_frac,
                                 rng.at(rng_tag::kTrialWindow,
                                        static_cast<std::uint64_t>(t), 1));
        } catch (const SimulationError&) {
            continue;  // silent window (all junctions frozen); skip the trial
        }
        res.clamp_events += drive.clamp_events;
        auto dir = trial_direction(drive.y, task.f(z), catch_v, pop_out);
        update_weights(w, r_in, dir, cfg.alpha, cfg.f0_norm);

        if (t % cfg.eval_every == 0 || t == cfg.steps) {
            std::uint64_t chk = static_cast<std::uint64_t>(t);
            res.curve.push_back(evaluate(task, cfg, pop_in, pop_out, w, t,
                                         rng.at(rng_tag::kEval, chk)));
        }
    }
    res.w = std::move(w);
    return res;
}

std::vector<double> concat_inputs(
    const std::vector<std::vector<double>>& rate_vectors,
    std::vector<std::size_t>* offsets) {
    if (rate_vectors.empty())
        throw ConfigError("concat needs at least one population");
    std::vector<double> out;
    if (offsets) offsets->clear();
    for (const auto& v : rate_vectors) {
        if (offsets) offsets->push_back(out.size());
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

LearnResult2D run_learning_polar(const LearnConfig& cfg, Population& pop_r,
                                 Population& pop_phi, Population& pop_x,
                                 Population& pop_y, RngStream rng) {
    std::size_t n_in = pop_r.size() + pop_phi.size();
    double f0 = cfg.f0_norm;
    WeightMatrix wx = init_weights(n_in, pop_x.size(), f0, f0, rng.at(100));
    WeightMatrix wy = init_weights(n_in, pop_y.size(), f0, f0, rng.at(101));

    auto target_x = [](double r, double phi) { return r * std::cos(phi * kPi / 0.6); };
    auto target_y = [](double r, double phi) { return r * std::sin(phi * kPi / 0.6); };
    const double range = 0.3;  // both output axes span [0, 0.3]
    double catch_v = cfg.catch_halfwidth * range;

    LearnResult2D res;
    auto eval2d = [&](long step, RngStream es_root) {
        std::vector<double> errs;
        for (int e = 0; e < cfg.eval_trials; ++e) {
            RngStream es = es_root.at(static_cast<std::uint64_t>(e));
            double r = es.at(0).uniform(0.0, 0.3);
            double phi = es.at(1).uniform(0.0, 0.3);
            auto rates = concat_inputs({input_rates(pop_r, r, cfg, es.at(2)),
                                        input_rates(pop_phi, phi, cfg, es.at(3))});
            auto dx = drive_output(pop_x, forward(rates, wx), cfg.window_steps,
                                   cfg.dt, cfg.analytic, cfg.rate_floor_frac,
                                   es.at(4));
            auto dy = drive_output(pop_y, forward(rates, wy), cfg.window_steps,
                                   cfg.dt, cfg.analytic, cfg.rate_floor_frac,
                                   es.at(5));
            double ex = dx.y - target_x(r, phi);
            double ey = dy.y - target_y(r, phi);
            errs.push_back(100.0 * std::hypot(ex, ey) / range);
        }
        double mean = std::accumulate(errs.begin(), errs.end(), 0.0) /
                      static_cast<double>(errs.size());
        double var = 0.0;
        for (double e : errs) var += (e - mean) * (e - mean);
        res.curve.push_back(
            {step, mean, std::sqrt(var / static_cast<double>(errs.size()))});
    };

    eval2d(0, rng.at(rng_tag::kEval, 0));
    for (long t = 1; t <= cfg.steps; ++t) {
        std::uint64_t ut = static_cast<std::uint64_t>(t);
        double r = rng.at(rng_tag::kStimulus, ut, 0).uniform(0.0, 0.3);
        double phi = rng.at(rng_tag::kStimulus, ut, 1).uniform(0.0, 0.3);
        auto rates = concat_inputs(
            {input_rates(pop_r, r, cfg, rng.at(rng_tag::kTrialWindow, ut, 0)),
             input_rates(pop_phi, phi, cfg,
                         rng.at(rng_tag::kTrialWindow, ut, 1))});
        DriveResult dx, dy;
        try {
            dx = drive_output(pop_x, forward(rates, wx), cfg.window_steps,
                              cfg.dt, cfg.analytic, cfg.rate_floor_frac,
                              rng.at(rng_tag::kTrialWindow, ut, 2));
            dy = drive_output(pop_y, forward(rates, wy), cfg.window_steps,
                              cfg.dt, cfg.analytic, cfg.rate_floor_frac,
                              rng.at(rng_tag::kTrialWindow, ut, 3));
        } catch (const SimulationError&) {
            continue;
        }
        res.clamp_events += dx.clamp_events + dy.clamp_events;
        update_weights(wx, rates,
                       trial_direction(dx.y, target_x(r, phi), catch_v, pop_x),
                       cfg.alpha, cfg.f0_norm);
        update_weights(wy, rates,
                       trial_direction(dy.y, target_y(r, phi), catch_v, pop_y),
                       cfg.alpha, cfg.f0_norm);
        if (t % cfg.eval_every == 0 || t == cfg.steps)
            eval2d(t, rng.at(rng_tag::kEval, ut));
    }
    res.w_x = std::move(wx);
    res.w_y = std::move(wy);
    return res;
}

double chain_forward(Population& pop_in, const std::vector<ChainStage>& stages,
                     double stimulus, const LearnConfig& cfg, RngStream rng,
                     long* clamp_events) {
    if (stages.empty()) throw ConfigError("chain needs at least one stage");
    std::size_t prev = pop_in.size();
    for (std::size_t s = 0; s < stages.size(); ++s) {
        if (stages[s].w->n_in != prev || stages[s].w->n_out != stages[s].pop->size())
            throw ConfigError("chain dimension mismatch at stage " +
                              std::to_string(s));
        prev = stages[s].pop->size();
    }
    auto rates = input_rates(pop_in, stimulus, cfg, rng.at(0));
    double y = 0.0;
    for (std::size_t s = 0; s < stages.size(); ++s) {
        auto drive = drive_output(*stages[s].pop, forward(rates, *stages[s].w),
                                  cfg.window_steps, cfg.dt, cfg.analytic,
                                  cfg.rate_floor_frac, rng.at(s + 1));
        if (clamp_events) *clamp_events += drive.clamp_events;
        rates = drive.rates;
        y = drive.y;
    }
    return y;
}

LearnResult relearn_after_fault(const Transform& task, const LearnConfig& cfg,
                                Population& pop_in, Population& pop_out,
                                WeightMatrix w, double fraction,
                                RngStream rng) {
    kill_neurons(pop_in, fraction, rng.at(rng_tag::kFault, 0));
    kill_neurons(pop_out, fraction, rng.at(rng_tag::kFault, 1));
    return run_learning(task, cfg, pop_in, pop_out, std::move(w),
                        rng.at(rng_tag::kFault, 2));
}

}  // namespace smtjpop
