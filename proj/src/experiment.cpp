#include "smtjpop/experiment.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "smtjpop/basis.hpp"
#include "smtjpop/io.hpp"

namespace smtjpop {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = 0.5 * (lo + hi);
        return v;
    }
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(n - 1);
    return v;
}

struct Writer {
    std::string dir;
    std::vector<std::pair<std::string, std::uint64_t>> files;

    void emit(const std::string& name, const std::string& content) {
        write_file_atomic(dir + "/" + name, content);
        files.emplace_back(name, fnv1a64(content));
    }
};

std::string weights_text(const WeightMatrix& w) {
    std::ostringstream out;
    out << "smtjpop-weights v1\n" << w.n_in << ' ' << w.n_out << '\n';
    for (std::size_t i = 0; i < w.n_in; ++i) {
        for (std::size_t j = 0; j < w.n_out; ++j)
            out << (j ? " " : "") << format_double(w.at(i, j));
        out << '\n';
    }
    return out.str();
}

std::string curve_csv(const std::vector<EvalPoint>& curve) {
    Table t({"step", "mean_error_pct", "std_error_pct"});
    for (const auto& p : curve)
        t.add_row({static_cast<double>(p.step), p.mean_err_pct, p.std_err_pct});
    return t.render();
}

double nominal_rate(const PopulationConfig& pc) {
    if (!pc.explicit_params.empty()) {
        double s = 0.0;
        for (const auto& p : pc.explicit_params) s += natural_rate(p);
        return s / static_cast<double>(pc.explicit_params.size());
    }
    JunctionParams center{pc.variability.delta_center, pc.variability.v_c_mean,
                          pc.variability.phi0, 0.0, 0.0};
    return natural_rate(center);
}

void require_range(const PopulationConfig& pc, double lo, double hi,
                   const char* which) {
    if (std::abs(pc.v_min - lo) > 1e-9 || std::abs(pc.v_max - hi) > 1e-9)
        throw ConfigError(std::string(which) + " population range must match "
                          "the task range [" + format_double(lo) + ", " +
                          format_double(hi) + "]");
}

LearnConfig effective_learn(const ExperimentConfig& cfg) {
    LearnConfig lc = cfg.learn;
    lc.analytic = (cfg.mode == RateMode::analytic);
    return lc;
}

// ---- rates ----------------------------------------------------------------

void run_rates(const ExperimentConfig& cfg, Writer& wr) {
    RngStream rng(cfg.seed);
    Population pop = cfg.pop_in->build(rng.at(1));
    const RatesBlock& rb = *cfg.rates;
    auto grid = linspace(rb.bias_min, rb.bias_max,
                         static_cast<std::size_t>(rb.points));

    Table t({"junction", "bias", "analytic_hz", "analytic_norm", "mc_hz",
             "mc_sigma_hz"});
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<double> mc(pop.size(), 0.0), sigma(pop.size(), 0.0);
        if (cfg.mode == RateMode::monte_carlo) {
            RateWindow win = simulate_window(pop, grid[k], rb.window_steps,
                                             rb.dt, rng.at(2, k));
            for (std::size_t i = 0; i < pop.size(); ++i) {
                mc[i] = win.counts[i] / win.duration;
                // transitions ~ Poisson, cycles = transitions/2
                sigma[i] = std::sqrt(2.0 * win.counts[i]) / 2.0 / win.duration;
            }
        }
        for (std::size_t i = 0; i < pop.size(); ++i) {
            double a = analytic_rate(pop.params[i], grid[k] - pop.bias(i));
            double r0 = natural_rate(pop.params[i]);
            if (cfg.mode == RateMode::analytic) mc[i] = a;
            t.add_row({static_cast<double>(i), grid[k], a, a / r0, mc[i],
                       sigma[i]});
        }
    }
    wr.emit("rates.csv", t.render());
}

// ---- fit -------------------------------------------------------------------

void run_fit(const ExperimentConfig& cfg, Writer& wr) {
    auto samples = read_two_column(cfg.fit->table_path);
    JunctionParams p = fit_params(samples);
    double ss = 0.0;
    long n = 0;
    for (const auto& [x, r] : samples) {
        if (r <= 0.0) continue;
        double e = std::log(analytic_rate(p, x - p.v0)) - std::log(r);
        ss += e * e;
        ++n;
    }
    Table t({"delta", "critical_bias", "bias_center", "phi0_hz",
             "rms_log_residual"});
    t.add_row({p.delta, p.v_c, p.v0, p.phi0,
               n > 0 ? std::sqrt(ss / static_cast<double>(n)) : 0.0});
    wr.emit("fit.csv", t.render());
}

// ---- basis ------------------------------------------------------------------

void run_basis(const ExperimentConfig& cfg, Writer& wr) {
    RngStream rng(cfg.seed);
    Population pop = cfg.pop_in->build(rng.at(1));
    const BasisBlock& bb = *cfg.basis;
    auto stimuli = linspace(bb.stim_min, bb.stim_max,
                            static_cast<std::size_t>(bb.points));
    BasisMatrix r = measure_basis(pop, stimuli, bb.window_steps, bb.dt,
                                  cfg.mode, rng.at(2));

    {
        std::vector<std::string> cols{"stimulus"};
        for (std::size_t i = 0; i < pop.size(); ++i)
            cols.push_back("r" + std::to_string(i) + "_hz");
        Table t(cols);
        for (std::size_t k = 0; k < r.rows; ++k) {
            std::vector<double> row{stimuli[k]};
            for (std::size_t i = 0; i < r.cols; ++i) row.push_back(r.at(k, i));
            t.add_row(row);
        }
        wr.emit("basis.csv", t.render());
    }

    if (bb.target == "barometric") {
        std::vector<double> h(stimuli.size());
        for (std::size_t k = 0; k < stimuli.size(); ++k)
            h[k] = barometric_target(stimuli[k]);
        WeightSolution sol = solve_weights(r, h);
        WeightMatrix wm;
        wm.n_in = sol.weights.size();
        wm.n_out = 1;
        wm.w = sol.weights;
        wr.emit("weights.txt", weights_text(wm));
        Table t({"stimulus", "target", "reconstruction", "residual"});
        for (std::size_t k = 0; k < stimuli.size(); ++k) {
            std::vector<double> rates(r.cols);
            for (std::size_t i = 0; i < r.cols; ++i) rates[i] = r.at(k, i);
            double y = reconstruct(sol.weights, rates);
            t.add_row({stimuli[k], h[k], y, y - h[k]});
        }
        wr.emit("recon.csv", t.render());
        Table s({"residual_rel"});
        s.add_row({sol.residual_rel});
        wr.emit("solution.csv", s.render());
        return;
    }

    Trajectory traj = load_trajectory(bb.trajectory_path);
    double t0 = traj.x.inputs.front();
    double t1 = traj.x.inputs.back();
    auto ts = linspace(t0, t1, static_cast<std::size_t>(bb.points));
    std::vector<double> hx(ts.size()), hy(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        hx[k] = traj.x(ts[k]);
        hy[k] = traj.y(ts[k]);
    }
    WeightSolution sx = solve_weights(r, hx);
    WeightSolution sy = solve_weights(r, hy);
    WeightMatrix wx, wy;
    wx.n_in = wy.n_in = sx.weights.size();
    wx.n_out = wy.n_out = 1;
    wx.w = sx.weights;
    wy.w = sy.weights;
    wr.emit("weights_x.txt", weights_text(wx));
    wr.emit("weights_y.txt", weights_text(wy));
    Table t({"t", "x_target", "x_recon", "y_target", "y_recon"});
    for (std::size_t k = 0; k < ts.size(); ++k) {
        std::vector<double> rates(r.cols);
        for (std::size_t i = 0; i < r.cols; ++i) rates[i] = r.at(k, i);
        t.add_row({ts[k], hx[k], reconstruct(sx.weights, rates), hy[k],
                   reconstruct(sy.weights, rates)});
    }
    wr.emit("recon.csv", t.render());
    Table s({"residual_rel_x", "residual_rel_y"});
    s.add_row({sx.residual_rel, sy.residual_rel});
    wr.emit("solution.csv", s.render());
}

// ---- learn -------------------------------------------------------------------

void run_learn(const ExperimentConfig& cfg, Writer& wr) {
    RngStream rng(cfg.seed);
    LearnConfig lc = effective_learn(cfg);
    const std::string& name = cfg.task->transform;

    if (name == "polar") {
        require_range(*cfg.pop_in, 0.0, 0.3, "input");
        require_range(*cfg.pop_out, 0.0, 0.3, "output");
        Population pop_r = cfg.pop_in->build(rng.at(1));
        Population pop_phi = cfg.pop_in->build(rng.at(4));
        Population pop_x = cfg.pop_out->build(rng.at(2));
        Population pop_y = cfg.pop_out->build(rng.at(5));
        LearnResult2D res =
            run_learning_polar(lc, pop_r, pop_phi, pop_x, pop_y, rng.at(6));
        wr.emit("curve.csv", curve_csv(res.curve));
        wr.emit("weights_x.txt", weights_text(res.w_x));
        wr.emit("weights_y.txt", weights_text(res.w_y));
        return;
    }

    if (name == "series_sine_sq") {
        Transform stage1 = transform_library("sine", cfg.task->params);
        Transform stage2 = transform_library("square");
        Transform composed = transform_library("sine_sq", cfg.task->params);
        require_range(*cfg.pop_in, stage1.in_min, stage1.in_max, "input");
        require_range(*cfg.pop_out, stage2.out_min, stage2.out_max, "output");
        Population pop_in = cfg.pop_in->build(rng.at(1));
        PopulationConfig mid_cfg = *cfg.pop_in;
        mid_cfg.v_min = stage1.out_min;
        mid_cfg.v_max = stage1.out_max;
        Population pop_mid = mid_cfg.build(rng.at(4));
        Population pop_out = cfg.pop_out->build(rng.at(2));

        double f0_in = nominal_rate(*cfg.pop_in);
        double f0_out = nominal_rate(*cfg.pop_out);
        LearnResult r1 = run_learning(
            stage1, lc, pop_in, pop_mid,
            init_weights(pop_in.size(), pop_mid.size(), f0_in, f0_in, rng.at(3)),
            rng.at(5));
        LearnResult r2 = run_learning(
            stage2, lc, pop_mid, pop_out,
            init_weights(pop_mid.size(), pop_out.size(), f0_in, f0_out,
                         rng.at(7)),
            rng.at(6));

        double range = composed.out_max - composed.out_min;
        std::vector<double> errs;
        std::vector<ChainStage> stages{{&r1.w, &pop_mid}, {&r2.w, &pop_out}};
        RngStream ev = rng.at(8);
        for (int e = 0; e < lc.eval_trials; ++e) {
            RngStream es = ev.at(static_cast<std::uint64_t>(e));
            double z = es.at(0).uniform(composed.in_min, composed.in_max);
            try {
                double y = chain_forward(pop_in, stages, z, lc, es.at(1));
                errs.push_back(100.0 * std::abs(y - composed.f(z)) / range);
            } catch (const SimulationError&) {
                // an all-silent window decodes nothing on one trial; skip it
            }
        }
        if (errs.empty()) throw SimulationError("population silent");
        double mean = std::accumulate(errs.begin(), errs.end(), 0.0) /
                      static_cast<double>(errs.size());
        double var = 0.0;
        for (double e : errs) var += (e - mean) * (e - mean);
        wr.emit("stage1_curve.csv", curve_csv(r1.curve));
        wr.emit("stage2_curve.csv", curve_csv(r2.curve));
        Table t({"composed_mean_error_pct", "composed_std_error_pct"});
        t.add_row({mean, std::sqrt(var / static_cast<double>(errs.size()))});
        wr.emit("composed.csv", t.render());
        wr.emit("weights_stage1.txt", weights_text(r1.w));
        wr.emit("weights_stage2.txt", weights_text(r2.w));
        return;
    }

    Transform task = transform_library(name, cfg.task->params);
    require_range(*cfg.pop_in, task.in_min, task.in_max, "input");
    require_range(*cfg.pop_out, task.out_min, task.out_max, "output");
    Population pop_in = cfg.pop_in->build(rng.at(1));
    Population pop_out = cfg.pop_out->build(rng.at(2));
    WeightMatrix w0 =
        init_weights(pop_in.size(), pop_out.size(), nominal_rate(*cfg.pop_in),
                     nominal_rate(*cfg.pop_out), rng.at(3));
    LearnResult res =
        run_learning(task, lc, pop_in, pop_out, std::move(w0), rng.at(6));
    wr.emit("curve.csv", curve_csv(res.curve));
    wr.emit("weights.txt", weights_text(res.w));
}

// ---- sweep -------------------------------------------------------------------

struct TrainedSystem {
    Population pop_in, pop_out;
    LearnResult res;
};

TrainedSystem train_once(const ExperimentConfig& cfg, const Transform& task,
                         const LearnConfig& lc, const PopulationConfig& in_cfg,
                         const PopulationConfig& out_cfg, RngStream rng) {
    TrainedSystem s{in_cfg.build(rng.at(1)), out_cfg.build(rng.at(2)), {}};
    WeightMatrix w0 = init_weights(s.pop_in.size(), s.pop_out.size(),
                                   nominal_rate(in_cfg), nominal_rate(out_cfg),
                                   rng.at(3));
    s.res = run_learning(task, lc, s.pop_in, s.pop_out, std::move(w0), rng.at(6));
    (void)cfg;
    return s;
}

void run_sweep(const ExperimentConfig& cfg, Writer& wr) {
    RngStream rng(cfg.seed);
    LearnConfig lc = effective_learn(cfg);
    Transform task = transform_library(cfg.task->transform, cfg.task->params);
    const SweepBlock& sb = *cfg.sweep;

    if (sb.kind == "vc_variability" || sb.kind == "delta_variability") {
        Table t({"value", "final_mean_error_pct", "final_std_error_pct"});
        for (std::size_t k = 0; k < sb.values.size(); ++k) {
            PopulationConfig in_cfg = *cfg.pop_in;
            PopulationConfig out_cfg = *cfg.pop_out;
            if (sb.kind == "vc_variability") {
                double std_v = sb.values[k] * in_cfg.variability.v_c_mean;
                in_cfg.variability.v_c_std = std_v;
                out_cfg.variability.v_c_std =
                    sb.values[k] * out_cfg.variability.v_c_mean;
            } else {
                in_cfg.variability.delta_span =
                    2.0 * sb.values[k] * in_cfg.variability.delta_center;
                out_cfg.variability.delta_span =
                    2.0 * sb.values[k] * out_cfg.variability.delta_center;
            }
            TrainedSystem s = train_once(cfg, task, lc, in_cfg, out_cfg,
                                         rng.at(rng_tag::kSweep, k));
            const EvalPoint& last = s.res.curve.back();
            t.add_row({sb.values[k], last.mean_err_pct, last.std_err_pct});
        }
        wr.emit("sweep.csv", t.render());
        return;
    }

    if (sb.kind == "population_size") {
        Table t({"n_in", "final_mean_error_pct", "final_std_error_pct"});
        for (std::size_t k = 0; k < sb.values.size(); ++k) {
            PopulationConfig in_cfg = *cfg.pop_in;
            in_cfg.n = static_cast<std::size_t>(sb.values[k]);
            TrainedSystem s = train_once(cfg, task, lc, in_cfg, *cfg.pop_out,
                                         rng.at(rng_tag::kSweep, k));
            const EvalPoint& last = s.res.curve.back();
            t.add_row({sb.values[k], last.mean_err_pct, last.std_err_pct});
        }
        wr.emit("sweep.csv", t.render());
        return;
    }

    if (sb.kind == "energy_window") {
        TrainedSystem s = train_once(cfg, task, lc, *cfg.pop_in, *cfg.pop_out,
                                     rng.at(rng_tag::kSweep, 0));
        PrecisionSweep ps = precision_energy_sweep(
            task, lc, s.pop_in, s.pop_out, s.res.w, sb.window_steps_list,
            cfg.energy, rng.at(rng_tag::kSweep, 1));
        Table t({"window_steps", "window_s", "energy_j", "error_pct",
                 "error_std"});
        for (const auto& p : ps.points)
            t.add_row({static_cast<double>(p.window_steps), p.window_s,
                       p.energy_j, p.error_pct, p.error_std});
        wr.emit("sweep.csv", t.render());
        if (!ps.excluded.empty()) {
            Table ex({"excluded_window_steps"});
            for (long w : ps.excluded)
                ex.add_row({static_cast<double>(w)});
            wr.emit("excluded.csv", ex.render());
        }
        return;
    }

    // fault: train, kill, measure, relearn; plus a from-scratch baseline that
    // starts with the same fraction already dead.
    Table t({"fraction", "trained_error_pct", "post_kill_error_pct",
             "recovered_error_pct", "recovered_std_pct",
             "baseline_killed_error_pct", "baseline_killed_std_pct",
             "relearn_steps", "initial_steps"});
    Table curves({"fraction", "step", "mean_error_pct", "std_error_pct"});
    for (std::size_t k = 0; k < sb.values.size(); ++k) {
        double frac = sb.values[k];
        RngStream srng = rng.at(rng_tag::kSweep, k);
        TrainedSystem s = train_once(cfg, task, lc, *cfg.pop_in, *cfg.pop_out,
                                     srng.at(0));
        double trained = s.res.curve.back().mean_err_pct;

        LearnConfig relearn_cfg = lc;
        relearn_cfg.steps = sb.relearn_steps;
        LearnConfig probe = lc;
        probe.steps = 0;
        Population pin = s.pop_in, pout = s.pop_out;
        kill_neurons(pin, frac, srng.at(1));
        kill_neurons(pout, frac, srng.at(2));
        LearnResult post = run_learning(task, probe, pin, pout, s.res.w,
                                        srng.at(3));
        double post_kill = post.curve.front().mean_err_pct;
        LearnResult rec = run_learning(task, relearn_cfg, pin, pout, s.res.w,
                                       srng.at(4));
        for (const auto& p : rec.curve)
            curves.add_row({frac, static_cast<double>(p.step), p.mean_err_pct,
                            p.std_err_pct});

        // from-scratch run with the same fraction dead from step 0
        Population bin = cfg.pop_in->build(srng.at(5));
        Population bout = cfg.pop_out->build(srng.at(6));
        kill_neurons(bin, frac, srng.at(7));
        kill_neurons(bout, frac, srng.at(8));
        WeightMatrix w0 = init_weights(bin.size(), bout.size(),
                                       nominal_rate(*cfg.pop_in),
                                       nominal_rate(*cfg.pop_out), srng.at(9));
        LearnResult base =
            run_learning(task, lc, bin, bout, std::move(w0), srng.at(10));

        t.add_row({frac, trained, post_kill, rec.curve.back().mean_err_pct,
                   rec.curve.back().std_err_pct, base.curve.back().mean_err_pct,
                   base.curve.back().std_err_pct,
                   static_cast<double>(sb.relearn_steps),
                   static_cast<double>(lc.steps)});
    }
    wr.emit("sweep.csv", t.render());
    wr.emit("recovery_curves.csv", curves.render());
}

// ---- datapath ------------------------------------------------------------------

std::string report_json(const DatapathReport& r) {
    nlohmann::json j;
    auto tech = [](const TechEnergy& t) {
        nlohmann::json o;
        o["junction_j"] = t.junction_j;
        o["cmos_j"] = t.cmos_j;
        o["mram_j"] = t.mram_j;
        o["total_j"] = t.total();
        return o;
    };
    j["energy"]["acquire"] = tech(r.acquire);
    j["energy"]["compute"] = tech(r.compute);
    j["energy"]["learn"] = tech(r.learn);
    j["energy"]["per_op_learning_j"] = r.energy_per_op_learning_j;
    j["energy"]["per_op_inference_j"] = r.energy_per_op_inference_j;
    j["area"]["cmos_um2"] = r.area_cmos;
    j["area"]["mram_um2"] = r.area_mram;
    j["area"]["junctions_um2"] = r.area_junctions;
    j["area"]["total_um2"] = r.area_cmos + r.area_mram + r.area_junctions;
    j["counts"]["operations"] = r.operations;
    j["counts"]["skipped_trials"] = r.skipped_trials;
    j["counts"]["overflows"] = r.overflows;
    j["counts"]["mram_write_bits"] = r.write_bits;
    j["counts"]["mram_write_bits_naive"] = r.write_bits_naive;
    return j.dump(2) + "\n";
}

void run_datapath(const ExperimentConfig& cfg, Writer& wr) {
    RngStream rng(cfg.seed);
    const DatapathBlock& db = *cfg.datapath;
    Transform task = transform_library(cfg.task->transform, cfg.task->params);
    require_range(*cfg.pop_in, task.in_min, task.in_max, "input");
    require_range(*cfg.pop_out, task.out_min, task.out_max, "output");
    Population pop_in = cfg.pop_in->build(rng.at(1));
    Population pop_out = cfg.pop_out->build(rng.at(2));
    WeightMatrix w0 =
        init_weights(pop_in.size(), pop_out.size(), nominal_rate(*cfg.pop_in),
                     nominal_rate(*cfg.pop_out), rng.at(3));

    if (db.compare_float) {
        LearnConfig lc = effective_learn(cfg);
        lc.steps = db.dp.steps;
        lc.eval_trials = db.dp.eval_trials;
        lc.eval_every = db.dp.eval_every;
        Population fin = cfg.pop_in->build(rng.at(1));
        Population fout = cfg.pop_out->build(rng.at(2));
        LearnResult fres = run_learning(task, lc, fin, fout, w0, rng.at(7));
        wr.emit("curve_float.csv", curve_csv(fres.curve));
    }

    DatapathResult res = run_system(task, db.dp, db.costs, pop_in, pop_out,
                                    std::move(w0), rng.at(6));
    wr.emit("curve_quantized.csv", curve_csv(res.curve));
    wr.emit("report.json", report_json(res.report));
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    Writer wr{cfg.out_dir, {}};

    if (cfg.experiment == "rates") run_rates(cfg, wr);
    else if (cfg.experiment == "fit") run_fit(cfg, wr);
    else if (cfg.experiment == "basis") run_basis(cfg, wr);
    else if (cfg.experiment == "learn") run_learn(cfg, wr);
    else if (cfg.experiment == "sweep") run_sweep(cfg, wr);
    else if (cfg.experiment == "datapath") run_datapath(cfg, wr);
    else throw ConfigError("unknown experiment kind: " + cfg.experiment);

    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    nlohmann::json m;
    m["artifact_version"] = "1.0.0";
    m["config_hash"] = to_hex(fnv1a64(cfg.raw.dump()));
    m["seed"] = cfg.seed;
    nlohmann::json files(nlohmann::json::value_t::object);
    for (const auto& [name, sum] : wr.files) files[name] = to_hex(sum);
    m["files"] = files;
    m["wall_clock_s"] = elapsed;
    write_file_atomic(cfg.out_dir + "/run_manifest.json", m.dump(2) + "\n");

    RunResult rr;
    rr.out_dir = cfg.out_dir;
    for (const auto& [name, _] : wr.files) rr.files.push_back(name);
    rr.files.push_back("run_manifest.json");
    return rr;
}

}  // namespace smtjpop
