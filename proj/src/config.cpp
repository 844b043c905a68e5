#include "smtjpop/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "smtjpop/io.hpp"

namespace smtjpop {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) fail(path + "/" + key, "unknown key");
}

double num(const json& obj, const std::string& path, const char* key,
           double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "/" + key, "expected a number");
    return v.get<double>();
}

double num_req(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path, std::string("missing key ") + key);
    return num(obj, path, key, 0.0);
}

long integer(const json& obj, const std::string& path, const char* key,
             long fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
    return v.get<long>();
}

bool boolean(const json& obj, const std::string& path, const char* key,
             bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + "/" + key, "expected a boolean");
    return v.get<bool>();
}

std::string text(const json& obj, const std::string& path, const char* key,
                 const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

std::pair<double, double> range_pair(const json& obj, const std::string& path) {
    bool has_v = obj.contains("range_v");
    bool has_a = obj.contains("range_a");
    if (has_v == has_a)
        fail(path, "exactly one of range_v, range_a is required");
    const json& r = obj.at(has_v ? "range_v" : "range_a");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        fail(path + (has_v ? "/range_v" : "/range_a"),
             "expected [min, max] numbers");
    return {r[0].get<double>(), r[1].get<double>()};
}

PopulationConfig parse_population(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"n", "range_v", "range_a", "variability", "junctions",
                "keep_biases"});
    PopulationConfig pc;
    std::tie(pc.v_min, pc.v_max) = range_pair(obj, path);
    pc.keep_biases = boolean(obj, path, "keep_biases", false);

    if (obj.contains("junctions")) {
        if (obj.contains("n") || obj.contains("variability"))
            fail(path, "junctions excludes n and variability");
        const json& arr = obj.at("junctions");
        if (!arr.is_array()) fail(path + "/junctions", "expected an array");
        if (arr.empty()) fail(path + "/junctions", "empty junction list");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string jp = path + "/junctions/" + std::to_string(i);
            check_keys(arr[i], jp,
                       {"delta", "v_c_v", "i_c_a", "phi0_hz", "bias_v",
                        "bias_a", "resistance_ohm"});
            JunctionParams p;
            p.delta = num_req(arr[i], jp, "delta");
            bool has_vc = arr[i].contains("v_c_v");
            bool has_ic = arr[i].contains("i_c_a");
            if (has_vc == has_ic)
                fail(jp, "exactly one of v_c_v, i_c_a is required");
            p.v_c = num_req(arr[i], jp, has_vc ? "v_c_v" : "i_c_a");
            p.phi0 = num(arr[i], jp, "phi0_hz", 1e9);
            p.v0 = num(arr[i], jp, arr[i].contains("bias_v") ? "bias_v" : "bias_a",
                       0.0);
            p.resistance = num(arr[i], jp, "resistance_ohm", 0.0);
            validate(p);
            pc.explicit_params.push_back(p);
        }
        return pc;
    }

    long n = integer(obj, path, "n", 0);
    if (n < 2) fail(path + "/n", "population needs n >= 2");
    pc.n = static_cast<std::size_t>(n);
    if (obj.contains("variability")) {
        const json& v = obj.at("variability");
        std::string vp = path + "/variability";
        check_keys(v, vp,
                   {"delta_center", "delta_span", "v_c_mean_v", "v_c_std_v",
                    "phi0_hz"});
        pc.variability.delta_center = num_req(v, vp, "delta_center");
        pc.variability.delta_span = num(v, vp, "delta_span", 0.0);
        pc.variability.v_c_mean = num_req(v, vp, "v_c_mean_v");
        pc.variability.v_c_std = num(v, vp, "v_c_std_v", 0.0);
        pc.variability.phi0 = num(v, vp, "phi0_hz", 1e9);
        if (pc.variability.delta_span < 0.0 || pc.variability.v_c_std < 0.0)
            fail(vp, "spreads must be non-negative");
    } else {
        fail(path, "missing key variability (or junctions)");
    }
    return pc;
}

std::pair<double, double> bias_pair(const json& obj, const std::string& path) {
    bool has_v = obj.contains("bias_min_v");
    bool has_a = obj.contains("bias_min_a");
    if (has_v == has_a)
        fail(path, "exactly one of bias_min_v/bias_max_v, bias_min_a/bias_max_a");
    const char* lo = has_v ? "bias_min_v" : "bias_min_a";
    const char* hi = has_v ? "bias_max_v" : "bias_max_a";
    return {num_req(obj, path, lo), num_req(obj, path, hi)};
}

std::string resolve(const std::string& base_dir, const std::string& p) {
    std::filesystem::path fp(p);
    if (fp.is_absolute() || base_dir.empty()) return p;
    return (std::filesystem::path(base_dir) / fp).string();
}

}  // namespace

Population PopulationConfig::build(RngStream rng) const {
    if (!explicit_params.empty())
        return make_population(explicit_params, v_min, v_max, keep_biases);
    return build_population(n, v_min, v_max, variability, rng);
}

ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::string& config_path) {
    ExperimentConfig cfg;
    cfg.raw = doc;
    cfg.config_path = config_path;
    std::string base_dir =
        config_path.empty()
            ? std::string{}
            : std::filesystem::path(config_path).parent_path().string();

    check_keys(doc, "",
               {"experiment", "seed", "mode", "out_dir", "population_in",
                "population_out", "task", "learn", "rates", "fit", "basis",
                "sweep", "datapath", "energy"});

    cfg.experiment = text(doc, "", "experiment", "");
    static const std::set<std::string> kinds{"rates", "fit",   "basis",
                                             "learn", "sweep", "datapath"};
    if (!kinds.count(cfg.experiment))
        fail("/experiment", "must be one of rates|fit|basis|learn|sweep|datapath");

    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_unsigned() && !s.is_number_integer())
            fail("/seed", "expected an integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    std::string mode = text(doc, "", "mode", "mc");
    if (mode == "mc") cfg.mode = RateMode::monte_carlo;
    else if (mode == "analytic") cfg.mode = RateMode::analytic;
    else fail("/mode", "must be mc or analytic");
    cfg.out_dir = text(doc, "", "out_dir", "smtjpop_out");

    if (doc.contains("population_in"))
        cfg.pop_in = parse_population(doc.at("population_in"), "/population_in");
    if (doc.contains("population_out"))
        cfg.pop_out = parse_population(doc.at("population_out"), "/population_out");

    if (doc.contains("task")) {
        const json& t = doc.at("task");
        check_keys(t, "/task", {"transform", "params"});
        TaskBlock tb;
        tb.transform = text(t, "/task", "transform", "identity");
        if (t.contains("params")) {
            const json& p = t.at("params");
            if (!p.is_object()) fail("/task/params", "expected an object");
            for (const auto& [k, v] : p.items()) {
                if (!v.is_number()) fail("/task/params/" + k, "expected a number");
                tb.params[k] = v.get<double>();
            }
        }
        cfg.task = tb;
    }

    if (doc.contains("learn")) {
        const json& l = doc.at("learn");
        check_keys(l, "/learn",
                   {"alpha", "catch_halfwidth_frac", "f0_norm_hz", "steps",
                    "eval_trials", "eval_every", "window_steps", "dt_s",
                    "rate_floor_frac"});
        cfg.learn.alpha = num(l, "/learn", "alpha", cfg.learn.alpha);
        cfg.learn.catch_halfwidth =
            num(l, "/learn", "catch_halfwidth_frac", cfg.learn.catch_halfwidth);
        cfg.learn.f0_norm = num(l, "/learn", "f0_norm_hz", cfg.learn.f0_norm);
        cfg.learn.steps = integer(l, "/learn", "steps", cfg.learn.steps);
        cfg.learn.eval_trials = static_cast<int>(
            integer(l, "/learn", "eval_trials", cfg.learn.eval_trials));
        cfg.learn.eval_every =
            integer(l, "/learn", "eval_every", cfg.learn.eval_every);
        cfg.learn.window_steps =
            integer(l, "/learn", "window_steps", cfg.learn.window_steps);
        cfg.learn.dt = num(l, "/learn", "dt_s", cfg.learn.dt);
        cfg.learn.rate_floor_frac =
            num(l, "/learn", "rate_floor_frac", cfg.learn.rate_floor_frac);
        if (!(cfg.learn.alpha > 0.0)) fail("/learn/alpha", "must be > 0");
        if (!(cfg.learn.catch_halfwidth > 0.0))
            fail("/learn/catch_halfwidth_frac", "must be > 0");
        if (!(cfg.learn.f0_norm > 0.0)) fail("/learn/f0_norm_hz", "must be > 0");
        if (cfg.learn.steps < 0) fail("/learn/steps", "must be >= 0");
        if (cfg.learn.eval_trials < 1) fail("/learn/eval_trials", "must be >= 1");
    }

    if (doc.contains("rates")) {
        const json& r = doc.at("rates");
        check_keys(r, "/rates",
                   {"bias_min_v", "bias_max_v", "bias_min_a", "bias_max_a",
                    "points", "window_steps", "dt_s"});
        RatesBlock rb;
        std::tie(rb.bias_min, rb.bias_max) = bias_pair(r, "/rates");
        rb.points = static_cast<int>(integer(r, "/rates", "points", rb.points));
        rb.window_steps = integer(r, "/rates", "window_steps", rb.window_steps);
        rb.dt = num(r, "/rates", "dt_s", rb.dt);
        if (rb.points < 2) fail("/rates/points", "need at least 2 points");
        if (!(rb.bias_min < rb.bias_max)) fail("/rates", "empty bias range");
        cfg.rates = rb;
    }

    if (doc.contains("fit")) {
        const json& f = doc.at("fit");
        check_keys(f, "/fit", {"table_path"});
        FitBlock fb;
        fb.table_path = text(f, "/fit", "table_path", "");
        if (fb.table_path.empty()) fail("/fit/table_path", "required");
        fb.table_path = resolve(base_dir, fb.table_path);
        cfg.fit = fb;
    }

    if (doc.contains("basis")) {
        const json& b = doc.at("basis");
        check_keys(b, "/basis",
                   {"stim_min_v", "stim_max_v", "stim_min_a", "stim_max_a",
                    "points", "target", "trajectory_path", "window_steps",
                    "dt_s"});
        BasisBlock bb;
        bool has_v = b.contains("stim_min_v");
        bool has_a = b.contains("stim_min_a");
        if (has_v == has_a)
            fail("/basis", "exactly one of stim_min_v/stim_max_v or _a pair");
        bb.stim_min = num_req(b, "/basis", has_v ? "stim_min_v" : "stim_min_a");
        bb.stim_max = num_req(b, "/basis", has_v ? "stim_max_v" : "stim_max_a");
        bb.points = static_cast<int>(integer(b, "/basis", "points", bb.points));
        bb.target = text(b, "/basis", "target", "barometric");
        if (bb.target != "barometric" && bb.target != "trajectory")
            fail("/basis/target", "must be barometric or trajectory");
        bb.trajectory_path = text(b, "/basis", "trajectory_path", "");
        if (bb.target == "trajectory") {
            if (bb.trajectory_path.empty())
                fail("/basis/trajectory_path", "required for trajectory target");
            bb.trajectory_path = resolve(base_dir, bb.trajectory_path);
        }
        bb.window_steps = integer(b, "/basis", "window_steps", bb.window_steps);
        bb.dt = num(b, "/basis", "dt_s", bb.dt);
        if (bb.points < 1) fail("/basis/points", "need at least 1 point");
        cfg.basis = bb;
    }

    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        check_keys(s, "/sweep",
                   {"kind", "values", "window_steps_list", "relearn_steps"});
        SweepBlock sb;
        sb.kind = text(s, "/sweep", "kind", "");
        static const std::set<std::string> sweep_kinds{
            "vc_variability", "delta_variability", "population_size",
            "energy_window", "fault"};
        if (!sweep_kinds.count(sb.kind))
            fail("/sweep/kind",
                 "must be one of vc_variability|delta_variability|"
                 "population_size|energy_window|fault");
        if (s.contains("values")) {
            const json& v = s.at("values");
            if (!v.is_array()) fail("/sweep/values", "expected an array");
            for (const auto& x : v) {
                if (!x.is_number()) fail("/sweep/values", "expected numbers");
                sb.values.push_back(x.get<double>());
            }
        }
        if (s.contains("window_steps_list")) {
            const json& v = s.at("window_steps_list");
            if (!v.is_array())
                fail("/sweep/window_steps_list", "expected an array");
            for (const auto& x : v) {
                if (!x.is_number_integer())
                    fail("/sweep/window_steps_list", "expected integers");
                sb.window_steps_list.push_back(x.get<long>());
            }
        }
        sb.relearn_steps = integer(s, "/sweep", "relearn_steps", sb.relearn_steps);
        cfg.sweep = sb;
    }

    if (doc.contains("datapath")) {
        const json& d = doc.at("datapath");
        check_keys(d, "/datapath",
                   {"frac_bits", "clock_dt_s", "acquire_cycles", "alpha",
                    "c0_norm", "catch_halfwidth_frac", "rate_floor_frac",
                    "steps", "eval_trials", "eval_every", "learning_enabled",
                    "compare_float", "v_stim_max_v", "resistance_ohm", "costs"});
        DatapathBlock db;
        db.dp.frac_bits = static_cast<int>(
            integer(d, "/datapath", "frac_bits", db.dp.frac_bits));
        if (db.dp.frac_bits < 0 || db.dp.frac_bits > 14)
            fail("/datapath/frac_bits", "must be in [0, 14]");
        db.dp.clock_dt = num(d, "/datapath", "clock_dt_s", db.dp.clock_dt);
        db.dp.acquire_cycles = static_cast<std::uint64_t>(integer(
            d, "/datapath", "acquire_cycles",
            static_cast<long>(db.dp.acquire_cycles)));
        db.dp.alpha = num(d, "/datapath", "alpha", db.dp.alpha);
        db.dp.c0_norm = num(d, "/datapath", "c0_norm", db.dp.c0_norm);
        db.dp.catch_halfwidth =
            num(d, "/datapath", "catch_halfwidth_frac", db.dp.catch_halfwidth);
        db.dp.rate_floor_frac =
            num(d, "/datapath", "rate_floor_frac", db.dp.rate_floor_frac);
        db.dp.steps = integer(d, "/datapath", "steps", db.dp.steps);
        db.dp.eval_trials = static_cast<int>(
            integer(d, "/datapath", "eval_trials", db.dp.eval_trials));
        db.dp.eval_every = integer(d, "/datapath", "eval_every", db.dp.eval_every);
        db.dp.learning_enabled =
            boolean(d, "/datapath", "learning_enabled", true);
        db.compare_float = boolean(d, "/datapath", "compare_float", false);
        db.dp.v_stim_max = num(d, "/datapath", "v_stim_max_v", db.dp.v_stim_max);
        db.dp.resistance = num(d, "/datapath", "resistance_ohm", db.dp.resistance);
        if (!d.contains("costs")) fail("/datapath", "missing key costs");
        const json& c = d.at("costs");
        check_keys(c, "/datapath/costs",
                   {"e_comparator_cycle", "e_mac", "e_mram_read_bit",
                    "e_mram_write_bit", "e_counter_tick", "area_cmos",
                    "area_mram", "area_junctions"});
        db.costs.e_comparator_cycle =
            num_req(c, "/datapath/costs", "e_comparator_cycle");
        db.costs.e_mac = num_req(c, "/datapath/costs", "e_mac");
        db.costs.e_mram_read_bit =
            num_req(c, "/datapath/costs", "e_mram_read_bit");
        db.costs.e_mram_write_bit =
            num_req(c, "/datapath/costs", "e_mram_write_bit");
        db.costs.e_counter_tick =
            num_req(c, "/datapath/costs", "e_counter_tick");
        db.costs.area_cmos = num_req(c, "/datapath/costs", "area_cmos");
        db.costs.area_mram = num_req(c, "/datapath/costs", "area_mram");
        db.costs.area_junctions =
            num_req(c, "/datapath/costs", "area_junctions");
        cfg.datapath = db;
    }

    if (doc.contains("energy")) {
        const json& e = doc.at("energy");
        check_keys(e, "/energy",
                   {"ra_ohm_um2", "diameter_m", "v_stim_max_v",
                    "resistance_ohm"});
        cfg.energy.ra_product = num(e, "/energy", "ra_ohm_um2", 20.0);
        cfg.energy.diameter = num(e, "/energy", "diameter_m", 7.7e-9);
        cfg.energy.v_stim_max = num(e, "/energy", "v_stim_max_v", 0.1);
        cfg.energy.resistance_override =
            num(e, "/energy", "resistance_ohm", 0.0);
    }

    // Per-experiment structural requirements, checked before any simulation.
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) fail("/" + cfg.experiment, what);
    };
    if (cfg.experiment == "rates")
        require(cfg.pop_in.has_value() && cfg.rates.has_value(),
                "needs population_in and rates blocks");
    if (cfg.experiment == "fit")
        require(cfg.fit.has_value(), "needs a fit block");
    if (cfg.experiment == "basis")
        require(cfg.pop_in.has_value() && cfg.basis.has_value(),
                "needs population_in and basis blocks");
    if (cfg.experiment == "learn")
        require(cfg.pop_in.has_value() && cfg.pop_out.has_value() &&
                    cfg.task.has_value(),
                "needs population_in, population_out, task blocks");
    if (cfg.experiment == "sweep")
        require(cfg.sweep.has_value() && cfg.pop_in.has_value() &&
                    cfg.pop_out.has_value() && cfg.task.has_value(),
                "needs sweep, population_in, population_out, task blocks");
    if (cfg.experiment == "datapath")
        require(cfg.datapath.has_value() && cfg.pop_in.has_value() &&
                    cfg.pop_out.has_value() && cfg.task.has_value(),
                "needs datapath, population_in, population_out, task blocks");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::string body = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(doc, path);
}

}  // namespace smtjpop
