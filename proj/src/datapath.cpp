#include "smtjpop/datapath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "smtjpop/energy.hpp"

namespace smtjpop {

FixedPoint8 FixedPoint8::from_double(double v, int frac_bits, bool* saturated) {
    double scaled = std::nearbyint(v * static_cast<double>(1 << frac_bits));
    bool sat = false;
    if (scaled > 127.0) { scaled = 127.0; sat = true; }
    if (scaled < -127.0) { scaled = -127.0; sat = true; }
    if (saturated) *saturated = sat;
    return {static_cast<std::int8_t>(scaled), frac_bits};
}

FixedMatrix FixedMatrix::quantize(const WeightMatrix& w, int frac_bits,
                                  std::uint64_t* saturations) {
    FixedMatrix q;
    q.n_in = w.n_in;
    q.n_out = w.n_out;
    q.frac_bits = frac_bits;
    q.raw.resize(w.w.size());
    std::uint64_t sats = 0;
    for (std::size_t k = 0; k < w.w.size(); ++k) {
        bool sat = false;
        q.raw[k] = FixedPoint8::from_double(w.w[k], frac_bits, &sat).raw;
        sats += sat;
    }
    if (saturations) *saturations = sats;
    return q;
}

WeightMatrix FixedMatrix::to_float() const {
    WeightMatrix w;
    w.n_in = n_in;
    w.n_out = n_out;
    w.w.resize(raw.size());
    double ulp = 1.0 / static_cast<double>(1 << frac_bits);
    for (std::size_t k = 0; k < raw.size(); ++k)
        w.w[k] = static_cast<double>(raw[k]) * ulp;
    return w;
}

void FsmTracker::advance(FsmState next) {
    auto ok = [](FsmState a, FsmState b) {
        switch (a) {
            case FsmState::S0: return b == FsmState::S1;
            case FsmState::S1: return b == FsmState::S2;
            case FsmState::S2: return b == FsmState::S3;
            case FsmState::S3: return b == FsmState::S4 || b == FsmState::S0;
            case FsmState::S4: return b == FsmState::S5;
            case FsmState::S5: return b == FsmState::S6;
            case FsmState::S6: return b == FsmState::S0;
        }
        return false;
    };
    if (!ok(state_, next))
        throw SimulationError("illegal FSM transition " +
                              std::to_string(static_cast<int>(state_)) + " -> " +
                              std::to_string(static_cast<int>(next)));
    state_ = next;
    ++visits_[static_cast<std::size_t>(next)];
}

std::vector<Counter8> acquire_phase(Population& pop, double stimulus,
                                    const DatapathConfig& cfg, RngStream rng,
                                    PhaseCounts& counts) {
    SampledCounts sc = sampled_event_count(pop, stimulus, cfg.clock_dt,
                                           cfg.acquire_cycles, rng);
    std::vector<Counter8> counters(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        counters[i].load_saturating(sc.sampled[i]);
        counts.counter_ticks += counters[i].count;
    }
    counts.comparator_cycles += cfg.acquire_cycles * pop.size();
    return counters;
}

ComputeResult compute_phase(const std::vector<Counter8>& counters,
                            const FixedMatrix& w, PhaseCounts& counts) {
    if (counters.size() != w.n_in)
        throw ConfigError("compute: counter vector does not match weights");
    constexpr std::int64_t kAccMax = (std::int64_t{1} << 31) - 1;
    ComputeResult res;
    res.acc.assign(w.n_out, 0);
    for (std::size_t i = 0; i < w.n_in; ++i) {
        std::int64_t c = counters[i].count;
        if (c == 0) {
            counts.macs += w.n_out;  // the sequencer still walks the row
            counts.mram_read_bits += 8 * w.n_out;
            continue;
        }
        for (std::size_t j = 0; j < w.n_out; ++j) {
            std::int64_t acc = res.acc[j] + c * static_cast<std::int64_t>(w.at(i, j));
            if (acc > kAccMax) { acc = kAccMax; ++res.overflows; }
            if (acc < -kAccMax) { acc = -kAccMax; ++res.overflows; }
            res.acc[j] = acc;
        }
        counts.macs += w.n_out;
        counts.mram_read_bits += 8 * w.n_out;
    }
    return res;
}

LearnPhaseStats learn_phase(const std::vector<Counter8>& counters,
                            const std::vector<Direction>& dir, FixedMatrix& w,
                            const DatapathConfig& cfg, PhaseCounts& counts) {
    if (counters.size() != w.n_in || dir.size() != w.n_out)
        throw ConfigError("learn: dimension mismatch");
    LearnPhaseStats stats;
    bool any = std::any_of(dir.begin(), dir.end(),
                           [](Direction d) { return d != Direction::hold; });
    if (!any) return stats;  // caught: no read-modify-write pass at all

    // d_i and the 1/(1+alpha) factor would live in small lookup tables in
    // hardware; both are exact integers here, so the arithmetic is bit-exact.
    std::int64_t scale = std::llround(32768.0 / (1.0 + cfg.alpha));
    std::vector<std::int64_t> d(w.n_in);
    for (std::size_t i = 0; i < w.n_in; ++i)
        d[i] = std::llround(cfg.alpha * static_cast<double>(1 << w.frac_bits) *
                            static_cast<double>(counters[i].count) / cfg.c0_norm);

    for (std::size_t j = 0; j < w.n_out; ++j) {
        if (dir[j] == Direction::hold) continue;
        std::int64_t sign = (dir[j] == Direction::increase) ? 1 : -1;
        for (std::size_t i = 0; i < w.n_in; ++i) {
            std::int8_t old_raw = w.at(i, j);
            std::int64_t tmp = static_cast<std::int64_t>(old_raw) + sign * d[i];
            std::int64_t wide = tmp * scale + (tmp >= 0 ? 16384 : -16384);
            wide /= 32768;
            if (wide > 127) { wide = 127; ++stats.saturations; }
            if (wide < -127) { wide = -127; ++stats.saturations; }
            std::int8_t new_raw = static_cast<std::int8_t>(wide);

            counts.mram_read_bits += 8;  // read-before-write
            counts.macs += 1;            // the scale multiply
            stats.write_bits_naive += 8;
            stats.write_bits += static_cast<std::uint64_t>(std::popcount(
                static_cast<std::uint8_t>(old_raw ^ new_raw)));
            w.at(i, j) = new_raw;
        }
    }
    counts.mram_write_bits += stats.write_bits;
    return stats;
}

namespace {

struct QuantTrialOutcome {
    double y = 0.0;
    bool silent = false;
    std::uint64_t overflows = 0;
};

// One S0-S3 pass: count the input population, run the fixed-point transfer,
// drive and count the output population, decode from its counters.
QuantTrialOutcome quantized_forward(Population& pop_in, Population& pop_out,
                                    const FixedMatrix& w, double stimulus,
                                    const DatapathConfig& cfg,
                                    const std::vector<double>& r0_out,
                                    RngStream rng_in, RngStream rng_out,
                                    PhaseCounts& acquire, PhaseCounts& compute,
                                    std::vector<Counter8>& counters_in) {
    counters_in = acquire_phase(pop_in, stimulus, cfg, rng_in, acquire);
    ComputeResult cr = compute_phase(counters_in, w, compute);

    double window = static_cast<double>(cfg.acquire_cycles) * cfg.clock_dt;
    double ulp = 1.0 / static_cast<double>(1 << w.frac_bits);
    std::vector<double> v_eff(pop_out.size(), 0.0);
    for (std::size_t j = 0; j < pop_out.size(); ++j) {
        if (!pop_out.alive(j)) continue;
        // Counter units back to a rate: counts ~ 2 * rate * window.
        double r_target = static_cast<double>(cr.acc[j]) * ulp / (2.0 * window);
        r_target = std::clamp(r_target, cfg.rate_floor_frac * r0_out[j], r0_out[j]);
        v_eff[j] = invert_rate(pop_out.params[j], r_target).v_eff;
    }
    SampledCounts out_counts = sampled_event_count_driven(
        pop_out, v_eff, cfg.clock_dt, cfg.acquire_cycles, rng_out);
    acquire.comparator_cycles += cfg.acquire_cycles * pop_out.size();

    QuantTrialOutcome res;
    res.overflows = cr.overflows;
    std::vector<double> c(pop_out.size(), 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < pop_out.size(); ++j) {
        std::uint64_t v = std::min<std::uint64_t>(out_counts.sampled[j], 255);
        acquire.counter_ticks += v;
        c[j] = static_cast<double>(v);
        total += c[j];
    }
    if (total <= 0.0) {
        res.silent = true;
        return res;
    }
    res.y = decode(pop_out, c);
    return res;
}

}  // namespace

DatapathResult run_system(const Transform& task, const DatapathConfig& cfg,
                          const CostParams& costs, Population& pop_in,
                          Population& pop_out, WeightMatrix w_init,
                          RngStream rng) {
    DatapathResult res;
    res.ledger.costs = costs;
    std::uint64_t init_sats = 0;
    res.w = FixedMatrix::quantize(w_init, cfg.frac_bits, &init_sats);
    res.report.overflows += init_sats;

    std::vector<double> r0_out(pop_out.size());
    for (std::size_t j = 0; j < pop_out.size(); ++j)
        r0_out[j] = natural_rate(pop_out.params[j]);

    double range = task.out_max - task.out_min;
    double catch_v = cfg.catch_halfwidth * range;
    double window = static_cast<double>(cfg.acquire_cycles) * cfg.clock_dt;
    double p_in = shift_power(pop_in, cfg.resistance) +
                  stimulus_power(pop_in.size(), cfg.v_stim_max, cfg.resistance);
    double p_out = shift_power(pop_out, cfg.resistance) +
                   stimulus_power(pop_out.size(), cfg.v_stim_max, cfg.resistance);

    FsmTracker fsm;
    PhaseCounts eval_scratch;  // checkpoints must not affect the ledger

    auto eval_error = [&](long step, RngStream es_root) {
        std::vector<double> errs;
        for (int e = 0; e < cfg.eval_trials; ++e) {
            RngStream es = es_root.at(static_cast<std::uint64_t>(e));
            double z = es.at(0).uniform(task.in_min, task.in_max);
            std::vector<Counter8> scratch_counters;
            auto out = quantized_forward(pop_in, pop_out, res.w, z, cfg, r0_out,
                                         es.at(1), es.at(2), eval_scratch,
                                         eval_scratch, scratch_counters);
            if (out.silent) continue;
            errs.push_back(100.0 * std::abs(out.y - task.f(z)) / range);
        }
        double mean = errs.empty()
                          ? 100.0
                          : std::accumulate(errs.begin(), errs.end(), 0.0) /
                                static_cast<double>(errs.size());
        double var = 0.0;
        for (double e : errs) var += (e - mean) * (e - mean);
        if (!errs.empty()) var /= static_cast<double>(errs.size());
        res.curve.push_back({step, mean, std::sqrt(var)});
    };

    eval_error(0, rng.at(rng_tag::kEval, 0));
    for (long t = 1; t <= cfg.steps; ++t) {
        std::uint64_t ut = static_cast<std::uint64_t>(t);
        double z = rng.at(rng_tag::kStimulus, ut).uniform(task.in_min, task.in_max);

        fsm.advance(FsmState::S1);
        fsm.advance(FsmState::S2);
        fsm.advance(FsmState::S3);
        std::vector<Counter8> counters_in;
        auto out = quantized_forward(pop_in, pop_out, res.w, z, cfg, r0_out,
                                     rng.at(rng_tag::kTrialWindow, ut, 0),
                                     rng.at(rng_tag::kTrialWindow, ut, 1),
                                     res.ledger.acquire, res.ledger.compute,
                                     counters_in);
        res.ledger.acquire.junction_energy_j += (p_in + p_out) * window;
        res.report.overflows += out.overflows;
        ++res.report.operations;

        if (out.silent) {
            ++res.report.skipped_trials;
            fsm.advance(FsmState::S0);
        } else if (cfg.learning_enabled) {
            fsm.advance(FsmState::S4);
            auto dir = trial_direction(out.y, task.f(z), catch_v, pop_out);
            fsm.advance(FsmState::S5);
            auto stats =
                learn_phase(counters_in, dir, res.w, cfg, res.ledger.learn);
            res.report.write_bits += stats.write_bits;
            res.report.write_bits_naive += stats.write_bits_naive;
            res.report.overflows += stats.saturations;
            fsm.advance(FsmState::S6);
            fsm.advance(FsmState::S0);
        } else {
            fsm.advance(FsmState::S0);
        }

        if (t % cfg.eval_every == 0 || t == cfg.steps)
            eval_error(t, rng.at(rng_tag::kEval, ut));
    }

    const CostLedger& lg = res.ledger;
    res.report.acquire = {lg.acquire.junction_energy_j, lg.cmos_energy(lg.acquire),
                          lg.mram_energy(lg.acquire)};
    res.report.compute = {lg.compute.junction_energy_j, lg.cmos_energy(lg.compute),
                          lg.mram_energy(lg.compute)};
    res.report.learn = {lg.learn.junction_energy_j, lg.cmos_energy(lg.learn),
                        lg.mram_energy(lg.learn)};
    res.report.area_cmos = costs.area_cmos;
    res.report.area_mram = costs.area_mram;
    res.report.area_junctions = costs.area_junctions;
    double ops = static_cast<double>(std::max<std::uint64_t>(1, res.report.operations));
    res.report.energy_per_op_learning_j = lg.total_energy() / ops;
    res.report.energy_per_op_inference_j =
        (lg.phase_energy(lg.acquire) + lg.phase_energy(lg.compute)) / ops;
    return res;
}

}  // namespace smtjpop
