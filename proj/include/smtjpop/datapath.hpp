#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "smtjpop/learning.hpp"

namespace smtjpop {

/// Signed 8-bit fixed point, saturating at ±(2^7 - 1)/2^frac_bits.
struct FixedPoint8 {
    std::int8_t raw = 0;
    int frac_bits = 7;

    double value() const {
        return static_cast<double>(raw) / static_cast<double>(1 << frac_bits);
    }
    static FixedPoint8 from_double(double v, int frac_bits,
                                   bool* saturated = nullptr);
};

/// Weight storage in the emulated ST-MRAM: one byte per weight, a common
/// fractional scale for the whole matrix.
struct FixedMatrix {
    std::vector<std::int8_t> raw;  // row-major (input i, output j)
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    int frac_bits = 7;

    std::int8_t at(std::size_t i, std::size_t j) const {
        return raw[i * n_out + j];
    }
    std::int8_t& at(std::size_t i, std::size_t j) { return raw[i * n_out + j]; }
    double value(std::size_t i, std::size_t j) const {
        return static_cast<double>(at(i, j)) /
               static_cast<double>(1 << frac_bits);
    }
    static FixedMatrix quantize(const WeightMatrix& w, int frac_bits,
                                std::uint64_t* saturations = nullptr);
    WeightMatrix to_float() const;
};

/// Event counter behind each comparator; clips at 255, never wraps.
struct Counter8 {
    std::uint8_t count = 0;

    void tick() {
        if (count != 255) ++count;
    }
    void load_saturating(std::uint64_t events) {
        count = events > 255 ? std::uint8_t{255}
                             : static_cast<std::uint8_t>(events);
    }
};

enum class FsmState : std::uint8_t { S0, S1, S2, S3, S4, S5, S6 };

/// Control-flow guard for the sequencer: S0 counting window, S1-S3 compute,
/// optional S4-S6 learning write-back, then back to S0.
class FsmTracker {
public:
    FsmState state() const { return state_; }
    void advance(FsmState next);
    std::uint64_t visits(FsmState s) const {
        return visits_[static_cast<std::size_t>(s)];
    }

private:
    FsmState state_ = FsmState::S0;
    std::array<std::uint64_t, 7> visits_{};
};

/// Per-event energy costs and block areas for the emulated hardware.
struct CostParams {
    double e_comparator_cycle = 0.0;  // J per comparator per clock
    double e_mac = 0.0;               // J per 8-bit multiply-accumulate
    double e_mram_read_bit = 0.0;     // J per MRAM bit read
    double e_mram_write_bit = 0.0;    // J per MRAM bit programmed
    double e_counter_tick = 0.0;      // J per counter increment
    double area_cmos = 0.0;           // um^2
    double area_mram = 0.0;
    double area_junctions = 0.0;
};

struct PhaseCounts {
    std::uint64_t comparator_cycles = 0;
    std::uint64_t counter_ticks = 0;
    std::uint64_t macs = 0;
    std::uint64_t mram_read_bits = 0;
    std::uint64_t mram_write_bits = 0;
    double junction_energy_j = 0.0;  // physical dissipation in the junctions
};

/// Accumulated event counts per phase plus the cost table to price them.
struct CostLedger {
    CostParams costs;
    PhaseCounts acquire;
    PhaseCounts compute;
    PhaseCounts learn;

    double cmos_energy(const PhaseCounts& p) const {
        return static_cast<double>(p.comparator_cycles) * costs.e_comparator_cycle +
               static_cast<double>(p.counter_ticks) * costs.e_counter_tick +
               static_cast<double>(p.macs) * costs.e_mac;
    }
    double mram_energy(const PhaseCounts& p) const {
        return static_cast<double>(p.mram_read_bits) * costs.e_mram_read_bit +
               static_cast<double>(p.mram_write_bits) * costs.e_mram_write_bit;
    }
    double phase_energy(const PhaseCounts& p) const {
        return cmos_energy(p) + mram_energy(p) + p.junction_energy_j;
    }
    double total_energy() const {
        return phase_energy(acquire) + phase_energy(compute) + phase_energy(learn);
    }
};

struct DatapathConfig {
    int frac_bits = 11;            // weight scale: value = raw / 2^frac_bits
    double clock_dt = 40e-9;       // comparator clock period, s
    std::uint64_t acquire_cycles = 458;  // clocks per counting window
    double alpha = 0.02;           // quantized learning rate
    double c0_norm = 45.0;         // counter value at the natural rate
    double catch_halfwidth = 0.02; // fraction of the output range
    double rate_floor_frac = 1e-3;
    long steps = 3000;
    int eval_trials = 50;
    long eval_every = 100;
    bool learning_enabled = true;
    double v_stim_max = 0.1;       // V, for junction power accounting
    double resistance = 429495.5;  // ohms per junction
};

/// One counting window on a population: comparator-sampled switching events
/// latched into 8-bit counters. Accrues comparator clocks and counter ticks.
std::vector<Counter8> acquire_phase(Population& pop, double stimulus,
                                    const DatapathConfig& cfg, RngStream rng,
                                    PhaseCounts& counts);

struct ComputeResult {
    std::vector<std::int64_t> acc;  // raw accumulators, scale 2^-frac_bits
    std::uint64_t overflows = 0;
};

/// Sequential saturating MAC pass: acc_j = sum_i counter_i * w_raw_ij, plus
/// the MRAM reads to fetch the weights.
ComputeResult compute_phase(const std::vector<Counter8>& counters,
                            const FixedMatrix& w, PhaseCounts& counts);

struct LearnPhaseStats {
    std::uint64_t write_bits = 0;        // actually programmed (write-skip)
    std::uint64_t write_bits_naive = 0;  // if every processed byte were written
    std::uint64_t saturations = 0;
};

/// Integer learning update: raw' = sat(round((raw ± d_i) / (1+alpha))) with
/// d_i = round(alpha * 2^frac_bits * c_i / c0_norm); only bits that differ
/// after read-modify-write are programmed.
LearnPhaseStats learn_phase(const std::vector<Counter8>& counters,
                            const std::vector<Direction>& dir, FixedMatrix& w,
                            const DatapathConfig& cfg, PhaseCounts& counts);

struct TechEnergy {
    double junction_j = 0.0;
    double cmos_j = 0.0;
    double mram_j = 0.0;
    double total() const { return junction_j + cmos_j + mram_j; }
};

struct DatapathReport {
    TechEnergy acquire;
    TechEnergy compute;
    TechEnergy learn;
    double area_cmos = 0.0;
    double area_mram = 0.0;
    double area_junctions = 0.0;
    std::uint64_t operations = 0;
    std::uint64_t skipped_trials = 0;  // silent output windows
    std::uint64_t overflows = 0;
    std::uint64_t write_bits = 0;
    std::uint64_t write_bits_naive = 0;
    double energy_per_op_learning_j = 0.0;   // all phases
    double energy_per_op_inference_j = 0.0;  // acquire + compute only
};

struct DatapathResult {
    std::vector<EvalPoint> curve;
    FixedMatrix w;
    CostLedger ledger;
    DatapathReport report;
};

/// Full emulated loop per operation: S0 counting window (input and output
/// observation), S1-S3 fixed-point transfer and output drive, S4-S6 verdict
/// and MRAM write-back when learning is on. Evaluation checkpoints use the
/// same quantized pipeline but never touch the ledger.
DatapathResult run_system(const Transform& task, const DatapathConfig& cfg,
                          const CostParams& costs, Population& pop_in,
                          Population& pop_out, WeightMatrix w_init,
                          RngStream rng);

}  // namespace smtjpop
