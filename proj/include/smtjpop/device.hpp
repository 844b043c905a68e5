#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "smtjpop/errors.hpp"
#include "smtjpop/rng.hpp"

namespace smtjpop {

enum class Orientation { P, AP };

/// A superparamagnetic tunnel junction in the two-state Poisson picture.
/// The bias variable and the critical scale only ever enter as a ratio, so
/// current-controlled data (amps, I_c) works through the same struct as
/// voltage-controlled data (volts, V_c) — just keep the units consistent.
struct JunctionParams {
    double delta = 0.0;       // barrier height, units of k_BT
    double v_c = 0.0;         // critical bias (voltage or current)
    double phi0 = 1e9;        // attempt frequency, Hz
    double v0 = 0.0;          // tuning bias (curve center)
    double resistance = 0.0;  // ohms; 0 = unknown, only energy code cares
};

struct JunctionState {
    Orientation orientation = Orientation::P;
    double elapsed = 0.0;  // seconds since last switch
};

struct SotGeometry {
    double d = 0.0;    // junction diameter, m
    double t_j = 0.0;  // free-layer thickness, m
    double t_u = 0.0;  // underlayer thickness, m
    double w = 0.0;    // underlayer width, m
    double i_c = 0.0;  // critical current, A
};

struct EscapeRates {
    double from_p;   // Hz, escape out of P
    double from_ap;  // Hz, escape out of AP
};

inline void validate(const JunctionParams& p) {
    if (!(p.delta > 0.0) || !(p.v_c > 0.0) || !(p.phi0 > 0.0))
        throw ConfigError("junction params: delta, v_c, phi0 must be > 0");
    if (!std::isfinite(p.delta) || !std::isfinite(p.v_c) ||
        !std::isfinite(p.phi0) || !std::isfinite(p.v0))
        throw ConfigError("junction params: non-finite value");
}

/// Escape rates of the two states under an effective bias. Positive bias
/// destabilizes P and stabilizes AP, i.e. escape from P speeds up. Underflow
/// quietly gives 0, which is the physically sensible limit.
inline EscapeRates escape_rates(const JunctionParams& p, double v_eff) {
    double x = v_eff / p.v_c;
    return {p.phi0 * std::exp(-p.delta * (1.0 - x)),
            p.phi0 * std::exp(-p.delta * (1.0 + x))};
}

/// P(at least one escape in dt) for a Poisson process of rate phi.
inline double switch_probability(double phi, double dt) {
    return -std::expm1(-phi * dt);
}

/// Natural (zero-bias) full-cycle rate r0 = phi0·exp(-delta)/2.
inline double natural_rate(const JunctionParams& p) {
    return 0.5 * p.phi0 * std::exp(-p.delta);
}

/// Full-cycle telegraph rate under bias: r0 / cosh(delta·v/v_c).
/// Algebraically identical to phi_P·phi_AP/(phi_P+phi_AP).
inline double analytic_rate(const JunctionParams& p, double v_eff) {
    return natural_rate(p) / std::cosh(p.delta * v_eff / p.v_c);
}

/// Advance one timestep; returns true when the junction switched.
inline bool step(JunctionState& st, const JunctionParams& p, double v_eff,
                 double dt, RngStream& rng) {
    EscapeRates er = escape_rates(p, v_eff);
    double phi = (st.orientation == Orientation::P) ? er.from_p : er.from_ap;
    if (rng.uniform() < switch_probability(phi, dt)) {
        st.orientation =
            (st.orientation == Orientation::P) ? Orientation::AP : Orientation::P;
        st.elapsed = 0.0;
        return true;
    }
    st.elapsed += dt;
    return false;
}

/// Advance a junction through `steps` equal timesteps at a fixed bias and
/// return the number of switches. Distribution-identical to calling step()
/// `steps` times, but jumps between switches with geometric dwell draws, so
/// the cost scales with the switch count instead of the step count.
long advance_telegraph(JunctionState& st, const JunctionParams& p, double v_eff,
                       long steps, double dt, RngStream& rng);

struct InvertResult {
    double v_eff;  // non-negative branch
    bool clamped;  // r_target exceeded r0 and was clamped down to it
};

/// Invert the tuning curve: the bias whose rate equals r_target. Rates above
/// r0 are unreachable and clamp to the peak (v = 0) with the flag set.
inline InvertResult invert_rate(const JunctionParams& p, double r_target) {
    if (!(r_target > 0.0)) throw SimulationError("rate not representable");
    double r0 = natural_rate(p);
    if (r_target >= r0) return {0.0, r_target > r0};
    return {p.v_c / p.delta * std::acosh(r0 / r_target), false};
}

/// Voltage-equivalent tuning-curve shift induced by an SOT line current.
inline double sot_effective_shift(const SotGeometry& g, double i_sot,
                                  const JunctionParams& p) {
    return p.v_c * (g.d * g.t_j * i_sot) / (g.w * g.t_u * g.i_c);
}

/// Fit (delta, v_c, v0) of the tuning curve to (bias, rate) samples by
/// squared log-rate residual; phi0 stays fixed at 1 GHz.
JunctionParams fit_params(const std::vector<std::pair<double, double>>& samples,
                          double phi0 = 1e9);

/// Full-cycle rate out of a resistance telegraph trace: threshold crossings
/// in opposite directions paired into cycles, divided by total duration.
double rate_from_trace(const std::vector<double>& resistance, double dt,
                       double threshold);

}  // namespace smtjpop
