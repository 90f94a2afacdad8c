#pragma once

#include <optional>
#include <span>

#include "memsnn/units.hpp"

namespace memsnn {

/// Leaky integrate-and-fire neuron constants.
struct NeuronParams {
    double membrane_resistance = 10.0;   // MOhm
    double membrane_capacitance = 1.0;   // nF
    Volts threshold = 0.1;
    Volts reset_potential = 0.0;
    Millis refractory_period = 5.0;
    Volts spike_pulse_height = 1.0;
    Millis spike_pulse_width = 1.0;

    Millis tau_m() const { return membrane_resistance * membrane_capacitance; }

    /// Throws std::invalid_argument if the parameter set is inconsistent.
    void validate() const;
};

struct NeuronState {
    Volts membrane_potential = 0.0;
    Millis refractory_until = 0.0;
    std::optional<Millis> last_spike_time;
};

struct StepResult {
    NeuronState state;
    bool spiked = false;
};

/// Advances one explicit-Euler step of C dV/dt = -V/R + I.
///
/// While `now < refractory_until` the membrane is clamped to the reset
/// potential and ignores input. A spike is emitted when the updated
/// potential reaches threshold; the spike is stamped with `now`.
///
/// Throws std::invalid_argument on non-finite input current, dt <= 0, or
/// dt larger than tau_m/20.
StepResult lif_step(const NeuronState& state, const NeuronParams& params,
                    NanoAmps input_current, Millis now, Millis dt);

/// Inter-spike interval of a neuron driven by constant current, from the
/// closed-form solution of the membrane equation. Returns nullopt when the
/// steady-state potential never reaches threshold.
std::optional<Millis> constant_current_isi(const NeuronParams& params, NanoAmps current);

/// Alpha-function synaptic kernel constants (tau_rise < tau_decay).
struct AlphaParams {
    Volts v0 = 1.0;
    Millis tau1 = 10.0;
    Millis tau2 = 2.5;

    void validate() const;
    /// Time of the kernel maximum.
    Millis peak_time() const;
};

/// Unweighted kernel v0 * (exp(-t/tau1) - exp(-t/tau2)).
Volts alpha_value(Millis t_since_spike, const AlphaParams& params);

/// Sum of kernels over a spike train; every spike must satisfy t <= now.
Volts alpha_superpose(std::span<const Millis> spike_times, Millis now,
                      const AlphaParams& params);

/// Streaming form of alpha_superpose: two exponentially decaying traces
/// whose difference equals the kernel sum exactly at every step.
class AlphaGenerator {
public:
    AlphaGenerator() = default;
    AlphaGenerator(const AlphaParams& params, Millis dt);

    /// Decays both traces by one step, then adds a unit impulse if `spike`.
    void step(bool spike);
    Volts value() const { return v0_ * (slow_ - fast_); }
    void reset() { slow_ = fast_ = 0.0; }

private:
    double v0_ = 0.0;
    double slow_decay_ = 0.0;
    double fast_decay_ = 0.0;
    double slow_ = 0.0;
    double fast_ = 0.0;
};

/// STDP driver waveform: a positive plateau for the spike duration followed
/// by an opposite-polarity exponential tail.
struct WaveformParams {
    Volts plateau_height = 1.0;
    Volts tail_amplitude = 0.8;
    Millis tail_tau = 20.0;
    Millis plateau_width = 1.0;

    void validate() const;
};

struct WaveformState {
    std::optional<Millis> last_spike_time;

    /// A new spike always overwrites the previous one.
    void trigger(Millis t) { last_spike_time = t; }
    void reset() { last_spike_time.reset(); }
};

Volts waveform_value(const WaveformState& state, const WaveformParams& params, Millis now);

}  // namespace memsnn
