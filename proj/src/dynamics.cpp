#include "memsnn/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace memsnn {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Step times are k*dt products; boundaries are compared with this slack so
// that a duration of exactly n steps is not shortened or lengthened by one.
constexpr double kTimeSlack = 1e-9;

}  // namespace

void NeuronParams::validate() const {
    require(membrane_resistance > 0.0, "neuron: membrane_resistance must be > 0");
    require(membrane_capacitance > 0.0, "neuron: membrane_capacitance must be > 0");
    require(threshold > reset_potential, "neuron: threshold must exceed reset_potential");
    require(refractory_period >= 0.0, "neuron: refractory_period must be >= 0");
    require(spike_pulse_width > 0.0, "neuron: spike_pulse_width must be > 0");
}

StepResult lif_step(const NeuronState& state, const NeuronParams& params,
                    NanoAmps input_current, Millis now, Millis dt) {
    if (!std::isfinite(input_current)) {
        throw std::invalid_argument("lif_step: non-finite input current");
    }
    if (!(dt > 0.0) || dt > params.tau_m() / 20.0) {
        throw std::invalid_argument("lif_step: dt must be in (0, tau_m/20], got " +
                                    std::to_string(dt));
    }

    StepResult out{state, false};
    if (now < state.refractory_until - kTimeSlack) {
        out.state.membrane_potential = params.reset_potential;
        return out;
    }

    const double drive = params.membrane_resistance * input_current * kMillivoltsToVolts;
    const double v = state.membrane_potential;
    const double v_next = v + dt * (drive - v) / params.tau_m();

    if (v_next >= params.threshold) {
        out.spiked = true;
        out.state.membrane_potential = params.reset_potential;
        out.state.refractory_until = now + params.refractory_period;
        out.state.last_spike_time = now;
    } else {
        out.state.membrane_potential = v_next;
    }
    return out;
}

std::optional<Millis> constant_current_isi(const NeuronParams& params, NanoAmps current) {
    const double drive = params.membrane_resistance * current * kMillivoltsToVolts;
    const double gap = drive - params.reset_potential;
    const double needed = drive - params.threshold;
    if (needed <= 0.0) return std::nullopt;
    return params.refractory_period + params.tau_m() * std::log(gap / needed);
}

void AlphaParams::validate() const {
    require(v0 > 0.0, "alpha: v0 must be > 0");
    require(tau2 > 0.0 && tau1 > tau2, "alpha: require tau1 > tau2 > 0");
}

Millis AlphaParams::peak_time() const {
    return tau1 * tau2 / (tau1 - tau2) * std::log(tau1 / tau2);
}

Volts alpha_value(Millis t, const AlphaParams& p) {
    return p.v0 * (std::exp(-t / p.tau1) - std::exp(-t / p.tau2));
}

Volts alpha_superpose(std::span<const Millis> spike_times, Millis now, const AlphaParams& p) {
    double sum = 0.0;
    for (Millis ts : spike_times) sum += alpha_value(now - ts, p);
    return sum;
}

AlphaGenerator::AlphaGenerator(const AlphaParams& p, Millis dt)
    : v0_(p.v0), slow_decay_(std::exp(-dt / p.tau1)), fast_decay_(std::exp(-dt / p.tau2)) {}

void AlphaGenerator::step(bool spike) {
    slow_ *= slow_decay_;
    fast_ *= fast_decay_;
    if (spike) {
        slow_ += 1.0;
        fast_ += 1.0;
    }
}

void WaveformParams::validate() const {
    require(plateau_height > 0.0, "waveform: plateau_height must be > 0");
    require(tail_amplitude > 0.0, "waveform: tail_amplitude must be > 0");
    require(tail_tau > 0.0, "waveform: tail_tau must be > 0");
    require(plateau_width > 0.0, "waveform: plateau_width must be > 0");
}

Volts waveform_value(const WaveformState& state, const WaveformParams& p, Millis now) {
    if (!state.last_spike_time) return 0.0;
    const Millis age = now - *state.last_spike_time;
    if (age < -kTimeSlack) return 0.0;
    if (age < p.plateau_width - kTimeSlack) return p.plateau_height;
    return -p.tail_amplitude * std::exp(-(age - p.plateau_width) / p.tail_tau);
}

}  // namespace memsnn
