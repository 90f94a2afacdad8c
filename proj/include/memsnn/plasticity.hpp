#pragma once

#include <optional>
#include <span>

#include "memsnn/dynamics.hpp"
#include "memsnn/memristor.hpp"

namespace memsnn {

/// Exponential STDP window. Amplitudes are fractions of the weight range.
struct StdpParams {
    double a_plus = 0.01;
    double a_minus = 0.01;
    Millis tau_plus = 20.0;
    Millis tau_minus = 20.0;

    void validate() const;
};

struct WeightChange {
    double delta_w = 0.0;
};

/// delta_t = t_post - t_pre. Non-negative delta_t potentiates.
WeightChange stdp_oracle(Millis delta_t, const StdpParams& params);

/// Pre- and post-neuron waveform shapes for one crossbar.
struct WaveformPair {
    WaveformParams pre;
    WaveformParams post;
};

/// Builds the waveforms that realize `stdp` by superposition: plateau height
/// at the device set threshold, tail time constants tau_plus (pre) and
/// tau_minus (post), and tail amplitudes given as fractions of the plateau.
WaveformPair synthesize_waveforms(const StdpParams& stdp, const DeviceParams& device,
                                  Millis plateau_width, double pre_tail_fraction = 0.8,
                                  double post_tail_fraction = 0.8);

/// Peak-of-window weight change produced on an unsaturated ideal device,
/// i.e. the A_eff such that the response for |dt| > plateau_width is
/// A_eff * exp(-(|dt| - plateau_width) / tau). Returned as (plus, minus).
struct EffectiveAmplitudes {
    double plus;
    double minus;
};
EffectiveAmplitudes effective_amplitudes(const WaveformPair& waves, const DeviceParams& device);

/// Returns `device` with rate constants chosen so that, for |dt| beyond the
/// plateau, the superposed response equals stdp_oracle(dt, stdp); the
/// effective amplitudes become a_plus * exp(-w_p / tau_plus) and the
/// depression counterpart.
DeviceParams calibrate_rates(const DeviceParams& device, const WaveformPair& waves,
                             const StdpParams& stdp);

/// Instantaneous voltage across a learn-array device: the post neuron drives
/// the column, the pre neuron the row.
Volts superposition_voltage(const WaveformState& pre_state, const WaveformParams& pre_params,
                            const WaveformState& post_state, const WaveformParams& post_params,
                            Millis now);

/// Simulates one pre/post spike pair `delta_t` apart against a single device
/// starting at `initial_g` (mid-range when unset), and returns the net
/// conductance change as a fraction of the range. Spike times are placed on
/// the dt grid.
WeightChange superposed_stdp_response(Millis delta_t, const WaveformPair& waves,
                                      const DeviceParams& device, Millis dt,
                                      std::optional<MicroSiemens> initial_g = std::nullopt);

/// Nearest-neighbor pairing: every post spike pairs with the latest pre spike
/// at or before it, every pre spike with the latest post spike strictly
/// before it. Both lists must be sorted ascending.
WeightChange pair_stdp_accumulate(std::span<const Millis> pre_spikes,
                                  std::span<const Millis> post_spikes, const StdpParams& params);

}  // namespace memsnn
