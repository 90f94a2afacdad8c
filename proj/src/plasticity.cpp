#include "memsnn/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memsnn {

void StdpParams::validate() const {
    if (!(a_plus > 0.0 && a_minus > 0.0 && tau_plus > 0.0 && tau_minus > 0.0)) {
        throw std::invalid_argument("stdp: amplitudes and time constants must be > 0");
    }
}

WeightChange stdp_oracle(Millis delta_t, const StdpParams& p) {
    if (delta_t >= 0.0) return {p.a_plus * std::exp(-delta_t / p.tau_plus)};
    return {-p.a_minus * std::exp(delta_t / p.tau_minus)};
}

WaveformPair synthesize_waveforms(const StdpParams& stdp, const DeviceParams& device,
                                  Millis plateau_width, double pre_tail_fraction,
                                  double post_tail_fraction) {
    if (!(pre_tail_fraction > 0.0 && pre_tail_fraction <= 1.0 && post_tail_fraction > 0.0 &&
          post_tail_fraction <= 1.0)) {
        throw std::invalid_argument("synthesize_waveforms: tail fractions must be in (0, 1]");
    }
    const Volts vp = device.threshold_pos;
    WaveformPair w;
    w.pre = {vp, pre_tail_fraction * vp, stdp.tau_plus, plateau_width};
    w.post = {vp, post_tail_fraction * vp, stdp.tau_minus, plateau_width};
    return w;
}

namespace {

// Integral of tail_amplitude * exp(-s / tau) over one plateau width. During
// the later neuron's plateau the earlier neuron's tail adds to the plateau,
// and only this excess exceeds threshold.
double tail_area_over_plateau(const WaveformParams& tail, Millis plateau_width) {
    return tail.tail_amplitude * tail.tail_tau *
           (1.0 - std::exp(-plateau_width / tail.tail_tau));
}

}  // namespace

EffectiveAmplitudes effective_amplitudes(const WaveformPair& w, const DeviceParams& d) {
    return {d.rate_pos * tail_area_over_plateau(w.pre, w.post.plateau_width) / d.range(),
            d.rate_neg * tail_area_over_plateau(w.post, w.pre.plateau_width) / d.range()};
}

DeviceParams calibrate_rates(const DeviceParams& device, const WaveformPair& w,
                             const StdpParams& stdp) {
    // The superposed response starts decaying only after the later plateau,
    // so matching a * exp(-|dt| / tau) outside it needs a peak of
    // a * exp(-w_p / tau).
    const double plus = stdp.a_plus * std::exp(-w.post.plateau_width / w.pre.tail_tau);
    const double minus = stdp.a_minus * std::exp(-w.pre.plateau_width / w.post.tail_tau);
    DeviceParams out = device;
    out.rate_pos = plus * device.range() / tail_area_over_plateau(w.pre, w.post.plateau_width);
    out.rate_neg = minus * device.range() / tail_area_over_plateau(w.post, w.pre.plateau_width);
    return out;
}

Volts superposition_voltage(const WaveformState& pre_state, const WaveformParams& pre_params,
                            const WaveformState& post_state, const WaveformParams& post_params,
                            Millis now) {
    return waveform_value(post_state, post_params, now) -
           waveform_value(pre_state, pre_params, now);
}

WeightChange superposed_stdp_response(Millis delta_t, const WaveformPair& w,
                                      const DeviceParams& device, Millis dt,
                                      std::optional<MicroSiemens> initial_g) {
    if (!(dt > 0.0)) throw std::invalid_argument("superposed_stdp_response: dt must be > 0");

    const long gap = std::lround(std::abs(delta_t) / dt);
    const long pre_step = delta_t >= 0.0 ? 0 : gap;
    const long post_step = delta_t >= 0.0 ? gap : 0;
    const Millis settle =
        std::max(w.pre.plateau_width, w.post.plateau_width) +
        10.0 * std::max(w.pre.tail_tau, w.post.tail_tau);
    const long end_step = gap + static_cast<long>(std::ceil(settle / dt));

    const MicroSiemens g0 = initial_g.value_or(0.5 * (device.g_min + device.g_max));
    DeviceState cell{g0};
    WaveformState pre, post;
    for (long k = 0; k <= end_step; ++k) {
        const Millis now = static_cast<double>(k) * dt;
        if (k == pre_step) pre.trigger(now);
        if (k == post_step) post.trigger(now);
        const Volts v = superposition_voltage(pre, w.pre, post, w.post, now);
        cell = apply_voltage(cell, device, v, dt);
    }
    return {(cell.conductance - g0) / device.range()};
}

WeightChange pair_stdp_accumulate(std::span<const Millis> pre, std::span<const Millis> post,
                                  const StdpParams& params) {
    double total = 0.0;
    std::size_t i = 0, j = 0;
    std::optional<Millis> last_pre, last_post;
    while (i < pre.size() || j < post.size()) {
        // Coincident spikes: the pre spike is taken first.
        const bool take_pre = j == post.size() || (i < pre.size() && pre[i] <= post[j]);
        if (take_pre) {
            if (last_post) total += stdp_oracle(*last_post - pre[i], params).delta_w;
            last_pre = pre[i++];
        } else {
            if (last_pre) total += stdp_oracle(post[j] - *last_pre, params).delta_w;
            last_post = post[j++];
        }
    }
    return {total};
}

}  // namespace memsnn
