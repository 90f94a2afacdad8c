#include "memsnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memsnn {

CrossbarArray::CrossbarArray(std::size_t rows, std::size_t cols, const DeviceParams& params)
    : rows_(rows), cols_(cols), params_(params), cells_(rows * cols, DeviceState{params.g_min}) {}

void CrossbarArray::set_weight(std::size_t r, std::size_t c, double w) {
    at(r, c).conductance = mapping().to_conductance(std::clamp(w, 0.0, 1.0));
}

std::vector<double> CrossbarArray::weights() const {
    std::vector<double> out;
    out.reserve(cells_.size());
    const auto m = mapping();
    for (const auto& cell : cells_) out.push_back(m.to_weight(cell.conductance));
    return out;
}

void CrossbarArray::copy_conductances_from(const CrossbarArray& other) {
    if (other.rows_ != rows_ || other.cols_ != cols_) {
        throw std::invalid_argument("crossbar: shape mismatch in copy");
    }
    cells_ = other.cells_;
}

bool operator==(const CrossbarArray& a, const CrossbarArray& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.cells_.size(); ++k) {
        if (a.cells_[k].conductance != b.cells_[k].conductance) return false;
    }
    return true;
}

void NetworkParams::validate() const {
    input_neuron.validate();
    output_neuron.validate();
    alpha.validate();
    waves.pre.validate();
    waves.post.validate();
    stdp.validate();
    device.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("network: dt must be > 0");
    if (!(synapse_gain >= 0.0)) throw std::invalid_argument("network: synapse_gain must be >= 0");
    if (!(teacher_current >= 0.0)) {
        throw std::invalid_argument("network: teacher_current must be >= 0");
    }
    const Volts rest_threshold = std::min(device.threshold_pos, device.threshold_neg_low);
    if (waves.pre.tail_amplitude > rest_threshold || waves.post.tail_amplitude > rest_threshold) {
        throw std::invalid_argument("network: waveform tail would program a device on its own");
    }
}

TwoArrayNetwork::TwoArrayNetwork(const NetworkParams& params)
    : params_(params),
      recognize_(kInputNeurons, kOutputNeurons, params.device),
      learn_(kInputNeurons, kOutputNeurons, params.device) {
    params_.validate();
    alphas_.fill(AlphaGenerator(params_.alpha, params_.dt));
}

void TwoArrayNetwork::set_weights(std::span<const double> weights) {
    if (weights.size() != kInputNeurons * kOutputNeurons) {
        throw std::invalid_argument("set_weights: expected 48 weights");
    }
    for (std::size_t i = 0; i < kInputNeurons; ++i) {
        for (std::size_t j = 0; j < kOutputNeurons; ++j) {
            learn_.set_weight(i, j, weights[i * kOutputNeurons + j]);
        }
    }
    recognize_.copy_conductances_from(learn_);
}

StepSpikes TwoArrayNetwork::recognize_step(std::span<const NanoAmps> input_currents,
                                           std::span<const NanoAmps> teacher_currents,
                                           Millis now) {
    const Millis dt = params_.dt;
    StepSpikes spikes;

    for (std::size_t i = 0; i < kInputNeurons; ++i) {
        auto r = lif_step(inputs_[i], params_.input_neuron, input_currents[i], now, dt);
        inputs_[i] = r.state;
        spikes.input[i] = r.spiked;
        alphas_[i].step(r.spiked);
    }

    for (std::size_t j = 0; j < kOutputNeurons; ++j) {
        double column = 0.0;  // uA
        for (std::size_t i = 0; i < kInputNeurons; ++i) {
            column += read_current(recognize_.at(i, j), alphas_[i].value());
        }
        const NanoAmps current = params_.synapse_gain * column + teacher_currents[j];
        last_output_current_[j] = current;
        auto r = lif_step(outputs_[j], params_.output_neuron, current, now, dt);
        outputs_[j] = r.state;
        spikes.output[j] = r.spiked;
    }
    return spikes;
}

void TwoArrayNetwork::learn_step(const StepSpikes& spikes, Millis now) {
    if (params_.mode == LearningMode::Hardware) {
        hardware_learn(spikes, now);
    } else {
        reference_learn(spikes, now);
    }
}

void TwoArrayNetwork::hardware_learn(const StepSpikes& spikes, Millis now) {
    const auto& waves = params_.waves;
    std::array<Volts, kInputNeurons> row{};
    std::array<Volts, kOutputNeurons> col{};
    for (std::size_t i = 0; i < kInputNeurons; ++i) {
        if (spikes.input[i]) pre_waves_[i].trigger(now);
        row[i] = waveform_value(pre_waves_[i], waves.pre, now);
    }
    for (std::size_t j = 0; j < kOutputNeurons; ++j) {
        if (spikes.output[j]) post_waves_[j].trigger(now);
        col[j] = waveform_value(post_waves_[j], waves.post, now);
    }
    const auto& device = learn_.params();
    for (std::size_t i = 0; i < kInputNeurons; ++i) {
        for (std::size_t j = 0; j < kOutputNeurons; ++j) {
            auto& cell = learn_.at(i, j);
            cell = apply_voltage(cell, device, col[j] - row[i], params_.dt);
        }
    }
}

void TwoArrayNetwork::reference_learn(const StepSpikes& spikes, Millis now) {
    // Same nearest-neighbor ordering as pair_stdp_accumulate: pre spikes of
    // this step pair with earlier post spikes, then post spikes pair with the
    // latest pre spike including this step's.
    const auto& stdp = params_.stdp;
    for (std::size_t i = 0; i < kInputNeurons; ++i) {
        if (!spikes.input[i]) continue;
        for (std::size_t j = 0; j < kOutputNeurons; ++j) {
            if (const auto& t_post = post_waves_[j].last_spike_time) {
                learn_.set_weight(i, j, learn_.weight(i, j) + stdp_oracle(*t_post - now, stdp).delta_w);
            }
        }
        pre_waves_[i].trigger(now);
    }
    for (std::size_t j = 0; j < kOutputNeurons; ++j) {
        if (!spikes.output[j]) continue;
        for (std::size_t i = 0; i < kInputNeurons; ++i) {
            if (const auto& t_pre = pre_waves_[i].last_spike_time) {
                learn_.set_weight(i, j, learn_.weight(i, j) + stdp_oracle(now - *t_pre, stdp).delta_w);
            }
        }
        post_waves_[j].trigger(now);
    }
}

void TwoArrayNetwork::transfer_weights() {
    recognize_.copy_conductances_from(learn_);
    ++transfers_;
}

void TwoArrayNetwork::transfer_weights_with_error(std::span<const double> relative_error) {
    if (relative_error.size() != kInputNeurons * kOutputNeurons) {
        throw std::invalid_argument("transfer_weights_with_error: expected 48 entries");
    }
    const auto& d = recognize_.params();
    for (std::size_t i = 0; i < kInputNeurons; ++i) {
        for (std::size_t j = 0; j < kOutputNeurons; ++j) {
            const double g = learn_.at(i, j).conductance * (1.0 + relative_error[i * kOutputNeurons + j]);
            recognize_.at(i, j).conductance = std::clamp(g, d.g_min, d.g_max);
        }
    }
    ++transfers_;
}

void TwoArrayNetwork::reset_dynamic_state() {
    inputs_.fill(NeuronState{params_.input_neuron.reset_potential, 0.0, std::nullopt});
    outputs_.fill(NeuronState{params_.output_neuron.reset_potential, 0.0, std::nullopt});
    for (auto& a : alphas_) a.reset();
    for (auto& w : pre_waves_) w.reset();
    for (auto& w : post_waves_) w.reset();
    last_output_current_.fill(0.0);
}

SpikeCounts TwoArrayNetwork::run_sample(const EncodedSample& sample, Millis duration,
                                        const PresentOptions& opt) {
    reset_dynamic_state();
    SpikeCounts counts{};
    std::array<NanoAmps, kOutputNeurons> teacher{};
    if (opt.teacher_class) teacher.at(static_cast<std::size_t>(*opt.teacher_class)) = params_.teacher_current;

    const auto steps = static_cast<long>(std::lround(duration / params_.dt));
    for (long k = 0; k < steps; ++k) {
        const Millis now = static_cast<double>(k) * params_.dt;
        const StepSpikes spikes = recognize_step(sample.input_currents, teacher, now);
        for (std::size_t j = 0; j < kOutputNeurons; ++j) counts[j] += spikes.output[j] ? 1 : 0;
        if (opt.on_spike) {
            for (std::size_t i = 0; i < kInputNeurons; ++i) {
                if (spikes.input[i]) opt.on_spike({opt.time_offset + now, NeuronKind::Input, static_cast<int>(i)});
            }
            for (std::size_t j = 0; j < kOutputNeurons; ++j) {
                if (spikes.output[j]) opt.on_spike({opt.time_offset + now, NeuronKind::Output, static_cast<int>(j)});
            }
        }
        if (opt.learn) {
            learn_step(spikes, now);
            if (opt.transfer_every_step) transfer_weights();
        }
    }
    reset_dynamic_state();
    return counts;
}

std::optional<int> classify(const SpikeCounts& counts) {
    const auto best = std::max_element(counts.begin(), counts.end());
    if (*best == 0) return std::nullopt;
    if (std::count(counts.begin(), counts.end(), *best) > 1) return std::nullopt;
    return static_cast<int>(best - counts.begin());
}

}  // namespace memsnn
