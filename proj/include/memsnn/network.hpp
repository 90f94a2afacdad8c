#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "memsnn/dynamics.hpp"
#include "memsnn/encoding.hpp"
#include "memsnn/memristor.hpp"
#include "memsnn/plasticity.hpp"

namespace memsnn {

inline constexpr std::size_t kOutputNeurons = kIrisClasses;

enum class UpdateSchedule { Immediate, PostSample, PostEpoch };

/// How the learn array is updated. Hardware drives every device with the
/// superposed pre/post waveforms; Reference applies the pair-based STDP rule
/// directly to the weights.
enum class LearningMode { Reference, Hardware };

/// w = (G - g_min) / (g_max - g_min).
struct WeightMapping {
    MicroSiemens g_min;
    MicroSiemens g_max;

    double to_weight(MicroSiemens g) const { return (g - g_min) / (g_max - g_min); }
    MicroSiemens to_conductance(double w) const { return g_min + w * (g_max - g_min); }
};

/// Row-major m x n grid of devices sharing one parameter set.
class CrossbarArray {
public:
    CrossbarArray() = default;
    CrossbarArray(std::size_t rows, std::size_t cols, const DeviceParams& params);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const DeviceParams& params() const { return params_; }
    WeightMapping mapping() const { return {params_.g_min, params_.g_max}; }

    DeviceState& at(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
    const DeviceState& at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

    double weight(std::size_t r, std::size_t c) const { return mapping().to_weight(at(r, c).conductance); }
    void set_weight(std::size_t r, std::size_t c, double w);

    /// Row-major weights.
    std::vector<double> weights() const;
    std::span<const DeviceState> cells() const { return cells_; }

    /// Copies every conductance from `other`, which must have the same shape.
    void copy_conductances_from(const CrossbarArray& other);

    friend bool operator==(const CrossbarArray& a, const CrossbarArray& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    DeviceParams params_;
    std::vector<DeviceState> cells_;
};

struct NetworkParams {
    NeuronParams input_neuron;
    NeuronParams output_neuron;
    AlphaParams alpha;
    WaveformPair waves;
    StdpParams stdp;
    DeviceParams device;
    /// nA of output-neuron current per uA of crossbar column current.
    double synapse_gain = 0.13;
    NanoAmps teacher_current = 60.0;
    LearningMode mode = LearningMode::Hardware;
    Millis dt = 0.05;

    void validate() const;
};

enum class NeuronKind { Input, Output };

struct SpikeEvent {
    Millis time;
    NeuronKind kind;
    int neuron;
};

struct StepSpikes {
    std::array<bool, kInputNeurons> input{};
    std::array<bool, kOutputNeurons> output{};
};

/// Options for one sample presentation.
struct PresentOptions {
    std::optional<int> teacher_class;
    bool learn = true;
    /// Copy learn -> recognize after every learn step.
    bool transfer_every_step = false;
    /// Offset added to local sample time in reported spike events.
    Millis time_offset = 0.0;
    std::function<void(const SpikeEvent&)> on_spike;
};

using SpikeCounts = std::array<int, kOutputNeurons>;

/// Recognize and learn crossbars driven concurrently by one set of neurons.
/// Inference reads only the recognize array; plasticity writes only the
/// learn array; the two meet at transfer_weights().
class TwoArrayNetwork {
public:
    explicit TwoArrayNetwork(const NetworkParams& params);

    const NetworkParams& params() const { return params_; }
    const CrossbarArray& recognize_array() const { return recognize_; }
    const CrossbarArray& learn_array() const { return learn_; }

    /// Sets both arrays to the same weights (row-major, 16 x 3).
    void set_weights(std::span<const double> weights);

    /// Input LIFs integrate, alpha generators update, output LIFs integrate
    /// the recognize-array column currents plus teacher current.
    StepSpikes recognize_step(std::span<const NanoAmps> input_currents,
                              std::span<const NanoAmps> teacher_currents, Millis now);

    /// Applies this step's spikes to the learn array according to the mode.
    void learn_step(const StepSpikes& spikes, Millis now);

    void transfer_weights();
    /// Transfer with a relative write error per cell (row-major), clamped to
    /// the device range. Models an imperfect write-verify loop.
    void transfer_weights_with_error(std::span<const double> relative_error);
    std::size_t transfer_count() const { return transfers_; }

    /// Returns neurons, alpha generators, and waveform/STDP traces to rest.
    void reset_dynamic_state();

    /// Presents one encoded sample for `duration`, starting from rest.
    SpikeCounts run_sample(const EncodedSample& sample, Millis duration,
                           const PresentOptions& options);

    /// Read-only views for tests and tracing.
    const NeuronState& input_neuron(std::size_t i) const { return inputs_[i]; }
    const NeuronState& output_neuron(std::size_t j) const { return outputs_[j]; }
    Volts alpha_voltage(std::size_t i) const { return alphas_[i].value(); }
    NanoAmps output_current(std::size_t j) const { return last_output_current_[j]; }

private:
    void hardware_learn(const StepSpikes& spikes, Millis now);
    void reference_learn(const StepSpikes& spikes, Millis now);

    NetworkParams params_;
    CrossbarArray recognize_;
    CrossbarArray learn_;
    std::array<NeuronState, kInputNeurons> inputs_{};
    std::array<NeuronState, kOutputNeurons> outputs_{};
    std::array<AlphaGenerator, kInputNeurons> alphas_{};
    std::array<WaveformState, kInputNeurons> pre_waves_{};
    std::array<WaveformState, kOutputNeurons> post_waves_{};
    std::array<NanoAmps, kOutputNeurons> last_output_current_{};
    std::size_t transfers_ = 0;
};

/// Argmax of spike counts; nullopt for ties at the top or all zeros.
std::optional<int> classify(const SpikeCounts& counts);

}  // namespace memsnn
