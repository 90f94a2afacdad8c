#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memsnn/encoding.hpp"
#include "memsnn/network.hpp"
#include "memsnn/rng.hpp"

namespace memsnn {

/// Every constant of one experiment. Serialized as `key=value` lines with
/// unit-suffixed keys; see config_keys() for the full list.
struct RunConfig {
    /// Default neuron with a 0.1 ms spike pulse, which is also the waveform
    /// plateau width.
    static NeuronParams short_pulse() {
        NeuronParams p;
        p.spike_pulse_width = 0.1;
        return p;
    }

    Millis dt = 0.05;
    Millis sample_duration = 100.0;
    int epochs = 25;
    std::uint64_t seed = 1;
    UpdateSchedule schedule = UpdateSchedule::Immediate;
    DeviceKind device_model = DeviceKind::Ideal;
    LearningMode mode = LearningMode::Hardware;

    NeuronParams input_neuron = short_pulse();
    NeuronParams output_neuron = short_pulse();
    AlphaParams alpha;
    StdpParams stdp{0.005, 0.008, 20.0, 20.0};
    double pre_tail_fraction = 0.8;
    double post_tail_fraction = 0.8;

    MicroSiemens g_min = 2.0;
    MicroSiemens g_max = 50.0;
    Volts threshold_pos = 1.0;
    Volts threshold_neg_low = 1.0;
    Volts threshold_neg_high = 1.8;  // realistic model only

    double synapse_gain = 0.13;
    NanoAmps teacher_current = 60.0;
    NanoAmps coder_i_max = 20.0;
    double init_weight_low = 0.3;
    double init_weight_high = 0.7;
    /// Relative uniform error applied per cell on transfer (0 = exact copy).
    double transfer_error = 0.0;
    bool log_spikes = false;

    /// Throws std::invalid_argument if any embedded parameter set is invalid.
    void validate() const;

    DeviceParams device_params() const;
    NetworkParams network_params() const;
};

struct ConfigKey {
    std::string name;
    std::string description;
};
const std::vector<ConfigKey>& config_keys();

/// Applies one `key=value` assignment; throws std::invalid_argument for an
/// unknown key or an unparsable value.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Parses `key=value` lines; `#` starts a comment. Unknown keys are errors.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
void write_config(std::ostream& out, const RunConfig& config);

/// FNV-1a of the serialized config.
std::uint64_t config_hash(const RunConfig& config);

std::string to_string(UpdateSchedule s);
std::string to_string(DeviceKind k);
std::string to_string(LearningMode m);
UpdateSchedule parse_schedule(const std::string& s);
DeviceKind parse_device(const std::string& s);
LearningMode parse_mode(const std::string& s);

enum class EventKind { Spike, Transfer, WeightSnapshot, Accuracy };

struct EventRecord {
    EventKind kind;
    Millis time;
    int epoch = 0;
    NeuronKind neuron_kind = NeuronKind::Input;
    int neuron = -1;
    double value = 0.0;
    std::vector<double> weights;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Append-only, time-ordered record of a run.
class EventLog {
public:
    /// Throws std::logic_error if `record` is older than the last entry.
    void append(EventRecord record);
    const std::vector<EventRecord>& records() const { return records_; }
    std::size_t count(EventKind kind) const;

    friend bool operator==(const EventLog&, const EventLog&) = default;

private:
    std::vector<EventRecord> records_;
};

struct SampleResult {
    std::size_t index;
    int label;
    SpikeCounts counts;
};

/// Simulation clock shared by the epoch and evaluation loops; spike events
/// are stamped with it so that log timestamps keep increasing across samples.
struct SimClock {
    Millis now = 0.0;
    int epoch = 0;
};

/// Draws initial weights uniformly in [init_weight_low, init_weight_high].
std::vector<double> initial_weights(const RunConfig& config);

/// One training pass: every sample once, shuffled by `shuffle_rng`, teacher
/// on, transfers per schedule. Returns per-sample spike counts.
std::vector<SampleResult> simulate_epoch(TwoArrayNetwork& net,
                                         std::span<const EncodedSample> dataset,
                                         const RunConfig& config, Rng& shuffle_rng,
                                         EventLog& log, SimClock& clock,
                                         Rng* transfer_rng = nullptr);

/// Recognition-only pass (no teacher, no learning). Returns percent correct;
/// Unclassified counts as wrong. An empty set yields 0 with a warning.
double evaluate(TwoArrayNetwork& net, std::span<const EncodedSample> dataset,
                const RunConfig& config);

struct TrainResult {
    double initial_accuracy = 0.0;
    std::vector<double> accuracy;  // after each epoch
    std::map<int, std::vector<double>> snapshots;  // epoch -> row-major weights
    std::vector<double> final_weights;
    std::size_t transfers = 0;
    EventLog log;
};

struct TrainOptions {
    std::vector<int> checkpoints{0, 10, 23};
    /// Overrides initial_weights(config) when set.
    std::optional<std::vector<double>> initial_weights;
    std::function<void(int epoch, double accuracy)> on_epoch;
    /// Samples scored after each epoch; empty means the training set.
    std::span<const EncodedSample> evaluation_set;
};

TrainResult train(const RunConfig& config, std::span<const EncodedSample> dataset,
                  const TrainOptions& options = {});

}  // namespace memsnn
