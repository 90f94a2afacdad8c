#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memsnn/engine.hpp"
#include "memsnn/memristor.hpp"

namespace memsnn {

struct AccuracyCurve {
    std::vector<double> per_epoch;  // percent
    double max = 0.0;
    double mean = 0.0;

    static AccuracyCurve from(std::vector<double> per_epoch);
};

/// Squared Pearson correlation of two equally long samples. Returns exactly
/// 1 for identical non-constant inputs and 0 when either side is constant.
double r_squared(std::span<const double> a, std::span<const double> b);

/// r_squared of two 16 x 3 row-major weight matrices after permuting the
/// columns of `b` to best match `a`.
double aligned_r_squared(std::span<const double> a, std::span<const double> b);

struct NeuronValidationOptions {
    Millis duration = 5000.0;
    Millis segment = 20.0;  // length of each constant-current piece
    NanoAmps current_max = 20.0;
    int fine_factor = 10;
};

struct EquivalenceReport {
    Millis refractory = 0.0;
    std::size_t reference_spikes = 0;
    std::size_t coarse_spikes = 0;
    std::size_t matched = 0;
    double missing_fraction = 0.0;
    Millis mean_isi = 0.0;
    Millis offset_mean = 0.0;
    Millis offset_std = 0.0;
    /// offset_std / mean_isi
    double relative_offset_std = 0.0;
};

/// Greedy nearest matching of `test` spikes onto `reference` spikes within
/// `window`; closest pairs are taken first and each spike is used once.
/// Returns (reference index, test index) pairs.
std::vector<std::pair<std::size_t, std::size_t>> match_spikes(std::span<const Millis> reference,
                                                               std::span<const Millis> test,
                                                               Millis window);

/// Drives one LIF with a seeded random piecewise-constant current at the
/// config dt and at dt / fine_factor and compares the spike trains. The fine
/// run is the reference.
EquivalenceReport validate_neuron(const RunConfig& config, Millis refractory,
                                  const NeuronValidationOptions& options = {});

struct StdpPoint {
    Millis delta_t;
    double hardware;
    double oracle;
    double relative_error;
};

struct StdpValidation {
    std::vector<StdpPoint> points;
    double max_relative_error = 0.0;
};

/// Window shifted by the waveform plateau,
/// A_eff * exp(-(|delta_t| - w_p) / tau): what the superposed waveforms
/// should produce for |delta_t| > w_p.
double shifted_oracle(Millis delta_t, const EffectiveAmplitudes& amp, const WaveformPair& waves);

/// Draws `count` delta_t uniformly from +-[plateau_width + 1, max_delta]
/// and compares superposed_stdp_response against shifted_oracle.
StdpValidation validate_stdp(const RunConfig& config, int count = 200, Millis max_delta = 100.0);

struct HoldoutSplit {
    std::vector<EncodedSample> train;
    std::vector<EncodedSample> test;
};

/// Stratified split: about `test_fraction` of each class goes to the test
/// side, chosen by the run seed.
HoldoutSplit split_holdout(std::span<const EncodedSample> data, double test_fraction,
                           std::uint64_t seed);

struct TrainReport {
    RunConfig config;
    AccuracyCurve curve;
    double initial_accuracy = 0.0;
    TrainResult result;
    /// Checkpoint epoch -> R^2 against a Reference run from the same seed.
    std::map<int, double> paired_r2;
};

/// Full training run. Hardware runs with `paired` also train a Reference
/// twin from the same initial weights and report weight-scatter R^2.
/// A non-empty `evaluation_set` is scored instead of the training set.
TrainReport run_train(const RunConfig& config, std::span<const EncodedSample> dataset,
                      bool paired = false, std::span<const EncodedSample> evaluation_set = {});

struct ScheduleSweep {
    std::map<UpdateSchedule, AccuracyCurve> curves;
};

/// Runs all three schedules from the same initial weights.
ScheduleSweep sweep_schedules(const RunConfig& config, std::span<const EncodedSample> dataset);

struct IvTrace {
    DeviceKind kind;
    std::vector<IvPoint> points;
};

struct IvOptions {
    Volts v_min = -2.5;
    Volts v_max = 2.0;
    double ramp_rate = 0.01;  // V/ms
    Millis dt = 0.05;
};

/// DC sweeps of both device models starting from g_min.
std::vector<IvTrace> rram_iv(const RunConfig& config, const IvOptions& options = {});

/// Iris from the bundled data directory, encoded with a coder fitted to it.
std::vector<EncodedSample> load_encoded_iris(const RunConfig& config,
                                             const std::optional<std::filesystem::path>& path = {});

void write_accuracy_csv(std::ostream& os, const AccuracyCurve& curve);
void write_weights_csv(std::ostream& os, std::span<const double> weights);
void write_spike_log_csv(std::ostream& os, const EventLog& log);
void write_stdp_csv(std::ostream& os, const StdpValidation& v);
void write_schedule_csv(std::ostream& os, const ScheduleSweep& sweep);
void write_iv_traces_csv(std::ostream& os, std::span<const IvTrace> traces);

std::string hash_hex(std::uint64_t h);

}  // namespace memsnn
