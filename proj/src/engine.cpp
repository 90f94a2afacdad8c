#include "memsnn/engine.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace memsnn {

// ---------------------------------------------------------------- enums

std::string to_string(UpdateSchedule s) {
    switch (s) {
        case UpdateSchedule::Immediate: return "immediate";
        case UpdateSchedule::PostSample: return "post-sample";
        case UpdateSchedule::PostEpoch: return "post-epoch";
    }
    return "?";
}

std::string to_string(DeviceKind k) { return k == DeviceKind::Ideal ? "ideal" : "realistic"; }

std::string to_string(LearningMode m) {
    return m == LearningMode::Reference ? "reference" : "hardware";
}

UpdateSchedule parse_schedule(const std::string& s) {
    if (s == "immediate") return UpdateSchedule::Immediate;
    if (s == "post-sample") return UpdateSchedule::PostSample;
    if (s == "post-epoch") return UpdateSchedule::PostEpoch;
    throw std::invalid_argument("unknown schedule '" + s + "'");
}

DeviceKind parse_device(const std::string& s) {
    if (s == "ideal") return DeviceKind::Ideal;
    if (s == "realistic") return DeviceKind::Realistic;
    throw std::invalid_argument("unknown device model '" + s + "'");
}

LearningMode parse_mode(const std::string& s) {
    if (s == "reference") return LearningMode::Reference;
    if (s == "hardware") return LearningMode::Hardware;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("config: dt_ms must be > 0");
    if (!(sample_duration >= 0.0)) throw std::invalid_argument("config: sample_duration_ms must be >= 0");
    if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
    if (!(coder_i_max > 0.0)) throw std::invalid_argument("config: coder_i_max_na must be > 0");
    if (!(0.0 <= init_weight_low && init_weight_low <= init_weight_high && init_weight_high <= 1.0)) {
        throw std::invalid_argument("config: require 0 <= init_weight_low <= init_weight_high <= 1");
    }
    if (!(transfer_error >= 0.0)) throw std::invalid_argument("config: transfer_error must be >= 0");
    network_params().validate();
}

DeviceParams RunConfig::device_params() const {
    DeviceParams d;
    d.kind = device_model;
    d.g_min = g_min;
    d.g_max = g_max;
    d.threshold_pos = threshold_pos;
    if (device_model == DeviceKind::Ideal) {
        d.threshold_neg_low = d.threshold_neg_high = threshold_pos;
    } else {
        d.threshold_neg_low = threshold_neg_low;
        d.threshold_neg_high = threshold_neg_high;
    }
    return d;
}

NetworkParams RunConfig::network_params() const {
    NetworkParams p;
    p.input_neuron = input_neuron;
    p.output_neuron = output_neuron;
    p.alpha = alpha;
    p.stdp = stdp;
    const DeviceParams device = device_params();
    p.waves = synthesize_waveforms(stdp, device, input_neuron.spike_pulse_width,
                                   pre_tail_fraction, post_tail_fraction);
    p.device = calibrate_rates(device, p.waves, stdp);
    p.synapse_gain = synapse_gain;
    p.teacher_current = teacher_current;
    p.mode = mode;
    p.dt = dt;
    return p;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_number(const std::string& key, const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("config: bad value '" + s + "' for " + key);
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("config: bad integer '" + s + "' for " + key);
    }
    return v;
}

struct Field {
    ConfigKey key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

Field real(std::string name, std::string desc, double RunConfig::*member) {
    return {{name, std::move(desc)},
            [member, name](RunConfig& c, const std::string& v) { c.*member = parse_number(name, v); },
            [member](const RunConfig& c) { return format_double(c.*member); }};
}

template <typename Sub>
Field nested(std::string name, std::string desc, Sub RunConfig::*outer, double Sub::*inner) {
    return {{name, std::move(desc)},
            [outer, inner, name](RunConfig& c, const std::string& v) {
                (c.*outer).*inner = parse_number(name, v);
            },
            [outer, inner](const RunConfig& c) { return format_double((c.*outer).*inner); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real("dt_ms", "integration step", &RunConfig::dt));
        f.push_back(real("sample_duration_ms", "presentation time per sample", &RunConfig::sample_duration));
        f.push_back({{"epochs", "training epochs"},
                     [](RunConfig& c, const std::string& v) {
                         c.epochs = static_cast<int>(parse_u64("epochs", v));
                     },
                     [](const RunConfig& c) { return std::to_string(c.epochs); }});
        f.push_back({{"seed", "run seed (u64)"},
                     [](RunConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); },
                     [](const RunConfig& c) { return std::to_string(c.seed); }});
        f.push_back({{"schedule", "immediate | post-sample | post-epoch"},
                     [](RunConfig& c, const std::string& v) { c.schedule = parse_schedule(v); },
                     [](const RunConfig& c) { return to_string(c.schedule); }});
        f.push_back({{"device_model", "ideal | realistic"},
                     [](RunConfig& c, const std::string& v) { c.device_model = parse_device(v); },
                     [](const RunConfig& c) { return to_string(c.device_model); }});
        f.push_back({{"mode", "reference | hardware"},
                     [](RunConfig& c, const std::string& v) { c.mode = parse_mode(v); },
                     [](const RunConfig& c) { return to_string(c.mode); }});

        for (const auto& [prefix, member] :
             {std::pair{std::string("input"), &RunConfig::input_neuron},
              std::pair{std::string("output"), &RunConfig::output_neuron}}) {
            f.push_back(nested(prefix + "_resistance_mohm", "membrane resistance", member, &NeuronParams::membrane_resistance));
            f.push_back(nested(prefix + "_capacitance_nf", "membrane capacitance", member, &NeuronParams::membrane_capacitance));
            f.push_back(nested(prefix + "_threshold_v", "firing threshold", member, &NeuronParams::threshold));
            f.push_back(nested(prefix + "_reset_v", "reset potential", member, &NeuronParams::reset_potential));
            f.push_back(nested(prefix + "_refractory_ms", "refractory period", member, &NeuronParams::refractory_period));
            f.push_back(nested(prefix + "_spike_height_v", "spike pulse height", member, &NeuronParams::spike_pulse_height));
            f.push_back(nested(prefix + "_spike_width_ms", "spike pulse width (= waveform plateau)", member, &NeuronParams::spike_pulse_width));
        }

        f.push_back(nested("alpha_v0_v", "alpha kernel scale", &RunConfig::alpha, &AlphaParams::v0));
        f.push_back(nested("alpha_tau1_ms", "alpha decay constant", &RunConfig::alpha, &AlphaParams::tau1));
        f.push_back(nested("alpha_tau2_ms", "alpha rise constant", &RunConfig::alpha, &AlphaParams::tau2));
        f.push_back(nested("stdp_a_plus", "potentiation amplitude (fraction of range)", &RunConfig::stdp, &StdpParams::a_plus));
        f.push_back(nested("stdp_a_minus", "depression amplitude (fraction of range)", &RunConfig::stdp, &StdpParams::a_minus));
        f.push_back(nested("stdp_tau_plus_ms", "potentiation window", &RunConfig::stdp, &StdpParams::tau_plus));
        f.push_back(nested("stdp_tau_minus_ms", "depression window", &RunConfig::stdp, &StdpParams::tau_minus));
        f.push_back(real("wave_pre_tail_fraction", "pre tail amplitude / plateau", &RunConfig::pre_tail_fraction));
        f.push_back(real("wave_post_tail_fraction", "post tail amplitude / plateau", &RunConfig::post_tail_fraction));
        f.push_back(real("device_g_min_us", "minimum conductance", &RunConfig::g_min));
        f.push_back(real("device_g_max_us", "maximum conductance", &RunConfig::g_max));
        f.push_back(real("device_threshold_pos_v", "set threshold", &RunConfig::threshold_pos));
        f.push_back(real("device_threshold_neg_low_v", "reset threshold at g_max (realistic)", &RunConfig::threshold_neg_low));
        f.push_back(real("device_threshold_neg_high_v", "reset threshold at g_min (realistic)", &RunConfig::threshold_neg_high));
        f.push_back(real("synapse_gain_na_per_ua", "column current to neuron current gain", &RunConfig::synapse_gain));
        f.push_back(real("teacher_current_na", "supervision current during training", &RunConfig::teacher_current));
        f.push_back(real("coder_i_max_na", "population coder peak current", &RunConfig::coder_i_max));
        f.push_back(real("init_weight_low", "initial weight lower bound", &RunConfig::init_weight_low));
        f.push_back(real("init_weight_high", "initial weight upper bound", &RunConfig::init_weight_high));
        f.push_back(real("transfer_error", "relative uniform transfer error", &RunConfig::transfer_error));
        f.push_back({{"log_spikes", "record every spike in the event log (0|1)"},
                     [](RunConfig& c, const std::string& v) { c.log_spikes = parse_u64("log_spikes", v) != 0; },
                     [](const RunConfig& c) { return std::string(c.log_spikes ? "1" : "0"); }});
        return f;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        for (const auto& f : fields()) k.push_back(f.key);
        return k;
    }();
    return keys;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
    for (const auto& f : fields()) {
        if (f.key.name == key) {
            f.set(config, value);
            return;
        }
    }
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in, RunConfig config) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
        }
        try {
            set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const RunConfig& config) {
    for (const auto& f : fields()) out << f.key.name << '=' << f.get(config) << '\n';
}

std::uint64_t config_hash(const RunConfig& config) {
    std::ostringstream ss;
    write_config(ss, config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : ss.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------- log

void EventLog::append(EventRecord record) {
    if (!records_.empty() && record.time < records_.back().time) {
        throw std::logic_error("event log: timestamps must be non-decreasing");
    }
    records_.push_back(std::move(record));
}

std::size_t EventLog::count(EventKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        records_.begin(), records_.end(), [kind](const EventRecord& r) { return r.kind == kind; }));
}

// ---------------------------------------------------------------- loops

std::vector<double> initial_weights(const RunConfig& config) {
    Rng rng(config.seed, RngStream::WeightInit);
    std::vector<double> w(kInputNeurons * kOutputNeurons);
    for (auto& x : w) x = rng.uniform(config.init_weight_low, config.init_weight_high);
    return w;
}

namespace {

void do_transfer(TwoArrayNetwork& net, const RunConfig& config, Rng* transfer_rng,
                 EventLog& log, const SimClock& clock) {
    if (config.transfer_error > 0.0 && transfer_rng) {
        std::vector<double> err(kInputNeurons * kOutputNeurons);
        for (auto& e : err) e = transfer_rng->uniform(-config.transfer_error, config.transfer_error);
        net.transfer_weights_with_error(err);
    } else {
        net.transfer_weights();
    }
    log.append({EventKind::Transfer, clock.now, clock.epoch, NeuronKind::Input, -1, 0.0, {}});
}

}  // namespace

std::vector<SampleResult> simulate_epoch(TwoArrayNetwork& net,
                                         std::span<const EncodedSample> dataset,
                                         const RunConfig& config, Rng& shuffle_rng,
                                         EventLog& log, SimClock& clock, Rng* transfer_rng) {
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(std::span<std::size_t>(order));

    std::vector<SampleResult> results;
    results.reserve(order.size());
    for (std::size_t idx : order) {
        const auto& sample = dataset[idx];
        PresentOptions opt;
        opt.teacher_class = sample.label;
        opt.learn = true;
        opt.transfer_every_step = config.schedule == UpdateSchedule::Immediate;
        opt.time_offset = clock.now;
        if (config.log_spikes) {
            opt.on_spike = [&log, &clock](const SpikeEvent& e) {
                log.append({EventKind::Spike, e.time, clock.epoch, e.kind, e.neuron, 0.0, {}});
            };
        }
        const auto counts = net.run_sample(sample, config.sample_duration, opt);
        clock.now += config.sample_duration;
        results.push_back({idx, sample.label, counts});
        if (config.schedule == UpdateSchedule::PostSample) {
            do_transfer(net, config, transfer_rng, log, clock);
        }
    }
    if (config.schedule == UpdateSchedule::PostEpoch) do_transfer(net, config, transfer_rng, log, clock);
    return results;
}

double evaluate(TwoArrayNetwork& net, std::span<const EncodedSample> dataset,
                const RunConfig& config) {
    if (dataset.empty()) {
        std::cerr << "warning: evaluate called with an empty dataset; accuracy defined as 0\n";
        return 0.0;
    }
    PresentOptions opt;
    opt.learn = false;
    std::size_t correct = 0;
    for (const auto& sample : dataset) {
        const auto counts = net.run_sample(sample, config.sample_duration, opt);
        const auto predicted = classify(counts);
        if (predicted && *predicted == sample.label) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(dataset.size());
}

TrainResult train(const RunConfig& config, std::span<const EncodedSample> dataset,
                  const TrainOptions& options) {
    config.validate();
    TwoArrayNetwork net(config.network_params());
    net.set_weights(options.initial_weights ? *options.initial_weights : initial_weights(config));

    Rng shuffle_rng(config.seed, RngStream::Shuffle);
    Rng transfer_rng(config.seed, RngStream::TransferError);
    TrainResult result;
    SimClock clock;

    const auto is_checkpoint = [&](int epoch) {
        return std::find(options.checkpoints.begin(), options.checkpoints.end(), epoch) !=
               options.checkpoints.end();
    };
    const auto snapshot = [&](int epoch) {
        auto w = net.learn_array().weights();
        result.snapshots[epoch] = w;
        result.log.append({EventKind::WeightSnapshot, clock.now, epoch, NeuronKind::Input, -1, 0.0, w});
    };

    const auto scored = options.evaluation_set.empty() ? dataset : options.evaluation_set;
    result.initial_accuracy = evaluate(net, scored, config);
    if (is_checkpoint(0)) snapshot(0);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        clock.epoch = epoch;
        simulate_epoch(net, dataset, config, shuffle_rng, result.log, clock, &transfer_rng);
        const double acc = evaluate(net, scored, config);
        result.accuracy.push_back(acc);
        result.log.append({EventKind::Accuracy, clock.now, epoch, NeuronKind::Input, -1, acc, {}});
        if (is_checkpoint(epoch)) snapshot(epoch);
        if (options.on_epoch) options.on_epoch(epoch, acc);
    }
    result.final_weights = net.learn_array().weights();
    result.transfers = net.transfer_count();
    return result;
}

}  // namespace memsnn
