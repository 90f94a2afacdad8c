#include "memsnn/bench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace memsnn {

AccuracyCurve AccuracyCurve::from(std::vector<double> per_epoch) {
    AccuracyCurve c;
    c.per_epoch = std::move(per_epoch);
    if (!c.per_epoch.empty()) {
        c.max = *std::max_element(c.per_epoch.begin(), c.per_epoch.end());
        c.mean = std::accumulate(c.per_epoch.begin(), c.per_epoch.end(), 0.0) /
                 static_cast<double>(c.per_epoch.size());
    }
    return c;
}

double r_squared(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("r_squared: size mismatch");
    if (a.size() < 2) return 0.0;
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double da = a[k] - ma;
        const double db = b[k] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return (sab * sab) / (saa * sbb);
}

double aligned_r_squared(std::span<const double> a, std::span<const double> b) {
    constexpr std::size_t n = kInputNeurons * kOutputNeurons;
    if (a.size() != n || b.size() != n) {
        throw std::invalid_argument("aligned_r_squared: expected 16 x 3 matrices");
    }
    std::array<std::size_t, kOutputNeurons> perm{};
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = 0.0;
    std::vector<double> permuted(n);
    do {
        for (std::size_t i = 0; i < kInputNeurons; ++i) {
            for (std::size_t j = 0; j < kOutputNeurons; ++j) {
                permuted[i * kOutputNeurons + j] = b[i * kOutputNeurons + perm[j]];
            }
        }
        best = std::max(best, r_squared(a, permuted));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<std::pair<std::size_t, std::size_t>> match_spikes(std::span<const Millis> reference,
                                                               std::span<const Millis> test,
                                                               Millis window) {
    struct Candidate {
        double distance;
        std::size_t ref;
        std::size_t tst;
    };
    std::vector<Candidate> candidates;
    std::size_t lo = 0;
    for (std::size_t r = 0; r < reference.size(); ++r) {
        while (lo < test.size() && test[lo] < reference[r] - window) ++lo;
        for (std::size_t t = lo; t < test.size() && test[t] <= reference[r] + window; ++t) {
            candidates.push_back({std::abs(test[t] - reference[r]), r, t});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.distance < y.distance; });
    std::vector<bool> ref_used(reference.size()), test_used(test.size());
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& c : candidates) {
        if (ref_used[c.ref] || test_used[c.tst]) continue;
        ref_used[c.ref] = test_used[c.tst] = true;
        out.emplace_back(c.ref, c.tst);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<Millis> drive_neuron(const NeuronParams& params, std::span<const NanoAmps> pieces,
                                 Millis segment, Millis duration, Millis dt) {
    std::vector<Millis> spikes;
    NeuronState state{params.reset_potential, 0.0, std::nullopt};
    const auto steps = static_cast<long>(std::lround(duration / dt));
    const auto per_segment = static_cast<long>(std::lround(segment / dt));
    for (long k = 0; k < steps; ++k) {
        const Millis now = static_cast<double>(k) * dt;
        const auto piece = std::min(static_cast<std::size_t>(k / per_segment), pieces.size() - 1);
        const auto r = lif_step(state, params, pieces[piece], now, dt);
        state = r.state;
        if (r.spiked) spikes.push_back(now);
    }
    return spikes;
}

}  // namespace

EquivalenceReport validate_neuron(const RunConfig& config, Millis refractory,
                                  const NeuronValidationOptions& options) {
    if (options.fine_factor < 1) throw std::invalid_argument("validate_neuron: fine_factor < 1");
    NeuronParams params = config.input_neuron;
    params.refractory_period = refractory;
    params.validate();

    Rng rng(config.seed, RngStream::NeuronValidation);
    const auto n_pieces = static_cast<std::size_t>(std::ceil(options.duration / options.segment));
    std::vector<NanoAmps> pieces(std::max<std::size_t>(n_pieces, 1));
    for (auto& p : pieces) p = rng.uniform(0.0, options.current_max);

    const Millis fine_dt = config.dt / options.fine_factor;
    const auto reference = drive_neuron(params, pieces, options.segment, options.duration, fine_dt);
    const auto coarse = drive_neuron(params, pieces, options.segment, options.duration, config.dt);

    EquivalenceReport rep;
    rep.refractory = refractory;
    rep.reference_spikes = reference.size();
    rep.coarse_spikes = coarse.size();
    if (reference.size() < 2) return rep;

    rep.mean_isi = (reference.back() - reference.front()) / static_cast<double>(reference.size() - 1);
    const auto pairs = match_spikes(reference, coarse, 0.5 * rep.mean_isi);
    rep.matched = pairs.size();
    rep.missing_fraction = 1.0 - static_cast<double>(pairs.size()) / static_cast<double>(reference.size());
    if (!pairs.empty()) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& [r, t] : pairs) {
            const double d = coarse[t] - reference[r];
            sum += d;
            sum_sq += d * d;
        }
        const double n = static_cast<double>(pairs.size());
        rep.offset_mean = sum / n;
        rep.offset_std = std::sqrt(std::max(0.0, sum_sq / n - rep.offset_mean * rep.offset_mean));
    }
    rep.relative_offset_std = rep.offset_std / rep.mean_isi;
    return rep;
}

double shifted_oracle(Millis delta_t, const EffectiveAmplitudes& amp, const WaveformPair& waves) {
    if (delta_t >= 0.0) {
        return amp.plus * std::exp(-(delta_t - waves.post.plateau_width) / waves.pre.tail_tau);
    }
    return -amp.minus * std::exp(-(-delta_t - waves.pre.plateau_width) / waves.post.tail_tau);
}

StdpValidation validate_stdp(const RunConfig& config, int count, Millis max_delta) {
    const NetworkParams net = config.network_params();
    const Millis w_p = net.waves.pre.plateau_width;
    const Millis lo = w_p + 1.0;
    if (!(max_delta > lo)) throw std::invalid_argument("validate_stdp: max_delta too small");

    const auto amp = effective_amplitudes(net.waves, net.device);
    Rng rng(config.seed, RngStream::StdpValidation);
    StdpValidation out;
    out.points.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 0; k < count; ++k) {
        const double magnitude = rng.uniform(lo, max_delta);
        const Millis dt_pair = rng.uniform() < 0.5 ? -magnitude : magnitude;
        StdpPoint p;
        p.delta_t = dt_pair;
        p.hardware = superposed_stdp_response(dt_pair, net.waves, net.device, config.dt).delta_w;
        p.oracle = shifted_oracle(dt_pair, amp, net.waves);
        p.relative_error = std::abs(p.hardware - p.oracle) / std::abs(p.oracle);
        out.max_relative_error = std::max(out.max_relative_error, p.relative_error);
        out.points.push_back(p);
    }
    return out;
}

HoldoutSplit split_holdout(std::span<const EncodedSample> data, double test_fraction,
                           std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("split_holdout: test_fraction must be in (0, 1)");
    }
    Rng rng(seed, RngStream::Holdout);
    HoldoutSplit out;
    for (int label = 0; label < static_cast<int>(kIrisClasses); ++label) {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < data.size(); ++k) {
            if (data[k].label == label) idx.push_back(k);
        }
        rng.shuffle(std::span<std::size_t>(idx));
        const auto n_test = static_cast<std::size_t>(std::lround(test_fraction * static_cast<double>(idx.size())));
        std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
        std::sort(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            (k < n_test ? out.test : out.train).push_back(data[idx[k]]);
        }
    }
    return out;
}

TrainReport run_train(const RunConfig& config, std::span<const EncodedSample> dataset,
                      bool paired, std::span<const EncodedSample> evaluation_set) {
    TrainReport rep;
    rep.config = config;
    TrainOptions opt;
    opt.initial_weights = initial_weights(config);
    opt.evaluation_set = evaluation_set;
    rep.result = train(config, dataset, opt);
    rep.initial_accuracy = rep.result.initial_accuracy;
    rep.curve = AccuracyCurve::from(rep.result.accuracy);

    if (paired && config.mode == LearningMode::Hardware) {
        RunConfig twin = config;
        twin.mode = LearningMode::Reference;
        twin.log_spikes = false;
        const TrainResult ref = train(twin, dataset, opt);
        for (const auto& [epoch, w] : rep.result.snapshots) {
            if (auto it = ref.snapshots.find(epoch); it != ref.snapshots.end()) {
                rep.paired_r2[epoch] = r_squared(it->second, w);
            }
        }
    }
    return rep;
}

ScheduleSweep sweep_schedules(const RunConfig& config, std::span<const EncodedSample> dataset) {
    ScheduleSweep sweep;
    TrainOptions opt;
    opt.initial_weights = initial_weights(config);
    for (auto s : {UpdateSchedule::Immediate, UpdateSchedule::PostSample, UpdateSchedule::PostEpoch}) {
        RunConfig c = config;
        c.schedule = s;
        sweep.curves[s] = AccuracyCurve::from(train(c, dataset, opt).accuracy);
    }
    return sweep;
}

std::vector<IvTrace> rram_iv(const RunConfig& config, const IvOptions& options) {
    std::vector<IvTrace> traces;
    for (auto kind : {DeviceKind::Ideal, DeviceKind::Realistic}) {
        RunConfig c = config;
        c.device_model = kind;
        const DeviceParams d = c.device_params();
        traces.push_back({kind, dc_iv_sweep(d, d.g_min, options.v_min, options.v_max,
                                            options.ramp_rate, options.dt)});
    }
    return traces;
}

std::vector<EncodedSample> load_encoded_iris(const RunConfig& config,
                                             const std::optional<std::filesystem::path>& path) {
    const auto raw = load_iris(path ? *path : std::filesystem::path(MEMSNN_DATA_DIR) / "iris.csv");
    return encode_all(raw, fit_coder(raw, config.coder_i_max));
}

void write_accuracy_csv(std::ostream& os, const AccuracyCurve& curve) {
    os << "epoch,accuracy_pct\n";
    for (std::size_t e = 0; e < curve.per_epoch.size(); ++e) {
        os << e + 1 << ',' << curve.per_epoch[e] << '\n';
    }
}

void write_weights_csv(std::ostream& os, std::span<const double> weights) {
    if (weights.size() != kInputNeurons * kOutputNeurons) {
        throw std::invalid_argument("write_weights_csv: expected 16 x 3 weights");
    }
    os << "input";
    for (std::size_t j = 0; j < kOutputNeurons; ++j) os << ",out" << j;
    os << '\n';
    for (std::size_t i = 0; i < kInputNeurons; ++i) {
        os << i;
        for (std::size_t j = 0; j < kOutputNeurons; ++j) os << ',' << weights[i * kOutputNeurons + j];
        os << '\n';
    }
}

void write_spike_log_csv(std::ostream& os, const EventLog& log) {
    os << "time_ms,neuron_kind,neuron_id\n";
    for (const auto& r : log.records()) {
        if (r.kind != EventKind::Spike) continue;
        os << r.time << ',' << (r.neuron_kind == NeuronKind::Input ? "input" : "output") << ','
           << r.neuron << '\n';
    }
}

void write_stdp_csv(std::ostream& os, const StdpValidation& v) {
    os << "delta_t_ms,delta_w,oracle_delta_w,relative_error\n";
    for (const auto& p : v.points) {
        os << p.delta_t << ',' << p.hardware << ',' << p.oracle << ',' << p.relative_error << '\n';
    }
}

void write_schedule_csv(std::ostream& os, const ScheduleSweep& sweep) {
    os << "epoch";
    for (const auto& [s, _] : sweep.curves) os << ',' << to_string(s);
    os << '\n';
    std::size_t epochs = 0;
    for (const auto& [_, c] : sweep.curves) epochs = std::max(epochs, c.per_epoch.size());
    for (std::size_t e = 0; e < epochs; ++e) {
        os << e + 1;
        for (const auto& [_, c] : sweep.curves) {
            os << ',';
            if (e < c.per_epoch.size()) os << c.per_epoch[e];
        }
        os << '\n';
    }
}

void write_iv_traces_csv(std::ostream& os, std::span<const IvTrace> traces) {
    os << "device,voltage_V,current_A,conductance_S\n";
    for (const auto& t : traces) {
        for (const auto& p : t.points) {
            os << to_string(t.kind) << ',' << p.voltage << ',' << p.current * 1e-6 << ','
               << p.conductance * 1e-6 << '\n';
        }
    }
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace memsnn
