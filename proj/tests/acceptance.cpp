// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "memsnn/bench.hpp"

using namespace memsnn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 146/150 printed as 97.33; compare in sample counts to avoid rounding.
int correct_of(double pct, std::size_t n) {
    return static_cast<int>(std::lround(pct * static_cast<double>(n) / 100.0));
}

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4};

}  // namespace

int main() {
    const RunConfig base;
    const auto data = load_encoded_iris(base);
    const std::size_t n = data.size();

    // 1. Reference accuracy and runtime.
    std::map<std::uint64_t, TrainResult> reference;
    {
        RunConfig c = base;
        c.mode = LearningMode::Reference;
        c.seed = kSeeds[0];
        const auto t0 = Clock::now();
        reference[c.seed] = train(c, data);
        const double secs = seconds_since(t0);
        const auto curve = AccuracyCurve::from(reference[c.seed].accuracy);
        const int best = correct_of(curve.max, n);
        report(1, "reference accuracy", best >= 145 && secs < 60.0,
               fmt("max %.2f%% (%d/%zu, need >= 145), mean %.2f%%, %.1f s (need < 60 s)", curve.max,
                   best, n, curve.mean, secs));
    }
    for (std::size_t k = 1; k < std::size(kSeeds); ++k) {
        RunConfig c = base;
        c.mode = LearningMode::Reference;
        c.seed = kSeeds[k];
        reference[c.seed] = train(c, data);
    }

    // 2. Hardware, ideal device, immediate schedule, four seeds.
    std::map<std::uint64_t, TrainResult> hardware;
    {
        bool every_95 = true, one_hit = false;
        double mean_sum = 0.0;
        std::string per_seed;
        for (auto seed : kSeeds) {
            RunConfig c = base;
            c.seed = seed;
            hardware[seed] = train(c, data);
            const auto curve = AccuracyCurve::from(hardware[seed].accuracy);
            every_95 &= curve.max >= 95.0;
            one_hit |= correct_of(curve.max, n) >= 146;
            mean_sum += curve.mean;
            per_seed += fmt(" seed%llu max %.2f mean %.2f;", static_cast<unsigned long long>(seed),
                            curve.max, curve.mean);
        }
        const double mean = mean_sum / std::size(kSeeds);
        report(2, "hardware ideal immediate", every_95 && one_hit && std::abs(mean - 90.0) <= 5.0,
               fmt("%s every max >= 95: %s, one >= 146/150: %s, mean of means %.2f (need 90 +- 5)",
                   per_seed.c_str(), every_95 ? "yes" : "no", one_hit ? "yes" : "no", mean));
    }

    // 3. Schedule robustness from the seed-1 initial weights.
    {
        const auto immediate = AccuracyCurve::from(hardware[kSeeds[0]].accuracy);
        bool ok = true;
        std::string detail;
        for (auto s : {UpdateSchedule::PostSample, UpdateSchedule::PostEpoch}) {
            RunConfig c = base;
            c.seed = kSeeds[0];
            c.schedule = s;
            const auto curve = AccuracyCurve::from(train(c, data).accuracy);
            ok &= curve.max >= 95.0 && std::abs(curve.mean - immediate.mean) <= 5.0;
            detail += fmt("%s max %.2f mean %.2f; ", to_string(s).c_str(), curve.max, curve.mean);
        }
        report(3, "schedule robustness", ok,
               detail + fmt("immediate mean %.2f (need max >= 95, |mean diff| <= 5)", immediate.mean));
    }

    // 4. Realistic device on matched seeds.
    {
        double max_sum = 0.0, mean_sum = 0.0;
        bool below = true;
        std::string per_seed;
        for (auto seed : kSeeds) {
            RunConfig c = base;
            c.seed = seed;
            c.device_model = DeviceKind::Realistic;
            const auto curve = AccuracyCurve::from(train(c, data).accuracy);
            const auto ideal = AccuracyCurve::from(hardware[seed].accuracy);
            below &= curve.max < ideal.max;
            max_sum += curve.max;
            mean_sum += curve.mean;
            per_seed += fmt(" seed%llu max %.2f mean %.2f;", static_cast<unsigned long long>(seed),
                            curve.max, curve.mean);
        }
        const double max_avg = max_sum / std::size(kSeeds);
        const double mean_avg = mean_sum / std::size(kSeeds);
        report(4, "realistic device",
               std::abs(max_avg - 85.0) <= 5.0 && std::abs(mean_avg - 75.0) <= 7.0 && below,
               fmt("%s average max %.2f (need 85 +- 5), average mean %.2f (need 75 +- 7), below ideal: %s",
                   per_seed.c_str(), max_avg, mean_avg, below ? "yes" : "no"));
    }

    // 5. Superposed STDP against the shifted window.
    {
        const auto t0 = Clock::now();
        const auto v = validate_stdp(base, 200);
        const double secs = seconds_since(t0);
        report(5, "STDP equivalence", v.max_relative_error < 0.02 && secs < 10.0,
               fmt("max relative deviation %.4f over 200 pairs (need < 0.02), %.2f s", v.max_relative_error,
                   secs));
    }

    // 6. Paired weight trajectories.
    {
        bool ok = true;
        std::string detail;
        for (int epoch : {10, 23}) {
            const double r2 = r_squared(reference[kSeeds[0]].snapshots.at(epoch),
                                        hardware[kSeeds[0]].snapshots.at(epoch));
            ok &= r2 > 0.95;
            detail += fmt("epoch %d R^2 %.4f; ", epoch, r2);
        }
        report(6, "weight trajectory equivalence", ok, detail + "need > 0.95");
    }

    // 7. Final weights from different seeds.
    {
        double worst = 1.0;
        for (std::size_t a = 0; a < std::size(kSeeds); ++a) {
            for (std::size_t b = a + 1; b < std::size(kSeeds); ++b) {
                worst = std::min(worst, aligned_r_squared(reference[kSeeds[a]].final_weights,
                                                          reference[kSeeds[b]].final_weights));
            }
        }
        report(7, "initial-condition insensitivity", worst > 0.9,
               fmt("minimum pairwise aligned R^2 %.4f (need > 0.9)", worst));
    }

    // 8. Spike timing at coarse vs fine dt.
    {
        const auto r = validate_neuron(base, 5.0);
        const auto r0 = validate_neuron(base, 0.0);
        report(8, "spike-time fidelity", r.relative_offset_std < 0.05 && r.missing_fraction < 0.01,
               fmt("5 ms refractory: offset std / ISI %.4f (need < 0.05), missing %.4f (need < 0.01); "
                   "0 ms refractory missing %.4f",
                   r.relative_offset_std, r.missing_fraction, r0.missing_fraction));
    }

    // 9. Invariants.
    {
        const auto t0 = Clock::now();
        std::vector<std::string> broken;
        RunConfig c = base;
        c.epochs = 2;
        std::vector<EncodedSample> small;
        for (std::size_t k = 0; k < n; k += 5) small.push_back(data[k]);

        // Read-path isolation: without a transfer the recognize array is frozen.
        for (auto mode : {LearningMode::Hardware, LearningMode::Reference}) {
            RunConfig m = c;
            m.mode = mode;
            TwoArrayNetwork net(m.network_params());
            net.set_weights(initial_weights(m));
            const auto frozen = net.recognize_array();
            PresentOptions opt;
            for (const auto& s : small) {
                opt.teacher_class = s.label;
                net.run_sample(s, m.sample_duration, opt);
                if (!(net.recognize_array() == frozen)) broken.push_back("read-path isolation");
            }
            if (net.learn_array() == frozen) broken.push_back("learning inactive");
        }

        // Evaluation purity.
        {
            TwoArrayNetwork net(c.network_params());
            net.set_weights(initial_weights(c));
            const auto learn = net.learn_array();
            const auto recognize = net.recognize_array();
            evaluate(net, small, c);
            if (!(net.learn_array() == learn && net.recognize_array() == recognize)) {
                broken.push_back("evaluation purity");
            }
        }

        // Device clamping under extreme drive.
        for (auto d : {DeviceParams::ideal(), DeviceParams::realistic()}) {
            DeviceState s{d.g_min};
            for (int k = 0; k < 10000; ++k) {
                s = apply_voltage(s, d, (k / 500) % 2 ? -10.0 : 10.0, 1.0);
                if (s.conductance < d.g_min || s.conductance > d.g_max) {
                    broken.push_back("device clamping");
                    break;
                }
            }
        }

        // Determinism.
        {
            RunConfig logged = c;
            logged.log_spikes = true;
            const auto a = train(logged, small);
            const auto b = train(logged, small);
            if (!(a.accuracy == b.accuracy && a.final_weights == b.final_weights && a.log == b.log)) {
                broken.push_back("determinism");
            }
        }
        const double secs = seconds_since(t0);
        std::string detail = broken.empty() ? "all invariants hold" : "broken:";
        for (const auto& b : broken) detail += " " + b;
        report(9, "invariant suites", broken.empty() && secs < 60.0, detail + fmt(", %.1f s", secs));
    }

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
