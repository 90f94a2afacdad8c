#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "memsnn/plasticity.hpp"
#include "memsnn/rng.hpp"

using namespace memsnn;

TEST_CASE("STDP window values") {
    StdpParams p;
    CHECK(stdp_oracle(20.0, p).delta_w == doctest::Approx(0.01 * std::exp(-1.0)));
    CHECK(stdp_oracle(20.0, p).delta_w == doctest::Approx(0.003679).epsilon(1e-3));
    CHECK(stdp_oracle(-20.0, p).delta_w == doctest::Approx(-0.01 * std::exp(-1.0)));
    CHECK(stdp_oracle(0.0, p).delta_w == doctest::Approx(0.01));
    CHECK(stdp_oracle(-1e-9, p).delta_w < 0.0);
    StdpParams bad;
    bad.tau_minus = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("calibrated rates give the requested effective amplitudes") {
    StdpParams stdp;
    stdp.a_plus = 0.012;
    stdp.a_minus = 0.019;
    const auto device = DeviceParams::ideal();
    const auto waves = synthesize_waveforms(stdp, device, 1.0);
    const auto cal = calibrate_rates(device, waves, stdp);
    const auto eff = effective_amplitudes(waves, cal);
    CHECK(eff.plus == doctest::Approx(stdp.a_plus * std::exp(-1.0 / stdp.tau_plus)));
    CHECK(eff.minus == doctest::Approx(stdp.a_minus * std::exp(-1.0 / stdp.tau_minus)));
    // A lone waveform never crosses threshold.
    CHECK(waves.pre.tail_amplitude < device.threshold_pos);
    CHECK(waves.post.plateau_height <= device.threshold_pos);
}

TEST_CASE("superposed response reproduces the window beyond the plateau") {
    StdpParams stdp;
    auto device = DeviceParams::ideal();
    const auto waves = synthesize_waveforms(stdp, device, 1.0);
    device = calibrate_rates(device, waves, stdp);
    for (double dt_pair : {2.0, 5.0, 17.3, 40.0, 90.0}) {
        const double pot = superposed_stdp_response(dt_pair, waves, device, 0.05).delta_w;
        const double dep = superposed_stdp_response(-dt_pair, waves, device, 0.05).delta_w;
        CHECK(pot == doctest::Approx(0.01 * std::exp(-dt_pair / 20.0)).epsilon(0.01));
        CHECK(dep == doctest::Approx(-0.01 * std::exp(-dt_pair / 20.0)).epsilon(0.01));
    }
}

TEST_CASE("unpaired spikes leave the device untouched") {
    StdpParams stdp;
    auto device = DeviceParams::ideal();
    const auto waves = synthesize_waveforms(stdp, device, 1.0);
    device = calibrate_rates(device, waves, stdp);
    // Far apart: each neuron's waveform alone is sub-threshold.
    CHECK(superposed_stdp_response(1000.0, waves, device, 0.05).delta_w == doctest::Approx(0.0).epsilon(1e-12));
}

namespace {

// Quadratic nearest-neighbor reference: scan all spikes for the latest partner.
double brute_pairs(const std::vector<double>& pre, const std::vector<double>& post, const StdpParams& p) {
    double total = 0.0;
    for (double tp : post) {
        double best = -1e300;
        for (double tr : pre) if (tr <= tp) best = std::max(best, tr);
        if (best > -1e300) total += stdp_oracle(tp - best, p).delta_w;
    }
    for (double tr : pre) {
        double best = -1e300;
        for (double tp : post) if (tp < tr) best = std::max(best, tp);
        if (best > -1e300) total += stdp_oracle(best - tr, p).delta_w;
    }
    return total;
}

std::vector<double> random_train(Rng& rng, int n) {
    std::vector<double> t;
    for (int k = 0; k < n; ++k) t.push_back(std::round(rng.uniform(0.0, 200.0) * 20.0) / 20.0);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

}  // namespace

TEST_CASE("nearest-neighbor accumulation matches brute force") {
    StdpParams p;
    p.a_minus = 0.015;
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pre = random_train(rng, 1 + trial % 13);
        const auto post = random_train(rng, 1 + trial % 7);
        CHECK(pair_stdp_accumulate(pre, post, p).delta_w == doctest::Approx(brute_pairs(pre, post, p)));
    }
    // Coincident pair counts once, as potentiation.
    const std::vector<double> t{10.0};
    CHECK(pair_stdp_accumulate(t, t, p).delta_w == doctest::Approx(p.a_plus));
}
