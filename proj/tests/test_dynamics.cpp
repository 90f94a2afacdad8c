#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "memsnn/dynamics.hpp"

using namespace memsnn;

namespace {

// Spike times of one neuron under constant current, simulated with lif_step.
std::vector<double> simulate(const NeuronParams& p, double current, double dt, double duration) {
    std::vector<double> spikes;
    NeuronState s{p.reset_potential, 0.0, std::nullopt};
    const long steps = std::lround(duration / dt);
    for (long k = 0; k < steps; ++k) {
        const double now = k * dt;
        auto r = lif_step(s, p, current, now, dt);
        s = r.state;
        if (r.spiked) spikes.push_back(now);
    }
    return spikes;
}

}  // namespace

TEST_CASE("constant current ISI matches the membrane solution") {
    NeuronParams p;
    // V(t) = IR (1 - e^{-t/RC}) reaches 0.1 V at t = RC ln(IR / (IR - 0.1)).
    const double ir = 15.0 * 10.0 * 1e-3;
    const double expected = 5.0 + 10.0 * std::log(ir / (ir - 0.1));
    REQUIRE(constant_current_isi(p, 15.0).has_value());
    CHECK(*constant_current_isi(p, 15.0) == doctest::Approx(expected).epsilon(1e-12));

    const auto spikes = simulate(p, 15.0, 0.001, 400.0);
    REQUIRE(spikes.size() > 5);
    const double isi = (spikes.back() - spikes.front()) / static_cast<double>(spikes.size() - 1);
    CHECK(isi == doctest::Approx(expected).epsilon(2e-3));
}

TEST_CASE("subthreshold current never fires") {
    NeuronParams p;
    CHECK_FALSE(constant_current_isi(p, 9.9).has_value());
    CHECK(simulate(p, 9.9, 0.05, 500.0).empty());
}

TEST_CASE("membrane is held at reset for the whole refractory period") {
    NeuronParams p;
    NeuronState s;
    double t_spike = -1.0;
    const double dt = 0.05;
    for (long k = 0; k < 4000; ++k) {
        const double now = k * dt;
        auto r = lif_step(s, p, 20.0, now, dt);
        if (t_spike >= 0.0 && now < t_spike + p.refractory_period - 1e-9) {
            CHECK(r.state.membrane_potential == p.reset_potential);
            CHECK_FALSE(r.spiked);
        }
        if (r.spiked) {
            CHECK(r.state.last_spike_time == now);
            CHECK(r.state.refractory_until == doctest::Approx(now + p.refractory_period));
            t_spike = now;
        }
        s = r.state;
    }
    CHECK(t_spike > 0.0);
}

TEST_CASE("zero refractory fires more often than 5 ms refractory") {
    NeuronParams fast;
    fast.refractory_period = 0.0;
    NeuronParams slow;
    CHECK(simulate(fast, 20.0, 0.05, 500.0).size() > simulate(slow, 20.0, 0.05, 500.0).size());
}

TEST_CASE("lif_step rejects bad input") {
    NeuronParams p;
    NeuronState s;
    CHECK_THROWS_AS(lif_step(s, p, std::nan(""), 0.0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(lif_step(s, p, INFINITY, 0.0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(lif_step(s, p, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lif_step(s, p, 1.0, 0.0, 0.6), std::invalid_argument);  // > tau_m / 20
    NeuronParams bad;
    bad.threshold = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.refractory_period = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("alpha kernel peak and shape") {
    AlphaParams a;
    CHECK(alpha_value(0.0, a) == 0.0);

    double best_t = 0.0, best_v = -1.0;
    for (int k = 0; k <= 400000; ++k) {
        const double t = k * 1e-4;
        const double v = std::exp(-t / 10.0) - std::exp(-t / 2.5);
        if (v > best_v) {
            best_v = v;
            best_t = t;
        }
    }
    CHECK(a.peak_time() == doctest::Approx(best_t).epsilon(1e-3));
    CHECK(alpha_value(a.peak_time(), a) == doctest::Approx(best_v).epsilon(1e-9));
    CHECK(alpha_value(200.0, a) < 1e-8);

    AlphaParams bad;
    bad.tau1 = 2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("alpha generator equals direct superposition") {
    AlphaParams a;
    const double dt = 0.05;
    AlphaGenerator gen(a, dt);
    std::vector<double> spikes;
    for (int k = 0; k < 3000; ++k) {
        const double now = k * dt;
        const bool spike = k % 237 == 0 || k % 91 == 0;
        if (spike) spikes.push_back(now);
        gen.step(spike);
        CHECK(gen.value() == doctest::Approx(alpha_superpose(spikes, now, a)).epsilon(1e-9));
    }
    gen.reset();
    CHECK(gen.value() == 0.0);
}

TEST_CASE("waveform plateau then tail") {
    WaveformParams w;
    WaveformState s;
    CHECK(waveform_value(s, w, 5.0) == 0.0);
    s.trigger(10.0);
    CHECK(waveform_value(s, w, 10.0) == w.plateau_height);
    CHECK(waveform_value(s, w, 10.95) == w.plateau_height);
    CHECK(waveform_value(s, w, 11.0) == doctest::Approx(-w.tail_amplitude));
    CHECK(waveform_value(s, w, 11.0 + w.tail_tau) ==
          doctest::Approx(-w.tail_amplitude * 0.36787944117144233));

    s.trigger(30.0);  // retrigger overrides the old tail
    CHECK(waveform_value(s, w, 30.5) == w.plateau_height);
    s.reset();
    CHECK(waveform_value(s, w, 31.0) == 0.0);
}
