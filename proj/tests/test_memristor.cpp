#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <sstream>

#include "memsnn/memristor.hpp"

using namespace memsnn;

TEST_CASE("conductance stays within bounds under any drive") {
    for (auto p : {DeviceParams::ideal(), DeviceParams::realistic()}) {
        DeviceState s{p.g_min};
        for (int k = 0; k < 20000; ++k) {
            const double v = (k / 1000) % 2 == 0 ? 5.0 : -5.0;
            s = apply_voltage(s, p, v, 0.5);
            CHECK(s.conductance >= p.g_min);
            CHECK(s.conductance <= p.g_max);
        }
    }
}

TEST_CASE("read is non-destructive and ohmic") {
    DeviceState s{10.0};
    CHECK(read_current(s, 0.3) == doctest::Approx(3.0));
    CHECK(read_current(s, 0.0) == 0.0);
    CHECK(s.conductance == 10.0);
    const auto p = DeviceParams::ideal();
    CHECK(apply_voltage(s, p, 0.99, 1000.0).conductance == 10.0);
    CHECK(apply_voltage(s, p, -0.99, 1000.0).conductance == 10.0);
}

TEST_CASE("ideal device is linear in excess voltage and duration") {
    const auto p = DeviceParams::ideal();
    const auto dg = [&](double excess, double duration) {
        DeviceState s{20.0};
        const int steps = static_cast<int>(duration / 0.05 + 0.5);
        for (int k = 0; k < steps; ++k) s = apply_voltage(s, p, p.threshold_pos + excess, 0.05);
        return s.conductance - 20.0;
    };
    CHECK(dg(0.1, 1.0) == doctest::Approx(p.rate_pos * 0.1 * 1.0));
    CHECK(dg(0.2, 1.0) == doctest::Approx(2.0 * dg(0.1, 1.0)));
    CHECK(dg(0.1, 2.0) == doctest::Approx(2.0 * dg(0.1, 1.0)));
}

TEST_CASE("ideal device is symmetric") {
    const auto p = DeviceParams::ideal();
    const DeviceState s{26.0};
    const double up = apply_voltage(s, p, 1.3, 1.0).conductance - 26.0;
    const double down = 26.0 - apply_voltage(s, p, -1.3, 1.0).conductance;
    CHECK(up == doctest::Approx(down));

    DeviceParams bad = p;
    bad.threshold_neg_high = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("realistic reset threshold grows as conductance falls") {
    const auto p = DeviceParams::realistic();
    CHECK(effective_thresholds({p.g_max}, p).neg == doctest::Approx(p.threshold_neg_low));
    CHECK(effective_thresholds({p.g_min}, p).neg == doctest::Approx(p.threshold_neg_high));
    double last = 0.0;
    for (double g = p.g_max; g >= p.g_min; g -= 1.0) {
        const double neg = effective_thresholds({g}, p).neg;
        CHECK(neg >= last);
        last = neg;
        CHECK(effective_thresholds({g}, p).pos == p.threshold_pos);
    }
}

TEST_CASE("realistic updates shrink near the bounds") {
    const auto p = DeviceParams::realistic();
    const double near_top = apply_voltage({48.0}, p, 1.5, 1.0).conductance - 48.0;
    const double middle = apply_voltage({26.0}, p, 1.5, 1.0).conductance - 26.0;
    CHECK(near_top < middle);
    CHECK(near_top > 0.0);
}

TEST_CASE("sub-threshold IV sweep keeps conductance constant") {
    const auto p = DeviceParams::ideal();
    const auto sweep = dc_iv_sweep(p, 20.0, -0.9, 0.9, 0.01, 0.05);
    REQUIRE(sweep.size() > 10);
    for (const auto& pt : sweep) {
        CHECK(pt.conductance == 20.0);
        if (pt.voltage == 0.0) CHECK(pt.current == 0.0);
    }
    CHECK(sweep.front().voltage == 0.0);
    CHECK(sweep.back().voltage == 0.0);
}

TEST_CASE("supra-threshold sweep traces a hysteresis loop") {
    const auto p = DeviceParams::ideal();
    const auto sweep = dc_iv_sweep(p, p.g_min, -2.5, 2.0, 0.01, 0.05);
    double hi = 0.0;
    for (const auto& pt : sweep) hi = std::max(hi, pt.conductance);
    CHECK(hi / p.g_min == doctest::Approx(25.0));
    CHECK(sweep.back().conductance == doctest::Approx(p.g_min));

    std::ostringstream os;
    write_iv_csv(os, sweep);
    CHECK(os.str().rfind("voltage_V,current_A,conductance_S\n", 0) == 0);
    CHECK_THROWS_AS(dc_iv_sweep(p, 10.0, 0.5, 1.0, 0.01, 0.05), std::invalid_argument);
}
