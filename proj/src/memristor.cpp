#include "memsnn/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace memsnn {

void DeviceParams::validate() const {
    if (!(g_min > 0.0 && g_max > g_min)) {
        throw std::invalid_argument("device: require 0 < g_min < g_max");
    }
    if (!(threshold_pos > 0.0)) throw std::invalid_argument("device: threshold_pos must be > 0");
    if (!(threshold_neg_low > 0.0 && threshold_neg_high >= threshold_neg_low)) {
        throw std::invalid_argument("device: require threshold_neg_high >= threshold_neg_low > 0");
    }
    if (kind == DeviceKind::Ideal &&
        (threshold_neg_low != threshold_pos || threshold_neg_high != threshold_pos)) {
        throw std::invalid_argument("device: ideal model requires symmetric thresholds");
    }
    if (!(rate_pos > 0.0 && rate_neg > 0.0)) {
        throw std::invalid_argument("device: rates must be > 0");
    }
}

DeviceParams DeviceParams::ideal() { return DeviceParams{}; }

DeviceParams DeviceParams::realistic() {
    DeviceParams p;
    p.kind = DeviceKind::Realistic;
    p.threshold_neg_low = 1.0;
    p.threshold_neg_high = 1.8;
    return p;
}

double read_current(const DeviceState& state, Volts voltage) {
    return state.conductance * voltage;
}

Thresholds effective_thresholds(const DeviceState& state, const DeviceParams& p) {
    if (p.kind == DeviceKind::Ideal) return {p.threshold_pos, p.threshold_pos};
    const double g = std::clamp(state.conductance, p.g_min, p.g_max);
    const double resistive = (p.g_max - g) / p.range();
    return {p.threshold_pos,
            p.threshold_neg_low + (p.threshold_neg_high - p.threshold_neg_low) * resistive};
}

DeviceState apply_voltage(const DeviceState& state, const DeviceParams& p, Volts voltage,
                          Millis dt) {
    const auto [v_pos, v_neg] = effective_thresholds(state, p);
    const double g = state.conductance;
    double dg = 0.0;
    if (voltage > v_pos) {
        const double room = p.kind == DeviceKind::Ideal ? 1.0 : (p.g_max - g) / p.range();
        dg = p.rate_pos * (voltage - v_pos) * dt * room;
    } else if (voltage < -v_neg) {
        const double room = p.kind == DeviceKind::Ideal ? 1.0 : (g - p.g_min) / p.range();
        dg = -p.rate_neg * (-voltage - v_neg) * dt * room;
    } else {
        return state;
    }
    return {std::clamp(g + dg, p.g_min, p.g_max)};
}

std::vector<IvPoint> dc_iv_sweep(const DeviceParams& params, MicroSiemens initial_g,
                                 Volts v_min, Volts v_max, double ramp_rate, Millis dt) {
    if (!(v_min < 0.0 && v_max > 0.0)) {
        throw std::invalid_argument("dc_iv_sweep: require v_min < 0 < v_max");
    }
    if (!(ramp_rate > 0.0 && dt > 0.0)) {
        throw std::invalid_argument("dc_iv_sweep: ramp_rate and dt must be > 0");
    }

    // Leg endpoints of the triangle, visited in order.
    const double legs[] = {v_max, v_min, 0.0};
    const double dv = ramp_rate * dt;

    std::vector<IvPoint> out;
    DeviceState state{std::clamp(initial_g, params.g_min, params.g_max)};
    double v = 0.0;
    out.push_back({v, read_current(state, v), state.conductance});
    for (double target : legs) {
        const double span = std::abs(target - v);
        const auto steps = static_cast<long>(std::ceil(span / dv - 1e-9));
        const double start = v;
        for (long k = 1; k <= steps; ++k) {
            v = k == steps ? target : start + (target - start) * static_cast<double>(k) / steps;
            state = apply_voltage(state, params, v, dt);
            out.push_back({v, read_current(state, v), state.conductance});
        }
    }
    return out;
}

void write_iv_csv(std::ostream& os, const std::vector<IvPoint>& sweep) {
    os << "voltage_V,current_A,conductance_S\n";
    for (const auto& pt : sweep) {
        os << pt.voltage << ',' << pt.current * 1e-6 << ',' << pt.conductance * 1e-6 << '\n';
    }
}

}  // namespace memsnn
