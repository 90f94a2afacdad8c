#pragma once

#include <iosfwd>
#include <vector>

#include "memsnn/units.hpp"

namespace memsnn {

enum class DeviceKind { Ideal, Realistic };

/// Behavioral RRAM parameters. Conductances in uS, thresholds in V, rates
/// in uS per (V * ms) of over-threshold excess.
///
/// The ideal model has one symmetric threshold and a constant rate. The
/// realistic model keeps the set threshold fixed while the reset threshold
/// magnitude grows linearly from threshold_neg_low (at g_max) to
/// threshold_neg_high (at g_min), and both polarities saturate softly as the
/// conductance approaches the corresponding bound.
struct DeviceParams {
    DeviceKind kind = DeviceKind::Ideal;
    MicroSiemens g_min = 2.0;
    MicroSiemens g_max = 50.0;
    Volts threshold_pos = 1.0;
    Volts threshold_neg_low = 1.0;
    Volts threshold_neg_high = 1.0;
    double rate_pos = 1.0;
    double rate_neg = 1.0;

    void validate() const;
    MicroSiemens range() const { return g_max - g_min; }

    static DeviceParams ideal();
    static DeviceParams realistic();
};

struct DeviceState {
    MicroSiemens conductance = 0.0;
};

struct Thresholds {
    Volts pos;
    Volts neg;  // magnitude
};

/// Ohmic read; the result is in uA for uS * V.
double read_current(const DeviceState& state, Volts voltage);

Thresholds effective_thresholds(const DeviceState& state, const DeviceParams& params);

/// Integrates the threshold rate law for a constant voltage held over dt.
DeviceState apply_voltage(const DeviceState& state, const DeviceParams& params,
                          Volts voltage, Millis dt);

struct IvPoint {
    Volts voltage;
    double current;  // uA
    MicroSiemens conductance;
};

/// Triangular DC sweep 0 -> v_max -> v_min -> 0 at `ramp_rate` V/ms.
std::vector<IvPoint> dc_iv_sweep(const DeviceParams& params, MicroSiemens initial_g,
                                 Volts v_min, Volts v_max, double ramp_rate, Millis dt);

/// Writes `voltage_V,current_A,conductance_S` rows in SI units.
void write_iv_csv(std::ostream& os, const std::vector<IvPoint>& sweep);

}  // namespace memsnn
