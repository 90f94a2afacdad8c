#pragma once

// Unit system used throughout the simulator.
//
//   time         ms
//   voltage      V
//   current      nA
//   conductance  uS
//   resistance   MOhm
//   capacitance  nF
//
// With these units R*C is in ms, and nA * MOhm is mV.

namespace memsnn {

using Millis = double;
using Volts = double;
using NanoAmps = double;
using MicroSiemens = double;

inline constexpr double kMillivoltsToVolts = 1e-3;
inline constexpr double kMicroAmpsToNanoAmps = 1e3;

}  // namespace memsnn
