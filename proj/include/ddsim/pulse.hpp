#pragma once

#include "ddsim/spin.hpp"

namespace ddsim {

// How pulses are applied: instantaneous rotations (delta) or square pulses
// of duration t_p whose generator includes the dephasing field (finite).
enum class PulseMode { delta, finite };

// One pi pulse. nominal_angle is pi for every catalog sequence; eps is the
// fractional flip-angle error, offset an optional deliberate detuning that
// acts only during the pulse (finite mode).
struct PulseSpec {
    double phase = 0.0;                          // rad, azimuth of the rotation axis
    double nominal_angle = 3.14159265358979323846;  // rad
    double t_p = 0.0;                            // s, pulse duration (finite mode)
    double eps = 0.0;                            // flip-angle error
    double offset = 0.0;                         // rad/s, detuning during the pulse
};

// Propagator of one imperfect pulse. delta: exp(-i (1+eps) * angle * S_phi),
// the dephasing field is frozen. finite: exp(-i (dw Sz + w1 S_phi) t_p) with
// w1 = (1+eps) * angle / t_p and dw the field value during the pulse plus the
// pulse's own offset. Throws std::invalid_argument for t_p <= 0 in finite mode.
Mat2 imperfect_pulse(const PulseSpec& p, double delta_omega_z, PulseMode mode);

}  // namespace ddsim
