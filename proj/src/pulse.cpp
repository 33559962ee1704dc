#include "ddsim/pulse.hpp"

#include <stdexcept>

namespace ddsim {

Mat2 imperfect_pulse(const PulseSpec& p, double delta_omega_z, PulseMode mode) {
    if (mode == PulseMode::delta) {
        return rotation_propagator(p.phase, (1.0 + p.eps) * p.nominal_angle);
    }
    if (!(p.t_p > 0)) throw std::invalid_argument("imperfect_pulse: t_p must be > 0 in finite mode");
    const double w1 = (1.0 + p.eps) * p.nominal_angle / p.t_p;
    const double dw = delta_omega_z + p.offset;
    Mat2 h = cplx(dw) * spin_z() + cplx(w1) * spin_phi(p.phase);
    return propagator(h, p.t_p);
}

}  // namespace ddsim
