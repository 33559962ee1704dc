#include "ddsim/spin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddsim {

namespace {
constexpr cplx kI{0.0, 1.0};
}

double Mat2::frobenius_norm() const {
    double s = 0;
    for (const auto& v : m) s += std::norm(v);
    return std::sqrt(s);
}

Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

double unitarity_residual(const Mat2& u) { return (u.dagger() * u - Mat2::identity()).frobenius_norm(); }

double hermiticity_residual(const Mat2& h) { return (h - h.dagger()).frobenius_norm(); }

Mat2 pauli_x() { return {{cplx(0), cplx(1), cplx(1), cplx(0)}}; }
Mat2 pauli_y() { return {{cplx(0), -kI, kI, cplx(0)}}; }
Mat2 pauli_z() { return {{cplx(1), cplx(0), cplx(0), cplx(-1)}}; }
Mat2 spin_x() { return cplx(0.5) * pauli_x(); }
Mat2 spin_y() { return cplx(0.5) * pauli_y(); }
Mat2 spin_z() { return cplx(0.5) * pauli_z(); }

Mat2 spin_phi(double phase) {
    const double c = std::cos(phase), s = std::sin(phase);
    // (0, (c - i s)/2; (c + i s)/2, 0)
    return {{cplx(0), cplx(0.5 * c, -0.5 * s), cplx(0.5 * c, 0.5 * s), cplx(0)}};
}

std::array<double, 3> spin_components(const Mat2& h) {
    // h_k = 2 Re tr(H S_k) = Re tr(H sigma_k)
    const double hx = std::real(h.m[1] + h.m[2]);
    const double hy = std::real(kI * (h.m[1] - h.m[2]));
    const double hz = std::real(h.m[0] - h.m[3]);
    return {hx, hy, hz};
}

Mat2 propagator(const Mat2& h, double t) {
    // H = c0*1 + v.sigma with real c0, v for Hermitian H.
    const double c0 = 0.5 * std::real(h.trace());
    const double vx = 0.5 * std::real(h.m[1] + h.m[2]);
    const double vy = 0.5 * std::real(kI * (h.m[1] - h.m[2]));
    const double vz = 0.5 * std::real(h.m[0] - h.m[3]);
    const double v = std::sqrt(vx * vx + vy * vy + vz * vz);

    const cplx phase = std::exp(-kI * c0 * t);
    const double a = v * t;
    const double c = std::cos(a);
    // sin(a)/v, finite as v -> 0 (equals t in the limit)
    const double sv = (v > 0) ? std::sin(a) / v : t;

    Mat2 u;
    u.m[0] = phase * (cplx(c) - kI * sv * vz);
    u.m[1] = phase * (-kI * sv * cplx(vx, -vy));
    u.m[2] = phase * (-kI * sv * cplx(vx, vy));
    u.m[3] = phase * (cplx(c) + kI * sv * vz);
    return u;
}

Mat2 rotation_propagator(double phase, double angle) {
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    const double nx = std::cos(phase), ny = std::sin(phase);
    Mat2 u;
    u.m[0] = cplx(c);
    u.m[1] = -kI * s * cplx(nx, -ny);
    u.m[2] = -kI * s * cplx(nx, ny);
    u.m[3] = cplx(c);
    return u;
}

namespace {

// Reduce U to its SU(2) representative with cos(theta/2) >= 0 and return
// (cos(theta/2), sin(theta/2) * axis).
struct Su2Decomp {
    double c;
    std::array<double, 3> w;
    double s;
};

Su2Decomp su2_decompose(const Mat2& u) {
    const cplx det = u.det();
    const double gamma = 0.5 * std::arg(det);
    Mat2 v = std::exp(-kI * gamma) * u;
    if (std::real(v.trace()) < 0) v = cplx(-1) * v;

    Su2Decomp d;
    d.c = std::clamp(0.5 * std::real(v.trace()), -1.0, 1.0);
    // V = c*1 - i s n.sigma  =>  s n_k = Re[(i/2) tr(V sigma_k)]
    d.w[0] = std::real(kI * cplx(0.5) * (v.m[1] + v.m[2]));
    d.w[1] = std::real(kI * cplx(0.5) * (kI * (v.m[1] - v.m[2])));
    d.w[2] = std::real(kI * cplx(0.5) * (v.m[0] - v.m[3]));
    d.s = std::sqrt(d.w[0] * d.w[0] + d.w[1] * d.w[1] + d.w[2] * d.w[2]);
    return d;
}

}  // namespace

double rotation_angle(const Mat2& u) {
    const Su2Decomp d = su2_decompose(u);
    return 2.0 * std::atan2(d.s, d.c);
}

double unitary_fidelity(const Mat2& u, const Mat2& v) { return 0.5 * std::abs((u.dagger() * v).trace()); }

Mat2 effective_hamiltonian(const Mat2& u, double tau_c) {
    if (!(tau_c > 0)) throw std::invalid_argument("effective_hamiltonian: tau_c must be > 0");
    const Su2Decomp d = su2_decompose(u);
    const double theta = 2.0 * std::atan2(d.s, d.c);
    constexpr double kPi = 3.14159265358979323846;
    if (std::abs(kPi - theta) < 1e-6)
        throw std::domain_error("effective_hamiltonian: rotation angle within 1e-6 of pi, principal branch ambiguous");

    Mat2 h = Mat2::zero();
    if (d.s > 0) {
        const double scale = theta / (tau_c * d.s);
        const Mat2 sx = spin_x(), sy = spin_y(), sz = spin_z();
        for (int i = 0; i < 4; ++i)
            h.m[i] = scale * (d.w[0] * sx.m[i] + d.w[1] * sy.m[i] + d.w[2] * sz.m[i]);
    }
    return h;
}

QubitState QubitState::from_bloch(double nx, double ny, double nz) {
    QubitState s;
    s.rho.m[0] = cplx(0.5 * (1 + nz));
    s.rho.m[1] = cplx(0.5 * nx, -0.5 * ny);
    s.rho.m[2] = cplx(0.5 * nx, 0.5 * ny);
    s.rho.m[3] = cplx(0.5 * (1 - nz));
    return s;
}

std::array<double, 3> QubitState::bloch() const { return spin_components(rho); }

double QubitState::trace_residual() const { return std::abs(rho.trace() - cplx(1)); }

QubitState evolve(const QubitState& s, const Mat2& u) { return {u * s.rho * u.dagger()}; }

double expectation(const QubitState& s, const Mat2& a) { return std::real((s.rho * a).trace()); }

double magnetization(const QubitState& s, const Mat2& spin_op) { return 2.0 * expectation(s, spin_op); }

}  // namespace ddsim
