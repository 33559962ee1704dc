#pragma once

#include <array>
#include <complex>

namespace ddsim {

using cplx = std::complex<double>;

// 2x2 complex matrix, row-major. Value type; all operations are pure.
// Propagators are built from closed-form SU(2) exponentials and are never
// renormalized; unitarity drift over long products stays below 1e-12 scale.
struct Mat2 {
    std::array<cplx, 4> m{};  // a00 a01 a10 a11

    static Mat2 zero() { return {}; }
    static Mat2 identity() { return {{cplx(1), cplx(0), cplx(0), cplx(1)}}; }

    cplx operator()(int r, int c) const { return m[2 * r + c]; }
    cplx& operator()(int r, int c) { return m[2 * r + c]; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        Mat2 r;
        r.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
        r.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
        r.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
        r.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
        return r;
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
        return r;
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] - b.m[i];
        return r;
    }
    friend Mat2 operator*(cplx s, const Mat2& a) {
        Mat2 r;
        for (int i = 0; i < 4; ++i) r.m[i] = s * a.m[i];
        return r;
    }
    friend Mat2 operator*(const Mat2& a, cplx s) { return s * a; }
    Mat2& operator+=(const Mat2& b) {
        for (int i = 0; i < 4; ++i) m[i] += b.m[i];
        return *this;
    }

    Mat2 dagger() const { return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}}; }
    cplx trace() const { return m[0] + m[3]; }
    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
    double frobenius_norm() const;
};

Mat2 commutator(const Mat2& a, const Mat2& b);

// Residual norms used by tests and invariant checks.
double unitarity_residual(const Mat2& u);    // ||U†U - 1||_F
double hermiticity_residual(const Mat2& h);  // ||H - H†||_F

// Pauli matrices and spin-1/2 operators S_k = sigma_k / 2 (eigenvalues +-1/2).
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 spin_x();
Mat2 spin_y();
Mat2 spin_z();
// S_phi = cos(phi) S_x + sin(phi) S_y
Mat2 spin_phi(double phase);

// Components h_k of a (near-)Hermitian traceless operator: H = sum_k h_k S_k.
std::array<double, 3> spin_components(const Mat2& h);

// exp(-i H t) for Hermitian H, evaluated in closed form via the su(2)
// decomposition H = c0*1 + v.sigma.
Mat2 propagator(const Mat2& h, double t);

// Ideal pulse propagator R_phi(angle) = exp(-i * angle * S_phi).
Mat2 rotation_propagator(double phase, double angle);

// Rotation angle of the SU(2) class of U, in [0, pi].
double rotation_angle(const Mat2& u);

// Global-phase-insensitive fidelity |tr(U†V)| / 2 (1 when U ~ V).
double unitary_fidelity(const Mat2& u, const Mat2& v);

// Inverts U = exp(-i H tau_c) on the principal branch and returns the
// traceless Hermitian H (units rad/s). Throws std::domain_error when the
// rotation angle of U is within 1e-6 of pi (branch ambiguous).
Mat2 effective_hamiltonian(const Mat2& u, double tau_c);

// Density matrix of a single qubit.
struct QubitState {
    Mat2 rho;

    static QubitState from_bloch(double nx, double ny, double nz);
    static QubitState plus_x() { return from_bloch(1, 0, 0); }
    static QubitState plus_y() { return from_bloch(0, 1, 0); }
    static QubitState plus_z() { return from_bloch(0, 0, 1); }
    static QubitState maximally_mixed() { return from_bloch(0, 0, 0); }

    std::array<double, 3> bloch() const;
    double trace_residual() const;  // |tr(rho) - 1|
};

// rho -> U rho U†
QubitState evolve(const QubitState& s, const Mat2& u);

// Re tr(rho A) for Hermitian A.
double expectation(const QubitState& s, const Mat2& a);

// Normalized magnetization 2 tr(rho S_k); equals 1 for the state prepared
// along S_k.
double magnetization(const QubitState& s, const Mat2& spin_op);

}  // namespace ddsim
