#pragma once

#include <cmath>
#include <random>

#include "ddsim/spin.hpp"

// Test-only reference implementations, independent of the library's
// closed-form paths.
namespace oracle {

using ddsim::cplx;
using ddsim::Mat2;

// exp(-i H t) by scaling-and-squaring with a Taylor series.
inline Mat2 expm_reference(const Mat2& h, double t) {
    Mat2 a = cplx(0, -t) * h;
    int squarings = 0;
    while (a.frobenius_norm() > 0.25) {
        a = cplx(0.5) * a;
        ++squarings;
    }
    Mat2 result = Mat2::identity();
    Mat2 term = Mat2::identity();
    for (int k = 1; k <= 24; ++k) {
        term = cplx(1.0 / k) * (term * a);
        result += term;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

inline Mat2 random_traceless_hermitian(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    const double hx = u(rng), hy = u(rng), hz = u(rng);
    return cplx(hx) * ddsim::spin_x() + cplx(hy) * ddsim::spin_y() + cplx(hz) * ddsim::spin_z();
}

inline Mat2 random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(0, 2 * 3.14159265358979323846);
    std::uniform_real_distribution<double> angle(0, 2 * 3.14159265358979323846);
    return ddsim::rotation_propagator(phase(rng), angle(rng));
}

}  // namespace oracle
