#pragma once

#include <array>
#include <string>
#include <vector>

#include "ddsim/sequence.hpp"

namespace ddsim {

// One piece of the piecewise-constant toggling-frame Hamiltonian. Delays
// carry zero area; pulse error kicks are instantaneous with integrated area
// eps*pi/2 * S_phi conjugated into the frame of the ideal pulses applied so
// far (two kicks per pulse, one on each side of the ideal rotation).
struct ToggledSegment {
    Mat2 area;        // integral of the toggled Hamiltonian over the segment, rad
    double duration;  // s
    bool is_kick;
};

// Toggling-frame decomposition of one delta-pulse cycle with flip-angle
// error eps. Throws std::invalid_argument for cycles with finite-duration
// pulses.
std::vector<ToggledSegment> toggling_frame(const SequenceCycle& cycle, double eps);

// Magnus terms of orders 0..2 for the cycle generator, in rad/s, traceless
// Hermitian. Order k scales exactly as eps^(k+1). Evaluated as exact nested
// sums over the piecewise-constant segments.
struct MagnusResult {
    std::array<Mat2, 3> terms{};
    int max_order = 2;
    // kick-splitting convention: each pulse contributes half its error area
    // on each side of the ideal rotation
    std::string convention = "symmetric half-kicks";
};

MagnusResult magnus_terms(const SequenceCycle& cycle, double eps, int max_order = 2);

// Independent cross-check of magnus_terms: builds the exact cycle propagator
// for each eps sample, extracts the effective Hamiltonian, and fits every
// spin component to a cubic in eps. coeff[k][c] is the eps^k coefficient of
// component S_c (c = x,y,z), in rad/s. Throws std::invalid_argument when the
// sample set is degenerate.
struct EpsExpansion {
    std::array<std::array<double, 3>, 4> coeff{};
};

EpsExpansion eps_expansion(const SequenceCycle& cycle, const std::vector<double>& eps_samples);

// One row of the closed-form verification table: the predicted coefficient
// c of a term c * eps^(order+1) / tau on the named spin component, next to
// the coefficients measured from magnus_terms and eps_expansion.
struct AhtRow {
    std::string sequence;
    int order;
    std::string component;
    double predicted;   // dimensionless (coefficient of eps^(order+1)/tau)
    double magnus;
    double expansion;
};

std::vector<AhtRow> aht_verification_table(double tau);

}  // namespace ddsim
