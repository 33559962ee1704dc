#pragma once

#include <cstdint>
#include <vector>

#include "ddsim/noise.hpp"
#include "ddsim/sequence.hpp"

namespace ddsim {

// Full description of one simulated decay measurement.
struct ExperimentConfig {
    SequenceKind kind = SequenceKind::cpmg;
    double tau = 1e-3;          // s (ignored for fid/hahn)
    PulseSpec pulse;            // eps, t_p, offset; phases come from the catalog
    PulseMode mode = PulseMode::delta;
    InitialVariant init = InitialVariant::parallel;
    NoiseModel noise;
    double duration = 0.5;      // s
    int ensemble = 2000;
    double noise_dt = 5e-3;     // s, grid step for the slow field
    int sample_points = 25;     // time grid size for fid/hahn
    bool intra_cycle = false;   // also sample inside cycles (simulate output)

    void validate() const;  // throws std::invalid_argument
};

// Normalized magnetization sampled at cycle boundaries (or at the fid/hahn
// time grid), ensemble-averaged. First point is t = 0, amplitude 1 exactly.
struct EchoSeries {
    std::vector<double> times;       // s
    std::vector<double> amplitudes;
    std::vector<double> stderrs;     // 0 for single realizations
};

// Single noise realization; deterministic per (noise.seed, realization_index).
EchoSeries run_trajectory(const ExperimentConfig& config, int realization_index);

// Pointwise ensemble mean with standard errors (sample std / sqrt(N)).
// Results are independent of the worker count: realizations are reduced in
// index order. threads = 0 uses the hardware concurrency.
EchoSeries run_ensemble(const ExperimentConfig& config, int threads = 0);

// As run_ensemble but sampling after every cycle element (the high-resolution
// view of the intra-cycle signal). Cyclic kinds only.
EchoSeries run_ensemble_intra(const ExperimentConfig& config, int threads = 0);

// Per-pulse fractional decay eta(n) = -ln(s(n)/s(0))/n at each cycle
// boundary, after dividing out the irreducible envelope. The series is
// truncated at the first non-positive amplitude (the metric is undefined
// beyond a sign reversal); truncated reports whether that happened.
struct ErrorPerPulse {
    std::vector<int> pulses;     // cumulative pulse count n
    std::vector<double> eta;
    std::vector<double> eta_stderr;
    bool truncated = false;
};

ErrorPerPulse error_per_pulse(const EchoSeries& series, int pulses_per_cycle, double t2_irr);

}  // namespace ddsim
