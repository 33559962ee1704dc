#pragma once

#include <string>
#include <vector>

#include "ddsim/experiment.hpp"

namespace ddsim {

// Result of a single- or double-exponential fit
//   s(t) = a exp(-t/T2_f) + b exp(-t/T2_s),  T2_f <= T2_s.
// Single-exponential results are stored in (b, T2_s) with a = 0. fallback is
// set when a requested double fit was ill-separated (T2_f/T2_s > 0.8) and the
// single model was reported instead.
struct DecayFit {
    double a = 0.0;
    double t2_fast = 0.0;
    double b = 0.0;
    double t2_slow = 0.0;
    double residual = 0.0;   // sqrt(sum of squared weighted residuals)
    bool is_double = false;
    bool converged = false;
    bool fallback = false;
    int points_used = 0;
    int points_cut = 0;      // dropped by the noise-floor rule
    std::string message;     // non-convergence reason, empty on success
};

// Weighted least squares (weights from the series standard errors when the
// ensemble provided them, unweighted otherwise). Points with amplitude below
// 3x their standard error are excluded. Non-convergence is reported through
// converged/message, never silently.
DecayFit fit_single_exponential(const EchoSeries& series);
DecayFit fit_double_exponential(const EchoSeries& series);

struct ScanRow {
    std::string sequence;
    double tau = 0.0;
    DecayFit fit;
};

// Decay-time-vs-tau scan. For cp/cpmg the defining initial state is used; for
// every other sequence the fit is run for both prepared states and the decay
// times are averaged. Per-row fit failures are flagged in the row, the scan
// always completes. model: "single" or "double".
std::vector<ScanRow> decay_vs_tau_scan(const ExperimentConfig& base, const std::vector<double>& taus,
                                       const std::vector<SequenceKind>& kinds, const std::string& model,
                                       int threads = 0);

}  // namespace ddsim
