#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddsim/pulse.hpp"

namespace ddsim {

enum class SequenceKind { fid, hahn, cp, cpmg, xy4s, xy4a, xy8s, xy8a, kddx, kddxy };

// CLI names: fid, hahn, cp, cpmg, xy4s, xy4a, xy8s, xy8a, kddx, kddxy
// (case-insensitive). Returns nullopt for unknown names.
std::optional<SequenceKind> parse_sequence_kind(const std::string& name);
std::string sequence_label(SequenceKind kind);

// Whether the kind is a repeatable DD cycle (false for fid and hahn, which
// are single-shot experiments parameterized by the total time).
bool is_cyclic(SequenceKind kind);

enum class InitialVariant { parallel, perpendicular };

struct SequenceElement {
    enum class Kind { delay, pulse } kind;
    double duration;  // s; pulse duration is t_p in finite mode, 0 in delta mode
    PulseSpec pulse;  // valid when kind == pulse

    static SequenceElement make_delay(double t) { return {Kind::delay, t, {}}; }
    static SequenceElement make_pulse(const PulseSpec& p, double duration) {
        return {Kind::pulse, duration, p};
    }
};

// One DD cycle: an ordered alternation of free delays and pulses. tau is the
// edge-to-edge delay between pulses; in delta mode this coincides with the
// center-to-center spacing. Symmetric cycles start and end with tau/2,
// asymmetric ones place the full delay after each pulse.
struct SequenceCycle {
    std::vector<SequenceElement> elements;
    double tau = 0;        // s, inter-pulse delay parameter
    double tau_c = 0;      // s, total cycle time
    std::string label;
    bool time_symmetric = false;
    int pulse_count = 0;

    // ideal cycle propagator with the stored pulses taken error-free
    Mat2 ideal_propagator() const;
    // exact cycle propagator with flip-angle error eps on every pulse,
    // delta pulses, no environment
    Mat2 propagator_with_eps(double eps) const;
};

// Builds the catalog cycle for a cyclic kind. The pulse template provides
// t_p, eps and offset; phases are set per position. Throws
// std::invalid_argument for negative tau or non-cyclic kinds.
SequenceCycle build_cycle(SequenceKind kind, double tau, const PulseSpec& pulse_template,
                          PulseMode mode = PulseMode::delta);

// floor(T / tau_c)
int cycles_for_duration(double duration, const SequenceCycle& cycle);

// Prepared state: parallel -> along S_y (the CP/CPMG pulse axis),
// perpendicular -> along S_x. CP is defined with the perpendicular state,
// CPMG with the parallel one.
QubitState initial_state_for(SequenceKind kind, InitialVariant variant);
InitialVariant default_variant(SequenceKind kind);

// Spin operator along the prepared direction (the measured component).
Mat2 prepared_spin_operator(InitialVariant variant);

}  // namespace ddsim
