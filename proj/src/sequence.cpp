#include "ddsim/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ddsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kX = 0.0;
constexpr double kY = 0.5 * kPi;

// KDD composite block at reference phase phi: five pi pulses at
// (pi/6 + phi, phi, pi/2 + phi, phi, pi/6 + phi), each separated by tau.
void append_kdd_block(std::vector<double>& phases, double phi) {
    phases.insert(phases.end(), {kPi / 6 + phi, phi, kPi / 2 + phi, phi, kPi / 6 + phi});
}

std::vector<double> catalog_phases(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::cp:
        case SequenceKind::cpmg:
            return {kY, kY};
        case SequenceKind::xy4s:
        case SequenceKind::xy4a:
            return {kX, kY, kX, kY};
        case SequenceKind::xy8s:
        case SequenceKind::xy8a:
            return {kX, kY, kX, kY, kY, kX, kY, kX};
        case SequenceKind::kddx: {
            std::vector<double> p;
            for (int b = 0; b < 4; ++b) append_kdd_block(p, 0.0);
            return p;
        }
        case SequenceKind::kddxy: {
            std::vector<double> p;
            append_kdd_block(p, 0.0);
            append_kdd_block(p, kPi / 2);
            append_kdd_block(p, 0.0);
            append_kdd_block(p, kPi / 2);
            return p;
        }
        default:
            return {};
    }
}

bool is_symmetric_kind(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::xy4a:
        case SequenceKind::xy8a:
            return false;
        default:
            return true;
    }
}

}  // namespace

std::optional<SequenceKind> parse_sequence_kind(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "fid") return SequenceKind::fid;
    if (s == "hahn") return SequenceKind::hahn;
    if (s == "cp") return SequenceKind::cp;
    if (s == "cpmg") return SequenceKind::cpmg;
    if (s == "xy4s") return SequenceKind::xy4s;
    if (s == "xy4a") return SequenceKind::xy4a;
    if (s == "xy8s") return SequenceKind::xy8s;
    if (s == "xy8a") return SequenceKind::xy8a;
    if (s == "kddx") return SequenceKind::kddx;
    if (s == "kddxy") return SequenceKind::kddxy;
    return std::nullopt;
}

std::string sequence_label(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::fid: return "fid";
        case SequenceKind::hahn: return "hahn";
        case SequenceKind::cp: return "cp";
        case SequenceKind::cpmg: return "cpmg";
        case SequenceKind::xy4s: return "xy4s";
        case SequenceKind::xy4a: return "xy4a";
        case SequenceKind::xy8s: return "xy8s";
        case SequenceKind::xy8a: return "xy8a";
        case SequenceKind::kddx: return "kddx";
        case SequenceKind::kddxy: return "kddxy";
    }
    return "?";
}

bool is_cyclic(SequenceKind kind) { return kind != SequenceKind::fid && kind != SequenceKind::hahn; }

Mat2 SequenceCycle::ideal_propagator() const {
    Mat2 u = Mat2::identity();
    for (const auto& e : elements)
        if (e.kind == SequenceElement::Kind::pulse)
            u = rotation_propagator(e.pulse.phase, e.pulse.nominal_angle) * u;
    return u;
}

Mat2 SequenceCycle::propagator_with_eps(double eps) const {
    Mat2 u = Mat2::identity();
    for (const auto& e : elements)
        if (e.kind == SequenceElement::Kind::pulse)
            u = rotation_propagator(e.pulse.phase, (1.0 + eps) * e.pulse.nominal_angle) * u;
    return u;
}

SequenceCycle build_cycle(SequenceKind kind, double tau, const PulseSpec& pulse_template, PulseMode mode) {
    if (!is_cyclic(kind))
        throw std::invalid_argument("build_cycle: '" + sequence_label(kind) + "' is not a repeatable cycle");
    if (tau < 0) throw std::invalid_argument("build_cycle: tau must be >= 0");

    const std::vector<double> phases = catalog_phases(kind);
    const bool symmetric = is_symmetric_kind(kind);
    const double pulse_duration = (mode == PulseMode::finite) ? pulse_template.t_p : 0.0;
    if (mode == PulseMode::finite && !(pulse_template.t_p > 0))
        throw std::invalid_argument("build_cycle: finite mode requires t_p > 0");

    SequenceCycle c;
    c.tau = tau;
    c.label = sequence_label(kind);
    c.time_symmetric = symmetric;
    c.pulse_count = static_cast<int>(phases.size());

    const auto add_delay = [&c](double t) {
        if (t > 0) c.elements.push_back(SequenceElement::make_delay(t));
    };
    if (symmetric) add_delay(tau / 2);
    for (std::size_t k = 0; k < phases.size(); ++k) {
        PulseSpec p = pulse_template;
        p.phase = phases[k];
        c.elements.push_back(SequenceElement::make_pulse(p, pulse_duration));
        if (symmetric)
            add_delay(k + 1 < phases.size() ? tau : tau / 2);
        else
            add_delay(tau);
    }

    double total = 0;
    for (const auto& e : c.elements) total += e.duration;
    c.tau_c = total;
    return c;
}

int cycles_for_duration(double duration, const SequenceCycle& cycle) {
    if (duration < 0) throw std::invalid_argument("cycles_for_duration: duration must be >= 0");
    if (!(cycle.tau_c > 0)) return 0;
    return static_cast<int>(std::floor(duration / cycle.tau_c));
}

QubitState initial_state_for(SequenceKind, InitialVariant variant) {
    return variant == InitialVariant::parallel ? QubitState::plus_y() : QubitState::plus_x();
}

InitialVariant default_variant(SequenceKind kind) {
    return kind == SequenceKind::cpmg ? InitialVariant::parallel : InitialVariant::perpendicular;
}

Mat2 prepared_spin_operator(InitialVariant variant) {
    return variant == InitialVariant::parallel ? spin_y() : spin_x();
}

}  // namespace ddsim
