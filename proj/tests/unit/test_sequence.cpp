#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ddsim/sequence.hpp"

using namespace ddsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<SequenceKind> kCatalog = {SequenceKind::cp,   SequenceKind::cpmg, SequenceKind::xy4s,
                                            SequenceKind::xy4a, SequenceKind::xy8s, SequenceKind::xy8a,
                                            SequenceKind::kddx, SequenceKind::kddxy};

std::map<long, int> phase_multiset(const SequenceCycle& c) {
    std::map<long, int> m;
    for (const auto& e : c.elements)
        if (e.kind == SequenceElement::Kind::pulse)
            ++m[std::lround(std::fmod(e.pulse.phase + 4 * kPi, 2 * kPi) * 1e9)];
    return m;
}

int expected_pulses(SequenceKind k) {
    switch (k) {
        case SequenceKind::cp:
        case SequenceKind::cpmg: return 2;
        case SequenceKind::xy4s:
        case SequenceKind::xy4a: return 4;
        case SequenceKind::xy8s:
        case SequenceKind::xy8a: return 8;
        default: return 20;
    }
}

}  // namespace

TEST_SUITE("sequence") {

TEST_CASE("name parsing is case-insensitive and rejects unknowns") {
    CHECK(parse_sequence_kind("XY8s") == SequenceKind::xy8s);
    CHECK(parse_sequence_kind("KDDxy") == SequenceKind::kddxy);
    CHECK(parse_sequence_kind("cpmg") == SequenceKind::cpmg);
    CHECK(!parse_sequence_kind("udd"));
    CHECK(!parse_sequence_kind(""));
}

TEST_CASE("xy4s layout: [tau/2, X, tau, Y, tau, X, tau, Y, tau/2]") {
    const double tau = 2e-4;
    const SequenceCycle c = build_cycle(SequenceKind::xy4s, tau, PulseSpec{});
    REQUIRE(c.elements.size() == 9);
    CHECK(c.elements.front().kind == SequenceElement::Kind::delay);
    CHECK(c.elements.front().duration == doctest::Approx(tau / 2));
    CHECK(c.elements.back().duration == doctest::Approx(tau / 2));
    CHECK(c.elements[1].pulse.phase == doctest::Approx(0.0));
    CHECK(c.elements[3].pulse.phase == doctest::Approx(kPi / 2));
    CHECK(c.tau_c == doctest::Approx(4 * tau).epsilon(1e-12));
    CHECK(c.pulse_count == 4);
}

TEST_CASE("cpmg with tau = 16 ms has a 32 ms cycle and 2 pulses") {
    const SequenceCycle c = build_cycle(SequenceKind::cpmg, 16e-3, PulseSpec{});
    CHECK(c.tau_c == doctest::Approx(32e-3).epsilon(1e-12));
    CHECK(c.pulse_count == 2);
}

TEST_CASE("catalog pulse counts and durations") {
    for (const auto k : kCatalog) {
        const SequenceCycle c = build_cycle(k, 1e-4, PulseSpec{});
        CHECK(c.pulse_count == expected_pulses(k));
        double total = 0;
        for (const auto& e : c.elements) {
            CHECK(e.duration >= 0.0);
            total += e.duration;
        }
        CHECK(total == doctest::Approx(c.tau_c).epsilon(1e-12));
        CHECK(c.tau_c == doctest::Approx(expected_pulses(k) * 1e-4).epsilon(1e-12));
    }
}

TEST_CASE("ideal cycle propagators are proportional to the identity") {
    for (const auto k : kCatalog) {
        const SequenceCycle c = build_cycle(k, 1e-4, PulseSpec{});
        const Mat2 u = c.ideal_propagator();
        CHECK(unitary_fidelity(u, Mat2::identity()) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("finite mode includes pulse durations in the cycle time") {
    PulseSpec p;
    p.t_p = 37.5e-6;
    const double tau = 1e-4;
    const SequenceCycle c = build_cycle(SequenceKind::xy8s, tau, p, PulseMode::finite);
    CHECK(c.tau_c == doctest::Approx(8 * (tau + p.t_p)).epsilon(1e-12));
}

TEST_CASE("symmetric and asymmetric variants share the pulse multiset") {
    for (const auto& [s, a] : {std::pair{SequenceKind::xy4s, SequenceKind::xy4a},
                               std::pair{SequenceKind::xy8s, SequenceKind::xy8a}}) {
        const auto ms = phase_multiset(build_cycle(s, 1e-4, PulseSpec{}));
        const auto ma = phase_multiset(build_cycle(a, 1e-4, PulseSpec{}));
        CHECK(ms == ma);
    }
}

TEST_CASE("xy8 phase multiset is the xy4 multiset taken twice") {
    auto m4 = phase_multiset(build_cycle(SequenceKind::xy4s, 1e-4, PulseSpec{}));
    const auto m8 = phase_multiset(build_cycle(SequenceKind::xy8s, 1e-4, PulseSpec{}));
    for (auto& [phase, count] : m4) count *= 2;
    CHECK(m4 == m8);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(build_cycle(SequenceKind::xy4s, -1e-4, PulseSpec{}), std::invalid_argument);
    CHECK_THROWS_AS(build_cycle(SequenceKind::hahn, 1e-4, PulseSpec{}), std::invalid_argument);
    CHECK_THROWS_AS(build_cycle(SequenceKind::fid, 1e-4, PulseSpec{}), std::invalid_argument);
    PulseSpec p;  // t_p = 0
    CHECK_THROWS_AS(build_cycle(SequenceKind::xy4s, 1e-4, p, PulseMode::finite), std::invalid_argument);
}

TEST_CASE("cycles_for_duration floor semantics") {
    const SequenceCycle c = build_cycle(SequenceKind::cpmg, 16e-3, PulseSpec{});
    CHECK(cycles_for_duration(0.0, c) == 0);
    CHECK(cycles_for_duration(0.5, c) == 15);  // 0.5 s / 32 ms
    CHECK(cycles_for_duration(10 * c.tau_c - 1e-9, c) == 9);
}

TEST_CASE("initial states") {
    const QubitState cpmg_state = initial_state_for(SequenceKind::cpmg, InitialVariant::parallel);
    CHECK(magnetization(cpmg_state, spin_y()) == doctest::Approx(1.0).epsilon(1e-12));
    const QubitState cp_state = initial_state_for(SequenceKind::cp, InitialVariant::perpendicular);
    CHECK(magnetization(cp_state, spin_x()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(default_variant(SequenceKind::cpmg) == InitialVariant::parallel);
    CHECK(default_variant(SequenceKind::cp) == InitialVariant::perpendicular);
    // both preparations supported for the robust sequences
    for (const auto v : {InitialVariant::parallel, InitialVariant::perpendicular}) {
        const QubitState s = initial_state_for(SequenceKind::xy4s, v);
        CHECK(magnetization(s, prepared_spin_operator(v)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

}  // TEST_SUITE
