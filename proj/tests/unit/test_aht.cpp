#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ddsim/aht.hpp"

using namespace ddsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_abs_component(const Mat2& h) {
    const auto c = spin_components(h);
    return std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
}

SequenceCycle cycle_of(SequenceKind k, double tau) { return build_cycle(k, tau, PulseSpec{}); }

}  // namespace

TEST_SUITE("aht") {

TEST_CASE("toggling frame basics") {
    const double tau = 1e-3;

    SUBCASE("eps = 0 gives all-zero segments") {
        for (const auto& seg : toggling_frame(cycle_of(SequenceKind::xy4s, tau), 0.0))
            CHECK(seg.area.frobenius_norm() == 0.0);
    }

    SUBCASE("CPMG kicks all map to +S_y; each half-kick carries area eps*pi/2") {
        const double eps = 0.02;
        int kicks = 0;
        for (const auto& seg : toggling_frame(cycle_of(SequenceKind::cpmg, tau), eps)) {
            if (!seg.is_kick) continue;
            ++kicks;
            CHECK((seg.area - cplx(0.5 * eps * kPi) * spin_y()).frobenius_norm() < 1e-14);
        }
        CHECK(kicks == 4);
    }

    SUBCASE("XY4 toggled kicks sum to zero") {
        Mat2 sum = Mat2::zero();
        for (const auto& seg : toggling_frame(cycle_of(SequenceKind::xy4s, tau), 0.01)) sum += seg.area;
        CHECK(sum.frobenius_norm() < 1e-14);
    }

    SUBCASE("segments cover exactly one cycle") {
        const SequenceCycle c = cycle_of(SequenceKind::xy8a, tau);
        double total = 0;
        for (const auto& seg : toggling_frame(c, 0.01)) total += seg.duration;
        CHECK(total == doctest::Approx(c.tau_c).epsilon(1e-12));
    }

    SUBCASE("finite-duration cycles are rejected") {
        PulseSpec p;
        p.t_p = 37.5e-6;
        const SequenceCycle c = build_cycle(SequenceKind::xy4s, tau, p, PulseMode::finite);
        CHECK_THROWS_AS(toggling_frame(c, 0.01), std::invalid_argument);
    }
}

TEST_CASE("magnus terms: structure across the catalog") {
    const double tau = 1e-3, eps = 0.01;

    SUBCASE("CPMG: order 0 is eps*pi*S_y/tau, order 1 vanishes") {
        const MagnusResult m = magnus_terms(cycle_of(SequenceKind::cpmg, tau), eps);
        const auto c0 = spin_components(m.terms[0]);
        CHECK(c0[1] == doctest::Approx(eps * kPi / tau).epsilon(1e-12));
        CHECK(std::abs(c0[0]) < 1e-12 / tau);
        CHECK(std::abs(c0[2]) < 1e-12 / tau);
        CHECK(max_abs_component(m.terms[1]) < 1e-10 * eps * kPi / tau);
    }

    SUBCASE("XY4: order 0 vanishes; order 1 lies along S_z, same for (s) and (a)") {
        const MagnusResult ms = magnus_terms(cycle_of(SequenceKind::xy4s, tau), eps);
        const MagnusResult ma = magnus_terms(cycle_of(SequenceKind::xy4a, tau), eps);
        CHECK(max_abs_component(ms.terms[0]) < 1e-10 * eps * kPi / tau);
        const auto cs = spin_components(ms.terms[1]);
        const auto ca = spin_components(ma.terms[1]);
        CHECK(std::abs(cs[0]) < 1e-12 / tau);
        CHECK(std::abs(cs[1]) < 1e-12 / tau);
        CHECK(cs[2] != 0.0);
        for (int i = 0; i < 3; ++i) CHECK(cs[i] == doctest::Approx(ca[i]).epsilon(1e-10));
    }

    SUBCASE("XY8: orders 0 and 1 vanish; order 2 is along S_x + S_y, same for (s) and (a)") {
        const MagnusResult ms = magnus_terms(cycle_of(SequenceKind::xy8s, tau), eps);
        const MagnusResult ma = magnus_terms(cycle_of(SequenceKind::xy8a, tau), eps);
        CHECK(max_abs_component(ms.terms[0]) < 1e-10 * eps * kPi / tau);
        CHECK(max_abs_component(ms.terms[1]) < 1e-10 * eps * kPi / tau);
        const auto cs = spin_components(ms.terms[2]);
        CHECK(cs[0] == doctest::Approx(cs[1]).epsilon(1e-10));
        CHECK(std::abs(cs[2]) < 1e-10 * std::abs(cs[0]));
        const auto ca = spin_components(ma.terms[2]);
        for (int i = 0; i < 3; ++i) CHECK(cs[i] == doctest::Approx(ca[i]).epsilon(1e-9));
    }

    SUBCASE("KDD_x: orders 0 and 1 vanish under the adopted phase convention") {
        const MagnusResult m = magnus_terms(cycle_of(SequenceKind::kddx, tau), eps);
        CHECK(max_abs_component(m.terms[0]) < 1e-10 * eps * kPi / tau);
        CHECK(max_abs_component(m.terms[1]) < 1e-10 * eps * kPi / tau);
    }

    SUBCASE("all terms are traceless Hermitian") {
        for (const auto k : {SequenceKind::cpmg, SequenceKind::xy4a, SequenceKind::xy8s, SequenceKind::kddxy}) {
            const MagnusResult m = magnus_terms(cycle_of(k, tau), eps);
            for (const auto& term : m.terms) {
                CHECK(hermiticity_residual(term) < 1e-10 / tau);
                CHECK(std::abs(term.trace()) < 1e-12 / tau);
            }
        }
    }

    SUBCASE("order k scales as eps^(k+1)") {
        const SequenceCycle c = cycle_of(SequenceKind::xy4s, tau);
        const MagnusResult m1 = magnus_terms(c, eps);
        const MagnusResult m2 = magnus_terms(c, eps / 2);
        CHECK(max_abs_component(m1.terms[1]) / max_abs_component(m2.terms[1]) ==
              doctest::Approx(4.0).epsilon(1e-9));
        const MagnusResult x1 = magnus_terms(cycle_of(SequenceKind::xy8s, tau), eps);
        const MagnusResult x2 = magnus_terms(cycle_of(SequenceKind::xy8s, tau), eps / 2);
        CHECK(max_abs_component(x1.terms[2]) / max_abs_component(x2.terms[2]) ==
              doctest::Approx(8.0).epsilon(1e-9));
    }
}

TEST_CASE("magnus sum reproduces the exact propagator to O(eps^4)") {
    // halving eps must shrink the defect by >= 15x (eps^4 scaling would give 16x)
    const double tau = 1e-3;
    for (const auto k : {SequenceKind::cpmg, SequenceKind::xy4s, SequenceKind::xy8a, SequenceKind::kddx}) {
        const SequenceCycle c = cycle_of(k, tau);
        // operator-norm defect with the global phase aligned first
        const auto defect = [&](double eps) {
            const MagnusResult m = magnus_terms(c, eps);
            const Mat2 happrox = m.terms[0] + m.terms[1] + m.terms[2];
            const Mat2 u = c.propagator_with_eps(eps);
            Mat2 v = propagator(happrox, c.tau_c);
            const cplx z = (u.dagger() * v).trace();
            if (std::abs(z) > 0) v = (std::conj(z) / std::abs(z)) * v;
            return (v - u).frobenius_norm();
        };
        const double d1 = defect(0.04);
        const double d2 = defect(0.02);
        // defect scales as eps^4; halving eps must shrink it by >= 15x unless
        // the truncation is already exact (CPMG)
        CHECK((d2 < 1e-13 || d1 / d2 > 15.0));
    }
}

TEST_CASE("eps_expansion cross-checks magnus_terms on every nonzero coefficient") {
    const double tau = 1e-3, eps = 1e-3;
    const std::vector<double> samples = {-0.004, -0.002, -0.001, 0.001, 0.002, 0.004};

    SUBCASE("CPMG eps^1 on S_y within 0.1%") {
        const SequenceCycle c = cycle_of(SequenceKind::cpmg, tau);
        const EpsExpansion e = eps_expansion(c, samples);
        CHECK(e.coeff[1][1] == doctest::Approx(kPi / tau).epsilon(1e-3));
        const auto m = spin_components(magnus_terms(c, eps).terms[0]);
        CHECK(e.coeff[1][1] == doctest::Approx(m[1] / eps).epsilon(5e-3));
    }

    SUBCASE("XY4 eps^2 on S_z agrees between the two routes within 0.5%") {
        const SequenceCycle c = cycle_of(SequenceKind::xy4s, tau);
        const EpsExpansion e = eps_expansion(c, samples);
        const auto m = spin_components(magnus_terms(c, eps).terms[1]);
        CHECK(e.coeff[2][2] == doctest::Approx(m[2] / (eps * eps)).epsilon(5e-3));
    }

    SUBCASE("XY8 eps^3 on S_x and S_y agrees between the two routes within 0.5%") {
        const SequenceCycle c = cycle_of(SequenceKind::xy8s, tau);
        const EpsExpansion e = eps_expansion(c, samples);
        const auto m = spin_components(magnus_terms(c, eps).terms[2]);
        CHECK(e.coeff[3][0] == doctest::Approx(m[0] / (eps * eps * eps)).epsilon(5e-3));
        CHECK(e.coeff[3][1] == doctest::Approx(m[1] / (eps * eps * eps)).epsilon(5e-3));
    }

    SUBCASE("KDD_x eps^1 and eps^2 coefficients vanish within fit noise") {
        const SequenceCycle c = cycle_of(SequenceKind::kddx, tau);
        const EpsExpansion e = eps_expansion(c, samples);
        for (int comp = 0; comp < 3; ++comp) {
            CHECK(std::abs(e.coeff[1][comp]) < 1e-6 * kPi / tau);
            CHECK(std::abs(e.coeff[2][comp]) < 1e-4 * kPi / tau);
        }
    }

    SUBCASE("degenerate samples are rejected") {
        const SequenceCycle c = cycle_of(SequenceKind::cpmg, tau);
        CHECK_THROWS_AS(eps_expansion(c, {0.001, 0.001, 0.002, 0.003}), std::invalid_argument);
        CHECK_THROWS_AS(eps_expansion(c, {0.001, 0.002}), std::invalid_argument);
    }
}

TEST_CASE("verification table is self-consistent") {
    const auto rows = aht_verification_table(1e-3);
    REQUIRE(!rows.empty());
    for (const auto& row : rows) {
        // magnus and expansion columns must agree on every resolved coefficient
        if (std::abs(row.magnus) > 1e-4)
            CHECK(row.expansion == doctest::Approx(row.magnus).epsilon(5e-3));
        else
            CHECK(std::abs(row.expansion) < 1e-3);
    }
    // the model-exact rows match their closed forms
    CHECK(rows[0].sequence == "cpmg");
    CHECK(rows[0].magnus == doctest::Approx(kPi).epsilon(1e-3));
}

}  // TEST_SUITE
