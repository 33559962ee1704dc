#include "ddsim/aht.hpp"

#include <cmath>
#include <stdexcept>

namespace ddsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};
}

std::vector<ToggledSegment> toggling_frame(const SequenceCycle& cycle, double eps) {
    std::vector<ToggledSegment> segs;
    Mat2 u_ideal = Mat2::identity();
    for (const auto& e : cycle.elements) {
        if (e.kind == SequenceElement::Kind::delay) {
            segs.push_back({Mat2::zero(), e.duration, false});
            continue;
        }
        if (e.duration > 0)
            throw std::invalid_argument("toggling_frame: finite-duration cycles are not supported");
        const double half_area = 0.5 * eps * e.pulse.nominal_angle;
        const Mat2 s_phi = spin_phi(e.pulse.phase);

        Mat2 toggled = u_ideal.dagger() * s_phi * u_ideal;
        segs.push_back({cplx(half_area) * toggled, 0.0, true});

        u_ideal = rotation_propagator(e.pulse.phase, e.pulse.nominal_angle) * u_ideal;

        toggled = u_ideal.dagger() * s_phi * u_ideal;
        segs.push_back({cplx(half_area) * toggled, 0.0, true});
    }
    return segs;
}

MagnusResult magnus_terms(const SequenceCycle& cycle, double eps, int max_order) {
    if (max_order < 0 || max_order > 2)
        throw std::invalid_argument("magnus_terms: max_order must be in 0..2");
    if (!(cycle.tau_c > 0)) throw std::invalid_argument("magnus_terms: cycle time must be > 0");

    // areas of the nonzero segments, in time order
    std::vector<Mat2> areas;
    for (const auto& seg : toggling_frame(cycle, eps))
        if (seg.is_kick) areas.push_back(seg.area);
    const std::size_t n = areas.size();
    const double tau_c = cycle.tau_c;

    MagnusResult res;
    res.max_order = max_order;

    Mat2 sum = Mat2::zero();
    for (const auto& a : areas) sum += a;
    res.terms[0] = cplx(1.0 / tau_c) * sum;
    if (max_order < 1) return res;

    // Hbar1 = (-i / 2 tau_c) sum_{k>j} [A_k, A_j]
    Mat2 c1 = Mat2::zero();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 0; j < k; ++j) c1 += commutator(areas[k], areas[j]);
    res.terms[1] = (-kI / cplx(2.0 * tau_c)) * c1;
    if (max_order < 2) return res;

    // Hbar2 = -(1 / 6 tau_c) { sum_{k>j>i} ([A_k,[A_j,A_i]] + [A_i,[A_j,A_k]])
    //                          + 1/2 sum_{k>j} ([A_k,[A_k,A_j]] + [A_j,[A_j,A_k]]) }
    // The half-weight pairs are the exact same-segment integrals of the
    // piecewise-constant generator.
    Mat2 c2 = Mat2::zero();
    for (std::size_t k = 2; k < n; ++k)
        for (std::size_t j = 1; j < k; ++j)
            for (std::size_t i = 0; i < j; ++i) {
                c2 += commutator(areas[k], commutator(areas[j], areas[i]));
                c2 += commutator(areas[i], commutator(areas[j], areas[k]));
            }
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 0; j < k; ++j) {
            c2 += cplx(0.5) * commutator(areas[k], commutator(areas[k], areas[j]));
            c2 += cplx(0.5) * commutator(areas[j], commutator(areas[j], areas[k]));
        }
    res.terms[2] = cplx(-1.0 / (6.0 * tau_c)) * c2;
    return res;
}

EpsExpansion eps_expansion(const SequenceCycle& cycle, const std::vector<double>& eps_samples) {
    const std::size_t n = eps_samples.size();
    constexpr int kDeg = 3;
    if (n < kDeg + 1)
        throw std::invalid_argument("eps_expansion: need at least 4 eps samples");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (eps_samples[i] == eps_samples[j])
                throw std::invalid_argument("eps_expansion: eps samples must be distinct");

    // component values per sample
    std::array<std::vector<double>, 3> comp;
    for (auto& c : comp) c.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Mat2 u = cycle.propagator_with_eps(eps_samples[i]);
        const Mat2 h = effective_hamiltonian(u, cycle.tau_c);
        const auto hc = spin_components(h);
        for (int c = 0; c < 3; ++c) comp[c][i] = hc[c];
    }

    // least-squares cubic fit via normal equations on the Vandermonde matrix
    EpsExpansion out;
    double ata[kDeg + 1][kDeg + 1] = {};
    for (std::size_t i = 0; i < n; ++i) {
        double pw[kDeg + 1];
        pw[0] = 1;
        for (int d = 1; d <= kDeg; ++d) pw[d] = pw[d - 1] * eps_samples[i];
        for (int r = 0; r <= kDeg; ++r)
            for (int c = 0; c <= kDeg; ++c) ata[r][c] += pw[r] * pw[c];
    }
    for (int comp_i = 0; comp_i < 3; ++comp_i) {
        double atb[kDeg + 1] = {};
        for (std::size_t i = 0; i < n; ++i) {
            double pw = 1;
            for (int d = 0; d <= kDeg; ++d) {
                atb[d] += pw * comp[comp_i][i];
                pw *= eps_samples[i];
            }
        }
        // solve (kDeg+1)x(kDeg+1) system by Gaussian elimination with pivoting
        double a[kDeg + 1][kDeg + 2];
        for (int r = 0; r <= kDeg; ++r) {
            for (int c = 0; c <= kDeg; ++c) a[r][c] = ata[r][c];
            a[r][kDeg + 1] = atb[r];
        }
        for (int col = 0; col <= kDeg; ++col) {
            int piv = col;
            for (int r = col + 1; r <= kDeg; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            if (std::abs(a[piv][col]) < 1e-300)
                throw std::invalid_argument("eps_expansion: ill-conditioned fit");
            if (piv != col)
                for (int c = col; c <= kDeg + 1; ++c) std::swap(a[piv][c], a[col][c]);
            for (int r = 0; r <= kDeg; ++r) {
                if (r == col) continue;
                const double f = a[r][col] / a[col][col];
                for (int c = col; c <= kDeg + 1; ++c) a[r][c] -= f * a[col][c];
            }
        }
        for (int d = 0; d <= kDeg; ++d) out.coeff[d][comp_i] = a[d][kDeg + 1] / a[d][d];
    }
    return out;
}

namespace {

const std::vector<double> kEpsSamples = {-0.004, -0.002, -0.001, 0.001, 0.002, 0.004};

double magnus_coeff(const SequenceCycle& cycle, int order, int comp, double tau, double eps) {
    const MagnusResult m = magnus_terms(cycle, eps, order);
    const auto c = spin_components(m.terms[static_cast<std::size_t>(order)]);
    return c[static_cast<std::size_t>(comp)] * tau / std::pow(eps, order + 1);
}

}  // namespace

std::vector<AhtRow> aht_verification_table(double tau) {
    if (!(tau > 0)) throw std::invalid_argument("aht_verification_table: tau must be > 0");
    PulseSpec tmpl;  // delta pi pulses
    const double eps = 1e-3;
    const char* comp_name[3] = {"Sx", "Sy", "Sz"};

    std::vector<AhtRow> rows;
    auto add = [&](SequenceKind kind, int order, int comp, double predicted) {
        SequenceCycle cyc = build_cycle(kind, tau, tmpl);
        const EpsExpansion ex = eps_expansion(cyc, kEpsSamples);
        AhtRow row;
        row.sequence = cyc.label;
        row.order = order;
        row.component = comp_name[comp];
        row.predicted = predicted;
        row.magnus = magnus_coeff(cyc, order, comp, tau, eps);
        row.expansion = ex.coeff[static_cast<std::size_t>(order + 1)][static_cast<std::size_t>(comp)] * tau;
        rows.push_back(row);
    };

    // order k row: coefficient of eps^(k+1)/tau on the named component
    add(SequenceKind::cpmg, 0, 1, kPi);                       // Eq: eps pi S_y / tau
    add(SequenceKind::cpmg, 1, 0, 0.0);
    add(SequenceKind::cpmg, 1, 1, 0.0);
    add(SequenceKind::cpmg, 1, 2, 0.0);
    add(SequenceKind::xy4s, 1, 2, 5.0 * kPi * kPi / 16.0);    // eps^2 coefficient on S_z
    add(SequenceKind::xy4a, 1, 2, 5.0 * kPi * kPi / 16.0);
    add(SequenceKind::xy8s, 2, 0, 13.0 * std::pow(kPi, 3) / 1536.0);
    add(SequenceKind::xy8s, 2, 1, 13.0 * std::pow(kPi, 3) / 1536.0);
    add(SequenceKind::xy8a, 2, 0, 13.0 * std::pow(kPi, 3) / 1536.0);
    add(SequenceKind::xy8a, 2, 1, 13.0 * std::pow(kPi, 3) / 1536.0);
    for (int comp = 0; comp < 3; ++comp) {
        add(SequenceKind::kddx, 0, comp, 0.0);
        add(SequenceKind::kddx, 1, comp, 0.0);
    }
    return rows;
}

}  // namespace ddsim
