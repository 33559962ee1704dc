#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ddsim/aht.hpp"
#include "ddsim/fit.hpp"
#include "ddsim/io.hpp"
#include "ddsim/version.hpp"

namespace py = pybind11;
using namespace ddsim;

namespace {

py::array_t<std::complex<double>> to_numpy(const Mat2& m) {
    py::array_t<std::complex<double>> a({2, 2});
    auto r = a.mutable_unchecked<2>();
    r(0, 0) = m.m[0];
    r(0, 1) = m.m[1];
    r(1, 0) = m.m[2];
    r(1, 1) = m.m[3];
    return a;
}

SequenceKind kind_of(const std::string& name) {
    const auto k = parse_sequence_kind(name);
    if (!k) throw py::value_error("unknown sequence '" + name + "'");
    return *k;
}

PulseMode mode_of(const std::string& name) {
    if (name == "delta") return PulseMode::delta;
    if (name == "finite") return PulseMode::finite;
    throw py::value_error("mode must be 'delta' or 'finite'");
}

InitialVariant init_of(const std::string& name, SequenceKind kind) {
    if (name == "default") return default_variant(kind);
    if (name == "parallel") return InitialVariant::parallel;
    if (name == "perpendicular") return InitialVariant::perpendicular;
    throw py::value_error("init must be 'parallel', 'perpendicular' or 'default'");
}

NoiseModel noise_of(const std::string& preset, double sigma_static, double sigma_ou, double tau_corr,
                    double t2_irr, std::uint64_t seed) {
    NoiseModel m = noise_preset(preset, seed);
    if (sigma_static >= 0) m.sigma_static = sigma_static;
    if (sigma_ou >= 0) m.sigma_ou = sigma_ou;
    if (tau_corr > 0) m.tau_corr = tau_corr;
    if (t2_irr > 0) m.t2_irr = t2_irr;
    return m;
}

EchoSeries series_from(const py::array_t<double>& times, const py::array_t<double>& amplitudes,
                       const py::object& stderrs) {
    EchoSeries s;
    const auto t = times.unchecked<1>();
    const auto a = amplitudes.unchecked<1>();
    if (t.shape(0) != a.shape(0)) throw py::value_error("times and amplitudes must have equal length");
    for (py::ssize_t i = 0; i < t.shape(0); ++i) {
        s.times.push_back(t(i));
        s.amplitudes.push_back(a(i));
    }
    if (!stderrs.is_none()) {
        const auto e = py::cast<py::array_t<double>>(stderrs).unchecked<1>();
        if (e.shape(0) != t.shape(0)) throw py::value_error("stderrs must match times in length");
        for (py::ssize_t i = 0; i < e.shape(0); ++i) s.stderrs.push_back(e(i));
    } else {
        s.stderrs.assign(s.times.size(), 0.0);
    }
    return s;
}

py::dict fit_to_dict(const DecayFit& f) {
    py::dict d;
    d["a"] = f.a;
    d["t2_fast"] = f.t2_fast;
    d["b"] = f.b;
    d["t2_slow"] = f.t2_slow;
    d["residual"] = f.residual;
    d["is_double"] = f.is_double;
    d["converged"] = f.converged;
    d["fallback"] = f.fallback;
    d["message"] = f.message;
    return d;
}

py::dict series_to_dict(const EchoSeries& s) {
    py::dict d;
    d["times"] = py::array_t<double>(py::ssize_t(s.times.size()), s.times.data());
    d["amplitudes"] = py::array_t<double>(py::ssize_t(s.amplitudes.size()), s.amplitudes.data());
    d["stderrs"] = py::array_t<double>(py::ssize_t(s.stderrs.size()), s.stderrs.data());
    return d;
}

}  // namespace

PYBIND11_MODULE(_ddsim, m) {
    m.doc() = "single-qubit dynamical decoupling simulator (C++ core)";
    m.attr("__version__") = kVersion;

    m.def("sequence_names", [] {
        return std::vector<std::string>{"fid",  "hahn", "cp",   "cpmg", "xy4s",
                                        "xy4a", "xy8s", "xy8a", "kddx", "kddxy"};
    });

    m.def(
        "rotation_propagator",
        [](double phase, double angle) { return to_numpy(rotation_propagator(phase, angle)); },
        py::arg("phase"), py::arg("angle"), "exp(-i angle S_phi) as a 2x2 array");

    m.def(
        "imperfect_pulse",
        [](double phase, double eps, double delta_omega_z, const std::string& mode, double t_p,
           double offset) {
            PulseSpec p;
            p.phase = phase;
            p.eps = eps;
            p.t_p = t_p;
            p.offset = offset;
            return to_numpy(imperfect_pulse(p, delta_omega_z, mode_of(mode)));
        },
        py::arg("phase"), py::arg("eps") = 0.0, py::arg("delta_omega_z") = 0.0,
        py::arg("mode") = "delta", py::arg("t_p") = 37.5e-6, py::arg("offset") = 0.0);

    m.def(
        "cycle_info",
        [](const std::string& kind, double tau, const std::string& mode, double t_p) {
            PulseSpec p;
            p.t_p = t_p;
            const SequenceCycle c = build_cycle(kind_of(kind), tau, p, mode_of(mode));
            py::dict d;
            d["label"] = c.label;
            d["tau_c"] = c.tau_c;
            d["pulse_count"] = c.pulse_count;
            d["time_symmetric"] = c.time_symmetric;
            std::vector<double> phases;
            for (const auto& e : c.elements)
                if (e.kind == SequenceElement::Kind::pulse) phases.push_back(e.pulse.phase);
            d["pulse_phases"] = phases;
            return d;
        },
        py::arg("kind"), py::arg("tau"), py::arg("mode") = "delta", py::arg("t_p") = 37.5e-6);

    m.def(
        "magnus_terms",
        [](const std::string& kind, double tau, double eps, int max_order) {
            const SequenceCycle c = build_cycle(kind_of(kind), tau, PulseSpec{});
            const MagnusResult r = magnus_terms(c, eps, max_order);
            std::vector<py::array_t<std::complex<double>>> out;
            for (int k = 0; k <= max_order; ++k) out.push_back(to_numpy(r.terms[std::size_t(k)]));
            return out;
        },
        py::arg("kind"), py::arg("tau"), py::arg("eps"), py::arg("max_order") = 2,
        "Magnus terms of the cycle generator (rad/s), orders 0..max_order");

    m.def(
        "effective_hamiltonian_components",
        [](const std::string& kind, double tau, double eps) {
            const SequenceCycle c = build_cycle(kind_of(kind), tau, PulseSpec{});
            return spin_components(effective_hamiltonian(c.propagator_with_eps(eps), c.tau_c));
        },
        py::arg("kind"), py::arg("tau"), py::arg("eps"),
        "(Sx, Sy, Sz) components of the exact cycle effective Hamiltonian");

    m.def(
        "aht_table",
        [](double tau) {
            std::vector<py::dict> rows;
            for (const auto& r : aht_verification_table(tau)) {
                py::dict d;
                d["sequence"] = r.sequence;
                d["order"] = r.order;
                d["component"] = r.component;
                d["predicted"] = r.predicted;
                d["magnus"] = r.magnus;
                d["expansion"] = r.expansion;
                rows.push_back(d);
            }
            return rows;
        },
        py::arg("tau") = 1e-3);

    m.def(
        "run_ensemble",
        [](const std::string& kind, double tau, double eps, const std::string& mode,
           const std::string& init, double duration, int ensemble, std::uint64_t seed,
           const std::string& preset, double sigma_static, double sigma_ou, double tau_corr,
           double t2_irr, double dt, double t_p, double offset, int sample_points, int threads) {
            ExperimentConfig c;
            c.kind = kind_of(kind);
            c.tau = tau;
            c.pulse.eps = eps;
            c.pulse.t_p = t_p;
            c.pulse.offset = offset;
            c.mode = mode_of(mode);
            c.init = init_of(init, c.kind);
            c.noise = noise_of(preset, sigma_static, sigma_ou, tau_corr, t2_irr, seed);
            c.duration = duration;
            c.ensemble = ensemble;
            c.noise_dt = dt;
            c.sample_points = sample_points;
            return series_to_dict(run_ensemble(c, threads));
        },
        py::arg("kind"), py::arg("tau") = 1e-3, py::arg("eps") = 0.001, py::arg("mode") = "delta",
        py::arg("init") = "default", py::arg("duration") = 0.5, py::arg("ensemble") = 2000,
        py::arg("seed") = 0, py::arg("preset") = "calibrated", py::arg("sigma_static") = -1.0,
        py::arg("sigma_ou") = -1.0, py::arg("tau_corr") = -1.0, py::arg("t2_irr") = -1.0,
        py::arg("dt") = 5e-3, py::arg("t_p") = 37.5e-6, py::arg("offset") = 0.0,
        py::arg("sample_points") = 25, py::arg("threads") = 0,
        "ensemble-averaged echo series as {'times', 'amplitudes', 'stderrs'}");

    m.def(
        "error_per_pulse",
        [](const py::array_t<double>& times, const py::array_t<double>& amplitudes,
           const py::object& stderrs, int pulses_per_cycle, double t2_irr) {
            const ErrorPerPulse e =
                error_per_pulse(series_from(times, amplitudes, stderrs), pulses_per_cycle, t2_irr);
            py::dict d;
            d["pulses"] = e.pulses;
            d["eta"] = py::array_t<double>(py::ssize_t(e.eta.size()), e.eta.data());
            d["eta_stderr"] = py::array_t<double>(py::ssize_t(e.eta_stderr.size()), e.eta_stderr.data());
            d["truncated"] = e.truncated;
            return d;
        },
        py::arg("times"), py::arg("amplitudes"), py::arg("stderrs") = py::none(),
        py::arg("pulses_per_cycle") = 1, py::arg("t2_irr") = 0.276);

    m.def(
        "fit_single_exponential",
        [](const py::array_t<double>& times, const py::array_t<double>& amplitudes,
           const py::object& stderrs) {
            return fit_to_dict(fit_single_exponential(series_from(times, amplitudes, stderrs)));
        },
        py::arg("times"), py::arg("amplitudes"), py::arg("stderrs") = py::none());

    m.def(
        "fit_double_exponential",
        [](const py::array_t<double>& times, const py::array_t<double>& amplitudes,
           const py::object& stderrs) {
            return fit_to_dict(fit_double_exponential(series_from(times, amplitudes, stderrs)));
        },
        py::arg("times"), py::arg("amplitudes"), py::arg("stderrs") = py::none());

    m.def("ou_chi_fid", &ou_chi_fid, py::arg("t"), py::arg("sigma"), py::arg("tau_corr"));
    m.def("ou_chi_echo", &ou_chi_echo, py::arg("t"), py::arg("sigma"), py::arg("tau_corr"));
}
