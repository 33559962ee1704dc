#include "ddsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ddsim {

namespace {

struct Spinor {
    cplx a, b;
};

Spinor initial_spinor(InitialVariant v) {
    const double r = 1.0 / std::sqrt(2.0);
    if (v == InitialVariant::parallel) return {cplx(r), cplx(0, r)};  // |+y>
    return {cplx(r), cplx(r)};                                        // |+x>
}

void apply_matrix(Spinor& s, const Mat2& u) {
    const cplx a = u.m[0] * s.a + u.m[1] * s.b;
    const cplx b = u.m[2] * s.a + u.m[3] * s.b;
    s.a = a;
    s.b = b;
}

// z-rotation by phase phi: diag(e^{-i phi/2}, e^{+i phi/2})
void apply_z_phase(Spinor& s, double phi) {
    const cplx p(std::cos(0.5 * phi), -std::sin(0.5 * phi));
    s.a *= p;
    s.b *= std::conj(p);
}

// 2 Re<psi|S_prep|psi>
double prepared_component(const Spinor& s, InitialVariant v) {
    const cplx z = std::conj(s.a) * s.b;
    return v == InitialVariant::parallel ? 2.0 * z.imag() : 2.0 * z.real();
}

struct RealizationContext {
    const ExperimentConfig* cfg;
    const SequenceCycle* cycle;               // cyclic kinds
    const std::vector<Mat2>& delta_pulses;    // precomputed pulse propagators (delta mode)
};

// Evolve one cycle in place. t is advanced past every element.
void evolve_cycle(const RealizationContext& ctx, Spinor& psi, double& t, double static_offset,
                  const NoiseTrajectory* traj, std::vector<double>* samples,
                  std::vector<double>* sample_times) {
    std::size_t pulse_idx = 0;
    for (const auto& e : ctx.cycle->elements) {
        if (e.kind == SequenceElement::Kind::delay) {
            double phi = static_offset * e.duration;
            if (traj) phi += accumulated_phase(*traj, t, t + e.duration);
            apply_z_phase(psi, phi);
            t += e.duration;
        } else {
            if (ctx.cfg->mode == PulseMode::delta) {
                apply_matrix(psi, ctx.delta_pulses[pulse_idx]);
            } else {
                // slow field frozen at the pulse midpoint
                double dw = static_offset;
                if (traj) dw += traj->value_at(t + 0.5 * e.duration);
                apply_matrix(psi, imperfect_pulse(e.pulse, dw, PulseMode::finite));
            }
            t += e.duration;
            ++pulse_idx;
        }
        if (samples) {
            samples->push_back(prepared_component(psi, ctx.cfg->init));
            sample_times->push_back(t);
        }
    }
}

// Raw (pre-envelope) amplitudes of one realization at the series times.
std::vector<double> realization_amplitudes(const ExperimentConfig& cfg, const SequenceCycle* cycle,
                                           const std::vector<Mat2>& delta_pulses,
                                           const std::vector<double>& times, bool intra,
                                           int realization_index) {
    const double static_offset = sample_static_offset(cfg.noise, realization_index);
    const bool needs_ou = cfg.noise.sigma_ou > 0;
    NoiseTrajectory traj;
    if (needs_ou)
        traj = generate_ou_trajectory(cfg.noise, cfg.noise_dt,
                                      cfg.duration + 2 * cfg.noise_dt, realization_index);
    const NoiseTrajectory* tp = needs_ou ? &traj : nullptr;

    RealizationContext ctx{&cfg, cycle, delta_pulses};

    std::vector<double> amps;
    amps.reserve(times.size());
    amps.push_back(1.0);

    if (is_cyclic(cfg.kind)) {
        Spinor psi = initial_spinor(cfg.init);
        double t = 0;
        const int ncyc = cycles_for_duration(cfg.duration, *cycle);
        if (intra) {
            std::vector<double> vals, ts;
            for (int c = 0; c < ncyc; ++c) evolve_cycle(ctx, psi, t, static_offset, tp, &vals, &ts);
            for (const double v : vals) amps.push_back(v);
        } else {
            for (int c = 0; c < ncyc; ++c) {
                evolve_cycle(ctx, psi, t, static_offset, tp, nullptr, nullptr);
                amps.push_back(prepared_component(psi, cfg.init));
            }
        }
        return amps;
    }

    // fid / hahn: each sample time is its own little experiment. The echo
    // amplitude is measured relative to the ideally pulsed state, so a
    // perfect hahn echo reads +1 even though a single pi_y pulse refocuses
    // the |+x> state along -x.
    double ref_sign = 1.0;
    if (cfg.kind == SequenceKind::hahn) {
        Spinor ideal = initial_spinor(cfg.init);
        apply_matrix(ideal, rotation_propagator(0.5 * 3.14159265358979323846, cfg.pulse.nominal_angle));
        ref_sign = prepared_component(ideal, cfg.init) < 0 ? -1.0 : 1.0;
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double tk = times[k];
        Spinor psi = initial_spinor(cfg.init);
        if (cfg.kind == SequenceKind::fid) {
            double phi = static_offset * tk;
            if (tp) phi += accumulated_phase(traj, 0, tk);
            apply_z_phase(psi, phi);
        } else {  // hahn: single pi pulse at tk/2
            double phi = static_offset * 0.5 * tk;
            if (tp) phi += accumulated_phase(traj, 0, 0.5 * tk);
            apply_z_phase(psi, phi);
            PulseSpec p = cfg.pulse;
            p.phase = 0.5 * 3.14159265358979323846;  // y pulse
            double dw = static_offset;
            if (tp && cfg.mode == PulseMode::finite) dw += traj.value_at(0.5 * tk);
            apply_matrix(psi, imperfect_pulse(p, dw, cfg.mode));
            phi = static_offset * 0.5 * tk;
            if (tp) phi += accumulated_phase(traj, 0.5 * tk, tk);
            apply_z_phase(psi, phi);
        }
        amps.push_back(ref_sign * prepared_component(psi, cfg.init));
    }
    return amps;
}

std::vector<double> series_times(const ExperimentConfig& cfg, const SequenceCycle* cycle, bool intra) {
    std::vector<double> times{0.0};
    if (is_cyclic(cfg.kind)) {
        const int ncyc = cycles_for_duration(cfg.duration, *cycle);
        if (intra) {
            double t = 0;
            for (int c = 0; c < ncyc; ++c)
                for (const auto& e : cycle->elements) {
                    t += e.duration;
                    times.push_back(t);
                }
        } else {
            for (int c = 1; c <= ncyc; ++c) times.push_back(c * cycle->tau_c);
        }
    } else {
        for (int k = 1; k <= cfg.sample_points; ++k)
            times.push_back(cfg.duration * k / cfg.sample_points);
    }
    return times;
}

EchoSeries run_ensemble_impl(const ExperimentConfig& cfg, int threads, bool intra) {
    cfg.validate();
    SequenceCycle cycle;
    std::vector<Mat2> delta_pulses;
    if (is_cyclic(cfg.kind)) {
        cycle = build_cycle(cfg.kind, cfg.tau, cfg.pulse, cfg.mode);
        if (cfg.mode == PulseMode::delta)
            for (const auto& e : cycle.elements)
                if (e.kind == SequenceElement::Kind::pulse)
                    delta_pulses.push_back(imperfect_pulse(e.pulse, 0.0, PulseMode::delta));
    }
    const std::vector<double> times = series_times(cfg, &cycle, intra);
    const std::size_t npts = times.size();
    const int n = cfg.ensemble;

    std::vector<double> sum(npts, 0.0), sumsq(npts, 0.0);

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    const int chunk = std::max(64, nthreads * 16);

    std::vector<std::vector<double>> rows(static_cast<std::size_t>(chunk));
    for (int base = 0; base < n; base += chunk) {
        const int count = std::min(chunk, n - base);
        auto worker = [&](int w) {
            for (int i = w; i < count; i += nthreads)
                rows[static_cast<std::size_t>(i)] = realization_amplitudes(
                    cfg, &cycle, delta_pulses, times, intra, base + i);
        };
        if (nthreads == 1 || count == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(nthreads));
            for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker, w);
            for (auto& th : pool) th.join();
        }
        // reduction strictly in realization order
        for (int i = 0; i < count; ++i)
            for (std::size_t k = 0; k < npts; ++k) {
                sum[k] += rows[static_cast<std::size_t>(i)][k];
                sumsq[k] += rows[static_cast<std::size_t>(i)][k] * rows[static_cast<std::size_t>(i)][k];
            }
    }

    EchoSeries out;
    out.times = times;
    out.amplitudes.resize(npts);
    out.stderrs.assign(npts, 0.0);
    for (std::size_t k = 0; k < npts; ++k) {
        const double mean = sum[k] / n;
        const double env = irreducible_envelope(times[k], cfg.noise);
        out.amplitudes[k] = mean * env;
        if (n >= 2) {
            const double var = std::max(0.0, (sumsq[k] - n * mean * mean) / (n - 1));
            out.stderrs[k] = std::sqrt(var / n) * env;
        }
    }
    out.amplitudes[0] = 1.0;  // exact by construction
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    noise.validate();
    if (ensemble < 1) throw std::invalid_argument("run: ensemble must be >= 1");
    if (!(duration > 0)) throw std::invalid_argument("run: duration must be > 0");
    if (!(noise_dt > 0)) throw std::invalid_argument("run: dt must be > 0");
    if (noise.sigma_ou > 0 && noise_dt > noise.tau_corr / 10 * (1 + 1e-12))
        throw std::invalid_argument("run: dt must be <= tau_corr/10 to resolve the slow noise");
    if (is_cyclic(kind)) {
        if (!(tau > 0) && mode == PulseMode::delta)
            throw std::invalid_argument("sequence: tau must be > 0 for delta-pulse cycles");
        if (tau < 0) throw std::invalid_argument("sequence: tau must be >= 0");
    } else {
        if (sample_points < 1) throw std::invalid_argument("run: sample_points must be >= 1");
    }
    if (mode == PulseMode::finite && !(pulse.t_p > 0))
        throw std::invalid_argument("pulse: t_p must be > 0 in finite mode");
}

EchoSeries run_trajectory(const ExperimentConfig& config, int realization_index) {
    config.validate();
    SequenceCycle cycle;
    std::vector<Mat2> delta_pulses;
    if (is_cyclic(config.kind)) {
        cycle = build_cycle(config.kind, config.tau, config.pulse, config.mode);
        if (config.mode == PulseMode::delta)
            for (const auto& e : cycle.elements)
                if (e.kind == SequenceElement::Kind::pulse)
                    delta_pulses.push_back(imperfect_pulse(e.pulse, 0.0, PulseMode::delta));
    }
    const std::vector<double> times = series_times(config, &cycle, false);
    const std::vector<double> raw =
        realization_amplitudes(config, &cycle, delta_pulses, times, false, realization_index);

    EchoSeries out;
    out.times = times;
    out.stderrs.assign(times.size(), 0.0);
    out.amplitudes.resize(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        out.amplitudes[k] = raw[k] * irreducible_envelope(times[k], config.noise);
    out.amplitudes[0] = 1.0;
    return out;
}

EchoSeries run_ensemble(const ExperimentConfig& config, int threads) {
    return run_ensemble_impl(config, threads, false);
}

EchoSeries run_ensemble_intra(const ExperimentConfig& config, int threads) {
    if (!is_cyclic(config.kind))
        throw std::invalid_argument("intra-cycle sampling requires a cyclic sequence");
    return run_ensemble_impl(config, threads, true);
}

ErrorPerPulse error_per_pulse(const EchoSeries& series, int pulses_per_cycle, double t2_irr) {
    if (pulses_per_cycle < 1) throw std::invalid_argument("error_per_pulse: pulses_per_cycle must be >= 1");
    if (series.times.empty() || series.amplitudes.empty())
        throw std::invalid_argument("error_per_pulse: empty series");

    NoiseModel env_model;
    env_model.t2_irr = t2_irr;

    ErrorPerPulse out;
    for (std::size_t k = 1; k < series.times.size(); ++k) {
        const double env = irreducible_envelope(series.times[k], env_model);
        const double s = series.amplitudes[k] / env;
        if (!(s > 0)) {
            out.truncated = true;
            break;
        }
        const int n = static_cast<int>(k) * pulses_per_cycle;
        out.pulses.push_back(n);
        out.eta.push_back(-std::log(s) / n);
        const double se = (k < series.stderrs.size() ? series.stderrs[k] : 0.0) / env;
        out.eta_stderr.push_back(se / (s * n));
    }
    return out;
}

}  // namespace ddsim
