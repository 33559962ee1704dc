#include "ddsim/noise.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ddsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per (seed, realization, purpose). Workers own their
// streams, so ensembles parallelize with no shared state.
std::mt19937_64 make_stream(std::uint64_t seed, int realization_index, std::uint64_t purpose) {
    std::uint64_t s = splitmix64(seed ^ purpose);
    s = splitmix64(s + static_cast<std::uint64_t>(realization_index));
    return std::mt19937_64(s);
}

constexpr std::uint64_t kStaticStream = 0x5357415449435354ULL;
constexpr std::uint64_t kOuStream = 0x4f55505254524a43ULL;

}  // namespace

void NoiseModel::validate() const {
    if (sigma_static < 0) throw std::invalid_argument("noise: sigma_static must be >= 0");
    if (sigma_ou < 0) throw std::invalid_argument("noise: sigma_ou must be >= 0");
    if (!(tau_corr > 0)) throw std::invalid_argument("noise: tau_corr must be > 0");
    if (!(t2_irr > 0)) throw std::invalid_argument("noise: t2_irr must be > 0");
}

NoiseModel noise_preset(const std::string& name, std::uint64_t seed) {
    NoiseModel m;
    m.seed = seed;
    if (name == "calibrated") {
        m.sigma_static = std::sqrt(2.0) / 2.9e-3;
        m.sigma_ou = 32.0;
        m.tau_corr = 0.12;
        m.t2_irr = 0.276;
        return m;
    }
    if (name == "off") {
        m.sigma_static = 0.0;
        m.sigma_ou = 0.0;
        m.tau_corr = 0.12;
        m.t2_irr = std::numeric_limits<double>::infinity();
        return m;
    }
    throw std::invalid_argument("noise: unknown preset '" + name + "'");
}

double NoiseTrajectory::value_at(double t) const {
    if (values.empty()) return 0.0;
    if (t < 0 || t > span() * (1 + 1e-12) + 1e-300)
        throw std::out_of_range("noise trajectory: query outside grid span");
    const double x = t / dt;
    auto i = static_cast<std::size_t>(x);
    if (i >= values.size() - 1) return values.back();
    const double f = x - static_cast<double>(i);
    return values[i] * (1 - f) + values[i + 1] * f;
}

double sample_static_offset(const NoiseModel& model, int realization_index) {
    if (model.sigma_static == 0) return 0.0;
    auto rng = make_stream(model.seed, realization_index, kStaticStream);
    std::normal_distribution<double> n(0.0, model.sigma_static);
    return n(rng);
}

NoiseTrajectory generate_ou_trajectory(const NoiseModel& model, double dt, double total_time,
                                       int realization_index) {
    if (!(dt > 0)) throw std::invalid_argument("noise: dt must be > 0");
    if (dt >= total_time) throw std::invalid_argument("noise: dt must be < total time");

    const auto steps = static_cast<std::size_t>(std::ceil(total_time / dt - 1e-12));
    NoiseTrajectory traj;
    traj.dt = dt;
    traj.values.assign(steps + 1, 0.0);

    if (model.sigma_ou > 0) {
        auto rng = make_stream(model.seed, realization_index, kOuStream);
        std::normal_distribution<double> n(0.0, 1.0);
        const double a = std::exp(-dt / model.tau_corr);
        const double s = model.sigma_ou * std::sqrt(1.0 - a * a);
        double x = model.sigma_ou * n(rng);  // stationary initial sample
        traj.values[0] = x;
        for (std::size_t i = 1; i <= steps; ++i) {
            x = a * x + s * n(rng);
            traj.values[i] = x;
        }
    }

    traj.integral_prefix.assign(traj.values.size(), 0.0);
    for (std::size_t i = 1; i < traj.values.size(); ++i)
        traj.integral_prefix[i] =
            traj.integral_prefix[i - 1] + 0.5 * dt * (traj.values[i - 1] + traj.values[i]);
    return traj;
}

namespace {

// trapezoid integral of the interpolated field from 0 to t
double prefix_at(const NoiseTrajectory& traj, double t) {
    const double x = t / traj.dt;
    auto i = static_cast<std::size_t>(x);
    if (i >= traj.values.size() - 1) return traj.integral_prefix.back();
    const double dt_part = t - static_cast<double>(i) * traj.dt;
    const double f = x - static_cast<double>(i);
    const double v_t = traj.values[i] * (1 - f) + traj.values[i + 1] * f;
    return traj.integral_prefix[i] + 0.5 * dt_part * (traj.values[i] + v_t);
}

}  // namespace

double accumulated_phase(const NoiseTrajectory& traj, double t0, double t1) {
    if (!(t0 < t1)) throw std::invalid_argument("accumulated_phase: need t0 < t1");
    if (traj.values.empty()) return 0.0;
    if (t0 < 0 || t1 > traj.span() * (1 + 1e-12) + 1e-300)
        throw std::out_of_range("accumulated_phase: interval outside grid span");
    return prefix_at(traj, t1) - prefix_at(traj, t0);
}

double irreducible_envelope(double t, const NoiseModel& model) {
    if (t < 0) throw std::invalid_argument("irreducible_envelope: t must be >= 0");
    if (std::isinf(model.t2_irr)) return 1.0;
    return std::exp(-t / model.t2_irr);
}

double ou_chi_fid(double t, double sigma, double tau_corr) {
    const double x = t / tau_corr;
    return sigma * sigma * tau_corr * tau_corr * (std::exp(-x) + x - 1.0);
}

double ou_chi_echo(double t, double sigma, double tau_corr) {
    const double x = t / tau_corr;
    return sigma * sigma * tau_corr * tau_corr * (x - 3.0 + 4.0 * std::exp(-0.5 * x) - std::exp(-x));
}

}  // namespace ddsim
