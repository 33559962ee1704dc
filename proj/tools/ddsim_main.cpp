#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ddsim/io.hpp"
#include "ddsim/version.hpp"

namespace fs = std::filesystem;
using namespace ddsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonArgs {
    std::string config_path;
    std::string replay_path;
    std::string out_dir;
    int threads = -1;      // -1: take from config
    long long seed = -1;   // -1: take from config
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg;
    if (!args.replay_path.empty())
        cfg = config_from_manifest(args.replay_path);
    else if (!args.config_path.empty())
        cfg = parse_config_file(args.config_path);
    else
        throw ConfigError("either --config or --replay is required");

    if (args.seed >= 0) cfg.experiment.noise.seed = static_cast<std::uint64_t>(args.seed);
    if (args.threads >= 0) cfg.threads = args.threads;
    if (const char* env = std::getenv("DDSIM_OUTDIR"); env && *env) cfg.output.dir = env;
    if (!args.out_dir.empty()) cfg.output.dir = args.out_dir;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
    auto* c = cmd->add_option("-c,--config", args.config_path, "run config file");
    auto* r = cmd->add_option("--replay", args.replay_path, "re-run the config embedded in a manifest");
    if (needs_config) {
        c->excludes(r);
        r->excludes(c);
    }
    cmd->add_option("-o,--out", args.out_dir, "output directory (overrides config and DDSIM_OUTDIR)");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    cmd->add_option("--seed", args.seed, "base seed override");
}

std::string stem_of(const RunConfig& cfg) {
    const std::string f = series_filename(cfg);
    return f.substr(0, f.size() - 4);
}

int run_simulate(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = load_config(args);
    const EchoSeries series = run_ensemble(cfg.experiment, cfg.threads);

    const fs::path dir(cfg.output.dir);
    std::vector<std::string> outputs;
    const std::string main_csv = series_filename(cfg);
    atomic_write_file(dir / main_csv, echo_series_csv(series));
    outputs.push_back(main_csv);

    if (cfg.experiment.intra_cycle && is_cyclic(cfg.experiment.kind)) {
        const EchoSeries fine = run_ensemble_intra(cfg.experiment, cfg.threads);
        const std::string fine_csv = stem_of(cfg) + "_intracycle.csv";
        atomic_write_file(dir / fine_csv, echo_series_csv(fine));
        outputs.push_back(fine_csv);
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string manifest_name = stem_of(cfg) + ".manifest.json";
    atomic_write_file(dir / manifest_name, manifest_json("simulate", cfg, outputs, wall));

    std::printf("wrote %s (%zu points, N=%d) and %s in %.2f s\n", (dir / main_csv).c_str(),
                series.times.size(), cfg.experiment.ensemble, (dir / manifest_name).c_str(), wall);
    return 0;
}

int run_scan(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(args);
    if (cfg.scan.taus.empty()) throw ConfigError("[scan] tau_us: a scan needs a tau grid");

    const auto rows = decay_vs_tau_scan(cfg.experiment, cfg.scan.taus, cfg.scan.kinds, cfg.scan.model,
                                        cfg.threads);
    const fs::path dir(cfg.output.dir);
    const std::string csv_name = (cfg.output.label.empty() ? "scan" : cfg.output.label + "_scan");
    atomic_write_file(dir / (csv_name + ".csv"), scan_csv(rows));

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    atomic_write_file(dir / (csv_name + ".manifest.json"),
                      manifest_json("scan", cfg, {csv_name + ".csv"}, wall));

    int failed = 0;
    for (const auto& r : rows)
        if (!r.fit.converged) ++failed;
    std::printf("wrote %s: %zu rows (%d flagged) in %.2f s\n", (dir / (csv_name + ".csv")).c_str(),
                rows.size(), failed, wall);
    return 0;
}

int run_aht_verify(double tau_us, const std::string& out_dir) {
    const double tau = tau_us * 1e-6;
    const auto rows = aht_verification_table(tau);
    std::fputs(aht_table_text(rows).c_str(), stdout);
    if (!out_dir.empty()) {
        atomic_write_file(fs::path(out_dir) / "aht_verify.csv", aht_table_csv(rows));
        std::printf("wrote %s\n", (fs::path(out_dir) / "aht_verify.csv").c_str());
    }
    return 0;
}

int run_fit(const std::string& csv, const std::string& model) {
    const EchoSeries series = read_echo_series_csv(csv);
    const auto print = [](const char* name, const DecayFit& f) {
        std::printf("%-7s a=%-12.6g T2f_s=%-12.6g b=%-12.6g T2s_s=%-12.6g residual=%-10.4g "
                    "converged=%s%s%s\n",
                    name, f.a, f.t2_fast, f.b, f.t2_slow, f.residual, f.converged ? "true" : "false",
                    f.fallback ? " fallback" : "", f.message.empty() ? "" : (" : " + f.message).c_str());
    };
    if (model == "single" || model == "both") print("single", fit_single_exponential(series));
    if (model == "double" || model == "both") print("double", fit_double_exponential(series));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-qubit dynamical decoupling simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonArgs sim_args, scan_args;
    auto* sim = app.add_subcommand("simulate", "run one ensemble and write the echo series CSV");
    add_common(sim, sim_args, true);

    auto* scan = app.add_subcommand("scan", "decay-time scan over the tau grid and sequence list");
    add_common(scan, scan_args, true);

    double aht_tau_us = 1000.0;
    std::string aht_out;
    auto* aht = app.add_subcommand("aht-verify",
                                   "compare closed-form average-Hamiltonian coefficients against "
                                   "numeric Magnus and propagator-expansion values");
    aht->add_option("--tau-us", aht_tau_us, "inter-pulse delay in microseconds")->check(CLI::PositiveNumber);
    aht->add_option("-o,--out", aht_out, "also write aht_verify.csv to this directory");

    std::string fit_csv, fit_model = "both";
    auto* fit = app.add_subcommand("fit", "re-run decay fits on an existing echo-series CSV");
    fit->add_option("--csv", fit_csv, "echo series CSV (time_s,amplitude,stderr)")->required();
    fit->add_option("--model", fit_model, "single | double | both")
        ->check(CLI::IsMember({"single", "double", "both"}));

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return run_simulate(sim_args);
        if (scan->parsed()) return run_scan(scan_args);
        if (aht->parsed()) return run_aht_verify(aht_tau_us, aht_out);
        if (fit->parsed()) return run_fit(fit_csv, fit_model);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return 0;
}
