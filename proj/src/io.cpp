#include "ddsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddsim/version.hpp"
#include "json.hpp"

namespace ddsim {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_tau_us(double tau_s) {
    const double us = tau_s * 1e6;
    char buf[64];
    if (std::abs(us - std::round(us)) < 1e-9 * std::max(1.0, std::abs(us)))
        std::snprintf(buf, sizeof(buf), "%.0f", us);
    else
        std::snprintf(buf, sizeof(buf), "%g", us);
    return buf;
}

}  // namespace

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    const auto dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string echo_series_csv(const EchoSeries& series) {
    std::ostringstream out;
    out << "time_s,amplitude,stderr\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
        out << fmt(series.times[i]) << ',' << fmt(series.amplitudes[i]) << ','
            << fmt(i < series.stderrs.size() ? series.stderrs[i] : 0.0) << '\n';
    return out.str();
}

EchoSeries read_echo_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    EchoSeries s;
    std::string line;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("time_s", 0) == 0) continue;  // header row present
        }
        double t, a, se = 0;
        const int n = std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &a, &se);
        if (n < 2)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed CSV row '" + line + "'");
        s.times.push_back(t);
        s.amplitudes.push_back(a);
        s.stderrs.push_back(se);
    }
    if (s.times.empty()) throw std::runtime_error(path + ": no data rows");
    return s;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream out;
    out << "sequence,tau_s,model,a,T2f_s,b,T2s_s,residual,converged\n";
    for (const auto& r : rows) {
        const bool dbl = r.fit.is_double;
        out << r.sequence << ',' << fmt(r.tau) << ',' << (dbl ? "double" : "single") << ','
            << (dbl ? fmt(r.fit.a) : std::string()) << ',' << (dbl ? fmt(r.fit.t2_fast) : std::string())
            << ',' << fmt(r.fit.b) << ',' << fmt(r.fit.t2_slow) << ',' << fmt(r.fit.residual) << ','
            << (r.fit.converged ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string aht_table_csv(const std::vector<AhtRow>& rows) {
    std::ostringstream out;
    out << "sequence,order,component,predicted,magnus,expansion,rel_dev\n";
    for (const auto& r : rows) {
        const double dev = r.predicted != 0
                               ? (r.magnus - r.predicted) / r.predicted
                               : r.magnus;
        out << r.sequence << ',' << r.order << ',' << r.component << ',' << fmt(r.predicted) << ','
            << fmt(r.magnus) << ',' << fmt(r.expansion) << ',' << fmt(dev) << '\n';
    }
    return out.str();
}

std::string aht_table_text(const std::vector<AhtRow>& rows) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-8s %-5s %-4s %14s %14s %14s %12s\n", "seq", "order", "comp",
                  "predicted", "magnus", "expansion", "rel_dev");
    out << buf;
    for (const auto& r : rows) {
        const double dev = r.predicted != 0 ? (r.magnus - r.predicted) / r.predicted : r.magnus;
        std::snprintf(buf, sizeof(buf), "%-8s %-5d %-4s %14.6e %14.6e %14.6e %12.3e\n",
                      r.sequence.c_str(), r.order, r.component.c_str(), r.predicted, r.magnus,
                      r.expansion, dev);
        out << buf;
    }
    out << "(coefficients of eps^(order+1)/tau on the named spin component)\n";
    return out.str();
}

std::string series_filename(const RunConfig& cfg) {
    std::string name = cfg.output.label.empty() ? "" : cfg.output.label + "_";
    name += sequence_label(cfg.experiment.kind);
    if (is_cyclic(cfg.experiment.kind)) name += "_tau" + fmt_tau_us(cfg.experiment.tau);
    return name + ".csv";
}

std::string manifest_json(const std::string& command, const RunConfig& cfg,
                          const std::vector<std::string>& outputs, double wall_seconds) {
    nlohmann::json j;
    j["tool"] = "ddsim";
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = cfg.experiment.noise.seed;
    j["config"] = render_config(cfg);
    j["outputs"] = outputs;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2) + "\n";
}

RunConfig config_from_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest '" + manifest_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("manifest '" + manifest_path + "': " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_string())
        throw ConfigError("manifest '" + manifest_path + "' has no config snapshot");
    return parse_config_text(j["config"].get<std::string>());
}

}  // namespace ddsim
