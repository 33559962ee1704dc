#include "ddsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace ddsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& field, const std::string& v) {
    const std::string s = lower(trim(v));
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(field + ": expected a number, got '" + v + "'");
    }
}

long parse_int(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(trim(v), &pos, 10);
        if (pos != trim(v).size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(field + ": expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(trim(v), &pos, 10);
        if (pos != trim(v).size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(field + ": expected a non-negative integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& field, const std::string& v) {
    const std::string s = lower(trim(v));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(field + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',') {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

SequenceKind parse_kind_or_throw(const std::string& field, const std::string& v) {
    const auto k = parse_sequence_kind(trim(v));
    if (!k) throw ConfigError(field + ": unknown sequence '" + trim(v) + "'");
    return *k;
}

}  // namespace

void RunConfig::validate() const {
    try {
        experiment.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (threads < 0) throw ConfigError("[run] threads: must be >= 0");
    if (scan.model != "single" && scan.model != "double")
        throw ConfigError("[scan] model: must be 'single' or 'double'");
    if (output.dir.empty()) throw ConfigError("[output] dir: must not be empty");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    cfg.experiment.noise = noise_preset("calibrated");
    cfg.experiment.pulse.t_p = 37.5e-6;
    cfg.experiment.pulse.eps = 0.001;
    std::string init_mode = "default";

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header '" + s + "'");
            section = lower(trim(s.substr(1, s.size() - 2)));
            if (section != "sequence" && section != "pulse" && section != "noise" && section != "run" &&
                section != "scan" && section != "output")
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + s + "'");
        const std::string key = lower(trim(s.substr(0, eq)));
        const std::string val = trim(s.substr(eq + 1));
        const std::string field = "[" + section + "] " + key;

        if (section == "sequence") {
            if (key == "kind") {
                cfg.experiment.kind = parse_kind_or_throw(field, val);
            } else if (key == "tau_us") {
                cfg.experiment.tau = parse_double(field, val) * 1e-6;
            } else if (key == "tau_s") {
                cfg.experiment.tau = parse_double(field, val);
            } else if (key == "init") {
                const std::string v = lower(val);
                if (v != "parallel" && v != "perpendicular" && v != "default")
                    throw ConfigError(field + ": must be parallel, perpendicular or default");
                init_mode = v;
            } else {
                throw ConfigError(field + ": unknown key");
            }
        } else if (section == "pulse") {
            if (key == "mode") {
                const std::string v = lower(val);
                if (v == "delta") cfg.experiment.mode = PulseMode::delta;
                else if (v == "finite") cfg.experiment.mode = PulseMode::finite;
                else throw ConfigError(field + ": must be delta or finite");
            } else if (key == "t_p_us") {
                cfg.experiment.pulse.t_p = parse_double(field, val) * 1e-6;
            } else if (key == "t_p_s") {
                cfg.experiment.pulse.t_p = parse_double(field, val);
            } else if (key == "epsilon") {
                cfg.experiment.pulse.eps = parse_double(field, val);
            } else if (key == "offset_rad_s") {
                cfg.experiment.pulse.offset = parse_double(field, val);
            } else {
                throw ConfigError(field + ": unknown key");
            }
        } else if (section == "noise") {
            if (key == "preset") {
                try {
                    cfg.experiment.noise = noise_preset(lower(val), cfg.experiment.noise.seed);
                } catch (const std::exception& e) {
                    throw ConfigError(field + ": " + e.what());
                }
            } else if (key == "sigma_static_rad_s") {
                cfg.experiment.noise.sigma_static = parse_double(field, val);
            } else if (key == "sigma_ou_rad_s") {
                cfg.experiment.noise.sigma_ou = parse_double(field, val);
            } else if (key == "tau_corr_ms") {
                cfg.experiment.noise.tau_corr = parse_double(field, val) * 1e-3;
            } else if (key == "tau_corr_s") {
                cfg.experiment.noise.tau_corr = parse_double(field, val);
            } else if (key == "t2_irr_ms") {
                cfg.experiment.noise.t2_irr = parse_double(field, val) * 1e-3;
            } else if (key == "t2_irr_s") {
                cfg.experiment.noise.t2_irr = parse_double(field, val);
            } else {
                throw ConfigError(field + ": unknown key");
            }
        } else if (section == "run") {
            if (key == "duration_ms") cfg.experiment.duration = parse_double(field, val) * 1e-3;
            else if (key == "duration_s") cfg.experiment.duration = parse_double(field, val);
            else if (key == "ensemble") cfg.experiment.ensemble = static_cast<int>(parse_int(field, val));
            else if (key == "dt_ms") cfg.experiment.noise_dt = parse_double(field, val) * 1e-3;
            else if (key == "dt_s") cfg.experiment.noise_dt = parse_double(field, val);
            else if (key == "seed") cfg.experiment.noise.seed = parse_u64(field, val);
            else if (key == "threads") cfg.threads = static_cast<int>(parse_int(field, val));
            else if (key == "sample_points") cfg.experiment.sample_points = static_cast<int>(parse_int(field, val));
            else if (key == "intra_cycle") cfg.experiment.intra_cycle = parse_bool(field, val);
            else throw ConfigError(field + ": unknown key");
        } else if (section == "scan") {
            if (key == "tau_us" || key == "tau_s") {
                const double scale = key == "tau_us" ? 1e-6 : 1.0;
                cfg.scan.taus.clear();
                for (const auto& item : split_list(val)) cfg.scan.taus.push_back(parse_double(field, item) * scale);
                if (cfg.scan.taus.empty()) throw ConfigError(field + ": empty tau list");
            } else if (key == "sequences") {
                cfg.scan.kinds.clear();
                for (const auto& item : split_list(val)) {
                    const SequenceKind k = parse_kind_or_throw(field, item);
                    if (!is_cyclic(k)) throw ConfigError(field + ": '" + item + "' is not a repeatable cycle");
                    cfg.scan.kinds.push_back(k);
                }
                if (cfg.scan.kinds.empty()) throw ConfigError(field + ": empty sequence list");
            } else if (key == "model") {
                cfg.scan.model = lower(val);
            } else {
                throw ConfigError(field + ": unknown key");
            }
        } else if (section == "output") {
            if (key == "dir") cfg.output.dir = val;
            else if (key == "label") cfg.output.label = val;
            else throw ConfigError(field + ": unknown key");
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' outside any section");
        }
    }

    if (init_mode == "default")
        cfg.experiment.init = default_variant(cfg.experiment.kind);
    else
        cfg.experiment.init =
            init_mode == "parallel" ? InitialVariant::parallel : InitialVariant::perpendicular;

    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string render_config(const RunConfig& cfg) {
    char buf[64];
    const auto num = [&buf](double v) -> std::string {
        if (std::isinf(v)) return "inf";
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    };
    // canonical snapshots use the base-SI key spellings so that values
    // round-trip bit-exactly
    std::ostringstream out;
    out << "[sequence]\n";
    out << "kind = " << sequence_label(cfg.experiment.kind) << "\n";
    out << "tau_s = " << num(cfg.experiment.tau) << "\n";
    out << "init = " << (cfg.experiment.init == InitialVariant::parallel ? "parallel" : "perpendicular")
        << "\n\n";
    out << "[pulse]\n";
    out << "mode = " << (cfg.experiment.mode == PulseMode::delta ? "delta" : "finite") << "\n";
    out << "t_p_s = " << num(cfg.experiment.pulse.t_p) << "\n";
    out << "epsilon = " << num(cfg.experiment.pulse.eps) << "\n";
    out << "offset_rad_s = " << num(cfg.experiment.pulse.offset) << "\n\n";
    out << "[noise]\n";
    out << "sigma_static_rad_s = " << num(cfg.experiment.noise.sigma_static) << "\n";
    out << "sigma_ou_rad_s = " << num(cfg.experiment.noise.sigma_ou) << "\n";
    out << "tau_corr_s = " << num(cfg.experiment.noise.tau_corr) << "\n";
    out << "t2_irr_s = " << num(cfg.experiment.noise.t2_irr) << "\n\n";
    out << "[run]\n";
    out << "duration_s = " << num(cfg.experiment.duration) << "\n";
    out << "ensemble = " << cfg.experiment.ensemble << "\n";
    out << "dt_s = " << num(cfg.experiment.noise_dt) << "\n";
    out << "seed = " << cfg.experiment.noise.seed << "\n";
    out << "threads = " << cfg.threads << "\n";
    out << "sample_points = " << cfg.experiment.sample_points << "\n";
    out << "intra_cycle = " << (cfg.experiment.intra_cycle ? "true" : "false") << "\n\n";
    out << "[scan]\n";
    if (!cfg.scan.taus.empty()) {
        out << "tau_s = ";
        for (std::size_t i = 0; i < cfg.scan.taus.size(); ++i)
            out << (i ? ", " : "") << num(cfg.scan.taus[i]);
        out << "\n";
    }
    out << "sequences = ";
    for (std::size_t i = 0; i < cfg.scan.kinds.size(); ++i)
        out << (i ? ", " : "") << sequence_label(cfg.scan.kinds[i]);
    out << "\n";
    out << "model = " << cfg.scan.model << "\n\n";
    out << "[output]\n";
    out << "dir = " << cfg.output.dir << "\n";
    if (!cfg.output.label.empty()) out << "label = " << cfg.output.label << "\n";
    return out.str();
}

}  // namespace ddsim
