#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ddsim/experiment.hpp"

namespace ddsim {

// Configuration error with the offending field in the message ("[section] key: ...").
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ScanConfig {
    std::vector<double> taus;            // s
    std::vector<SequenceKind> kinds = {SequenceKind::cp,   SequenceKind::cpmg, SequenceKind::xy4s,
                                       SequenceKind::xy4a, SequenceKind::xy8s, SequenceKind::xy8a,
                                       SequenceKind::kddx, SequenceKind::kddxy};
    std::string model = "single";        // single | double
};

struct OutputConfig {
    std::string dir = "out";
    std::string label;                   // optional file-name prefix
};

// Fully resolved run description (the unit the manifest snapshots).
struct RunConfig {
    ExperimentConfig experiment;
    int threads = 0;
    ScanConfig scan;
    OutputConfig output;

    void validate() const;
};

// Structured key = value config with [section] headers; every physical
// quantity carries its unit in the key name (tau_us, t2_irr_ms, ...).
// Unknown sections or keys are errors. Throws ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical snapshot of a resolved config; parse_config_text(render_config(c))
// reproduces c exactly. Embedded in manifests for replay.
std::string render_config(const RunConfig& cfg);

}  // namespace ddsim
