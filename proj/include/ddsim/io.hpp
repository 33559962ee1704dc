#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ddsim/aht.hpp"
#include "ddsim/config.hpp"
#include "ddsim/fit.hpp"

namespace ddsim {

// Writes content to path via a temp file + rename, so no output file is ever
// partially written. Creates parent directories.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// EchoSeries CSV: time_s,amplitude,stderr
std::string echo_series_csv(const EchoSeries& series);
EchoSeries read_echo_series_csv(const std::string& path);

// Scan CSV: sequence,tau_s,model,a,T2f_s,b,T2s_s,residual,converged
std::string scan_csv(const std::vector<ScanRow>& rows);

std::string aht_table_csv(const std::vector<AhtRow>& rows);
std::string aht_table_text(const std::vector<AhtRow>& rows);

// "<label>_tau<us>.csv" (label prefixed by the config label when set);
// fid/hahn have no tau and drop the suffix.
std::string series_filename(const RunConfig& cfg);

// Run manifest: config snapshot, tool version, base seed, output paths, wall
// time. Re-running the embedded config reproduces the outputs bit-identically.
std::string manifest_json(const std::string& command, const RunConfig& cfg,
                          const std::vector<std::string>& outputs, double wall_seconds);

// Extracts the embedded config snapshot from a manifest written by this tool.
RunConfig config_from_manifest(const std::string& manifest_path);

}  // namespace ddsim
