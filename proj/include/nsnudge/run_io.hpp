#pragma once

#include <filesystem>
#include <string>

#include "nsnudge/assimilate.hpp"

namespace nsnudge {

// Run directory layout:
//   config.json        exact configuration (round-trips)
//   thresholds.json    ThresholdReport for the run parameters
//   series.csv         t, l2_w, h1_w, l2_u, h1_u, monitor_flags
//   monitors.jsonl     one MonitorReport per line (spin-up included)
//   checkpoints/       u_final.fld, v_final.fld snapshots
//   summary.json       fit results, warnings, config hash, wall time
void write_run_directory(const std::filesystem::path& dir, const AssimilationConfig& config,
                         const RunPairResult& result, double wall_seconds);

std::string series_csv(const ErrorSeries& series);
std::string run_summary_json(const AssimilationConfig& config, const RunPairResult& result,
                             double wall_seconds);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// default output root: NSNUDGE_OUT_ROOT env var, else ./runs
std::filesystem::path default_out_root();

}  // namespace nsnudge
