#pragma once

#include <filesystem>

namespace nsnudge {

// Emits static figures from a completed run or sweep directory: a log-linear
// error-decay SVG per run, rate-vs-mu SVGs per h value for sweeps, each with
// a gnuplot-compatible .dat file and a ready-to-run .gp script. Read-only on
// its inputs; throws before writing anything if the inputs are missing.
void plot_run_directory(const std::filesystem::path& dir);
void plot_sweep_directory(const std::filesystem::path& dir);

// dispatches on the directory contents (series.csv vs summary.csv)
void plot_directory(const std::filesystem::path& dir);

}  // namespace nsnudge
