#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nsnudge/assimilate.hpp"

namespace nsnudge {

// Cartesian sweep over (mu, h, interpolant kind, G) x repetitions. Every cell
// gets a deterministic seed derived from (plan seed, cell index) and its own
// run directory, so interrupted sweeps resume without recomputing.
struct ExperimentPlan {
    AssimilationConfig base;
    std::vector<double> mu_values;
    std::vector<double> h_values;
    std::vector<InterpolantKind> kind_values;
    std::vector<double> grashof_values;
    int repetitions = 1;
    std::uint64_t seed = 1;
    int cap = 256;  // refuse plans larger than this
    std::string output_dir;

    std::size_t cell_count() const;
    AssimilationConfig cell_config(std::size_t index) const;
    void validate() const;

    std::string to_json() const;
    static ExperimentPlan from_json(const std::string& text);
};

struct RunSummary {
    std::size_t cell_index = 0;
    AssimilationConfig config;
    bool ok = false;
    bool recomputed = true;  // false when served from the resume cache
    std::string error_class;  // validation | blowup | cfl | io | internal
    std::string error;
    bool feasible = false;
    double G = 0.0;
    double fitted_rate = 0.0;
    double fit_residual = 0.0;
    int monitor_violations = 0;
    double wall_seconds = 0.0;
};

std::vector<RunSummary> run_sweep(const ExperimentPlan& plan, const std::filesystem::path& out_dir,
                                  int workers);

std::string summary_csv(const std::vector<RunSummary>& rows);
std::string summary_json(const std::vector<RunSummary>& rows);

}  // namespace nsnudge
