#include "nsnudge/run_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nsnudge/spectral_ops.hpp"

namespace nsnudge {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string series_csv(const ErrorSeries& series) {
    std::string out;
    out += "# nsnudge series schema_version=1\n";
    out += "t,l2_w,h1_w,l2_u,h1_u,monitor_flags\n";
    char line[256];
    for (const auto& s : series.samples) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", s.t, s.l2_w, s.h1_w,
                      s.l2_u, s.h1_u, s.monitor_flags);
        out += line;
    }
    return out;
}

std::string run_summary_json(const AssimilationConfig& config, const RunPairResult& result,
                             double wall_seconds) {
    json j;
    j["schema_version"] = 1;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx", static_cast<unsigned long long>(config.hash()));
    j["config_hash"] = hash_hex;
    j["G"] = result.G;
    j["t_final"] = result.t_final;
    j["samples"] = result.series.samples.size();
    if (result.series.fit) {
        const FitResult& f = *result.series.fit;
        j["fit"] = {{"alpha", f.alpha},       {"logC", f.logC},          {"rms_residual", f.rms_residual},
                    {"nsamples", f.nsamples}, {"t_begin", f.t_begin},    {"t_end", f.t_end}};
    }
    int violations = 0;
    for (const auto& m : result.monitors)
        if (m.post_spinup) violations += static_cast<int>(m.violations.size());
    j["monitor_violations"] = violations;
    j["warnings"] = result.warnings;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

void write_run_directory(const fs::path& dir, const AssimilationConfig& config,
                         const RunPairResult& result, double wall_seconds) {
    fs::create_directories(dir / "checkpoints");
    write_text_file(dir / "config.json", config.to_json() + "\n");
    write_text_file(dir / "thresholds.json", result.thresholds.to_json() + "\n");
    write_text_file(dir / "series.csv", series_csv(result.series));
    {
        std::ofstream mon(dir / "monitors.jsonl");
        for (const auto& m : result.monitors) mon << m.to_json() << "\n";
        if (!mon) throw std::runtime_error("write_run_directory: cannot write monitors.jsonl");
    }
    json meta;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx", static_cast<unsigned long long>(config.hash()));
    meta["config_hash"] = hash_hex;
    meta["scheme"] = config.stepper.scheme;
    meta["dt"] = config.stepper.dt;
    meta["t"] = result.t_final;
    save_snapshot((dir / "checkpoints" / "u_final.fld").string(), result.u_final, meta.dump());
    save_snapshot((dir / "checkpoints" / "v_final.fld").string(), result.v_final, meta.dump());
    write_text_file(dir / "summary.json", run_summary_json(config, result, wall_seconds) + "\n");
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

fs::path default_out_root() {
    if (const char* env = std::getenv("NSNUDGE_OUT_ROOT"); env && *env) return fs::path(env);
    return fs::path("runs");
}

}  // namespace nsnudge
