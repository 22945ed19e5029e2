#include "nsnudge/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <thread>

#include "nsnudge/rng.hpp"
#include "nsnudge/run_io.hpp"

namespace nsnudge {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::size_t ExperimentPlan::cell_count() const {
    auto n = [](std::size_t k) { return k == 0 ? std::size_t{1} : k; };
    return n(mu_values.size()) * n(h_values.size()) * n(kind_values.size()) * n(grashof_values.size()) *
           static_cast<std::size_t>(std::max(1, repetitions));
}

void ExperimentPlan::validate() const {
    if (repetitions < 1) throw ValidationError("plan: repetitions must be >= 1");
    if (cap < 1) throw ValidationError("plan: cap must be >= 1");
    if (cell_count() > static_cast<std::size_t>(cap))
        throw ValidationError("plan: sweep size " + std::to_string(cell_count()) + " exceeds cap " +
                              std::to_string(cap));
}

AssimilationConfig ExperimentPlan::cell_config(std::size_t index) const {
    auto pick = [](const auto& values, std::size_t& rest) -> std::optional<typename std::decay_t<decltype(values)>::value_type> {
        if (values.empty()) return std::nullopt;
        std::size_t k = rest % values.size();
        rest /= values.size();
        return values[k];
    };
    std::size_t rest = index;
    AssimilationConfig cfg = base;
    if (auto v = pick(mu_values, rest)) cfg.mu = *v;
    if (auto v = pick(h_values, rest)) cfg.interp.h = *v;
    if (auto v = pick(kind_values, rest)) cfg.interp.kind = *v;
    if (auto v = pick(grashof_values, rest)) cfg.forcing.grashof = *v;
    cfg.seed = split_seed(seed, index);
    return cfg;
}

std::string ExperimentPlan::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["base"] = json::parse(base.to_json());
    j["axes"]["mu"] = mu_values;
    j["axes"]["h"] = h_values;
    json kinds = json::array();
    for (auto k : kind_values) kinds.push_back(to_string(k));
    j["axes"]["kind"] = kinds;
    j["axes"]["grashof"] = grashof_values;
    j["repetitions"] = repetitions;
    j["seed"] = seed;
    j["cap"] = cap;
    j["output_dir"] = output_dir;
    return j.dump(2);
}

ExperimentPlan ExperimentPlan::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("plan: JSON parse error: ") + e.what());
    }
    ExperimentPlan p;
    try {
        p.base = AssimilationConfig::from_json(j.at("base").dump());
        if (j.contains("axes")) {
            const auto& a = j["axes"];
            if (a.contains("mu")) p.mu_values = a["mu"].get<std::vector<double>>();
            if (a.contains("h")) p.h_values = a["h"].get<std::vector<double>>();
            if (a.contains("kind"))
                for (const auto& k : a["kind"]) p.kind_values.push_back(interpolant_kind_from_string(k.get<std::string>()));
            if (a.contains("grashof")) p.grashof_values = a["grashof"].get<std::vector<double>>();
        }
        p.repetitions = j.value("repetitions", 1);
        p.seed = j.value("seed", std::uint64_t{1});
        p.cap = j.value("cap", 256);
        p.output_dir = j.value("output_dir", std::string());
    } catch (const json::exception& e) {
        throw ValidationError(std::string("plan: ") + e.what());
    }
    return p;
}

namespace {

std::string classify_error(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return "validation";
    if (dynamic_cast<const BlowUpError*>(&e)) return "blowup";
    if (dynamic_cast<const CflError*>(&e)) return "cfl";
    if (dynamic_cast<const std::runtime_error*>(&e)) return "io";
    return "internal";
}

std::string hash_hex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunSummary run_cell(std::size_t index, const AssimilationConfig& cfg, const fs::path& cell_dir) {
    RunSummary row;
    row.cell_index = index;
    row.config = cfg;

    // resume cache: a completed cell carries its config hash in summary.json
    fs::path done = cell_dir / "summary.json";
    if (fs::exists(done)) {
        try {
            json s = json::parse(read_text_file(done));
            if (s.value("config_hash", "") == hash_hex(cfg.hash())) {
                row.ok = true;
                row.recomputed = false;
                row.G = s.value("G", 0.0);
                if (s.contains("fit")) {
                    row.fitted_rate = s["fit"].value("alpha", 0.0);
                    row.fit_residual = s["fit"].value("rms_residual", 0.0);
                }
                row.monitor_violations = s.value("monitor_violations", 0);
                row.wall_seconds = s.value("wall_seconds", 0.0);
                json th = json::parse(read_text_file(cell_dir / "thresholds.json"));
                row.feasible = th.value("feasible", false);
                return row;
            }
        } catch (const std::exception&) {
            // stale or unreadable cache entry: recompute
        }
    }

    auto t0 = std::chrono::steady_clock::now();
    try {
        RunPairResult result = run_pair(cfg);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_run_directory(cell_dir, cfg, result, wall);
        row.ok = true;
        row.G = result.G;
        row.feasible = result.thresholds.feasible.value_or(false);
        if (result.series.fit) {
            row.fitted_rate = result.series.fit->alpha;
            row.fit_residual = result.series.fit->rms_residual;
        }
        for (const auto& m : result.monitors)
            if (m.post_spinup) row.monitor_violations += static_cast<int>(m.violations.size());
        row.wall_seconds = wall;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error_class = classify_error(e);
        row.error = e.what();
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return row;
}

}  // namespace

std::vector<RunSummary> run_sweep(const ExperimentPlan& plan, const fs::path& out_dir, int workers) {
    plan.validate();
    fs::create_directories(out_dir);
    std::size_t ncells = plan.cell_count();
    std::vector<RunSummary> rows(ncells);

    std::atomic<std::size_t> next{0};
    std::mutex flush_mutex;
    std::ofstream partial(out_dir / "summary_partial.jsonl", std::ios::app);

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ncells) return;
            char name[32];
            std::snprintf(name, sizeof(name), "cell_%04zu", i);
            AssimilationConfig cfg = plan.cell_config(i);
            RunSummary row = run_cell(i, cfg, out_dir / name);
            {
                // incremental flush: interruption loses at most the in-flight cells
                std::lock_guard<std::mutex> lock(flush_mutex);
                json j;
                j["cell"] = i;
                j["ok"] = row.ok;
                j["recomputed"] = row.recomputed;
                j["fitted_rate"] = row.fitted_rate;
                if (!row.ok) j["error_class"] = row.error_class;
                partial << j.dump() << "\n" << std::flush;
                rows[i] = std::move(row);
            }
        }
    };

    workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers - 1; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return rows;
}

std::string summary_csv(const std::vector<RunSummary>& rows) {
    std::string out;
    out += "# nsnudge sweep summary schema_version=1\n";
    out += "cell,ok,recomputed,error_class,kind,mu,h,grashof_target,G,feasible,fitted_rate,fit_residual,"
           "monitor_violations,wall_seconds\n";
    char line[512];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%zu,%d,%d,%s,%s,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%d,%.3f\n",
                      r.cell_index, r.ok ? 1 : 0, r.recomputed ? 1 : 0, r.error_class.c_str(),
                      to_string(r.config.interp.kind).c_str(), r.config.mu, r.config.interp.h,
                      r.config.forcing.grashof, r.G, r.feasible ? 1 : 0, r.fitted_rate, r.fit_residual,
                      r.monitor_violations, r.wall_seconds);
        out += line;
    }
    return out;
}

std::string summary_json(const std::vector<RunSummary>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["cell"] = r.cell_index;
        j["ok"] = r.ok;
        j["recomputed"] = r.recomputed;
        if (!r.ok) {
            j["error_class"] = r.error_class;
            j["error"] = r.error;
        }
        j["kind"] = to_string(r.config.interp.kind);
        j["mu"] = r.config.mu;
        j["h"] = r.config.interp.h;
        j["grashof_target"] = r.config.forcing.grashof;
        j["G"] = r.G;
        j["feasible"] = r.feasible;
        j["fitted_rate"] = r.fitted_rate;
        j["fit_residual"] = r.fit_residual;
        j["monitor_violations"] = r.monitor_violations;
        j["wall_seconds"] = r.wall_seconds;
        arr.push_back(j);
    }
    json top;
    top["schema_version"] = 1;
    top["cells"] = arr;
    return top.dump(2);
}

}  // namespace nsnudge
