// nsnudge: pseudo-spectral 2D Navier-Stokes with feedback-nudging data
// assimilation. Subcommands: simulate, sweep, certify, plot, thresholds.
//
// Exit codes (stable contract):
//   0  success
//   2  validation error (bad config/plan/arguments; message names the field)
//   3  simulation blow-up (numerical instability detected and aborted)
//   4  I/O failure
//   1  internal error

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "nsnudge/assimilate.hpp"
#include "nsnudge/interpolant.hpp"
#include "nsnudge/plot.hpp"
#include "nsnudge/run_io.hpp"
#include "nsnudge/sweep.hpp"
#include "nsnudge/thresholds.hpp"

namespace fs = std::filesystem;
using namespace nsnudge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitIo = 4;

int run_simulate(const std::string& config_path, const std::string& out,
                 std::optional<std::uint64_t> seed, bool override_constraints) {
    AssimilationConfig cfg = AssimilationConfig::from_json(read_text_file(config_path));
    if (seed) cfg.seed = *seed;
    if (override_constraints) cfg.override_constraints = true;
    cfg.validate();

    fs::path dir = out.empty() ? default_out_root() / "run" : fs::path(out);
    auto t0 = std::chrono::steady_clock::now();
    RunPairResult result = run_pair(cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_run_directory(dir, cfg, result, wall);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << dir.string() << "\n";
    return kExitOk;
}

int run_sweep_cmd(const std::string& plan_path, const std::string& out, int workers,
                  std::optional<std::uint64_t> seed) {
    ExperimentPlan plan = ExperimentPlan::from_json(read_text_file(plan_path));
    if (seed) plan.seed = *seed;
    plan.validate();
    fs::path dir = !out.empty() ? fs::path(out)
                   : !plan.output_dir.empty() ? fs::path(plan.output_dir)
                                              : default_out_root() / "sweep";
    auto rows = run_sweep(plan, dir, workers);
    write_text_file(dir / "summary.csv", summary_csv(rows));
    write_text_file(dir / "summary.json", summary_json(rows) + "\n");
    std::size_t failed = 0;
    for (const auto& r : rows)
        if (!r.ok) ++failed;
    std::cout << dir.string() << " (" << rows.size() - failed << "/" << rows.size() << " cells ok)\n";
    return kExitOk;
}

int run_certify(const std::string& kind, double h, const std::string& order, int probes, int n, double l,
                std::uint64_t seed, const std::string& out) {
    GridSpec grid(l, n);
    InterpolantSpec spec;
    spec.kind = interpolant_kind_from_string(kind);
    spec.h = h;
    CertOrder ord = order == "h2" ? CertOrder::H2 : CertOrder::H1;

    fs::path root = out.empty() ? default_out_root() / "certificates" : fs::path(out);
    fs::create_directories(root);
    std::uint64_t key = 0xcbf29ce484222325ULL;
    std::string ck = spec.cache_key(grid) + "|" + order + "|" + std::to_string(probes) + "|" + std::to_string(seed);
    for (unsigned char chr : ck) {
        key ^= chr;
        key *= 0x100000001b3ULL;
    }
    char name[48];
    std::snprintf(name, sizeof(name), "cert_%016llx.json", static_cast<unsigned long long>(key));
    fs::path cached = root / name;
    if (fs::exists(cached)) {
        std::cout << read_text_file(cached);
        return kExitOk;
    }
    InterpCertificate cert = certify_c0(grid, spec, ord, probes, seed);
    write_text_file(cached, cert.to_json() + "\n");
    std::cout << cert.to_json() << "\n";
    return kExitOk;
}

int run_thresholds(double G, double nu, double lambda1, double c0, double c, std::optional<double> h) {
    ThresholdReport r = thresholds(G, nu, lambda1, c0, c, h);
    std::cout << r.to_json() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral 2D Navier-Stokes simulator with feedback-nudging data assimilation"};
    app.require_subcommand(1);

    std::string config_path, plan_path, out_dir, dir_arg;
    std::optional<std::uint64_t> seed;
    bool override_constraints = false;
    int workers = 1;

    auto* sim = app.add_subcommand("simulate", "run a coupled truth/assimilation pair from a config file");
    sim->add_option("--config", config_path, "config JSON file")->required();
    sim->add_option("--out", out_dir, "run directory (default: $NSNUDGE_OUT_ROOT/run)");
    sim->add_option("--seed", seed, "override the config seed");
    sim->add_flag("--override-constraints", override_constraints,
                  "run even when mu*c0*h^2 > nu (threshold-violation experiments)");

    auto* swp = app.add_subcommand("sweep", "run a cartesian parameter sweep from a plan file");
    swp->add_option("--plan", plan_path, "plan JSON file")->required();
    swp->add_option("--out", out_dir, "sweep directory (default: plan output_dir)");
    swp->add_option("--workers", workers, "worker threads")->default_val(1);
    swp->add_option("--seed", seed, "override the plan seed");

    std::string cert_kind = "low_modes", cert_order = "h1";
    double cert_h = 0.5, cert_l = 6.283185307179586;
    int cert_probes = 200, cert_n = 48;
    std::uint64_t cert_seed = 1;
    auto* cert = app.add_subcommand("certify", "estimate an interpolant approximation constant");
    cert->set_help_flag("--help", "print help");  // frees -h for the length scale
    cert->add_option("--kind", cert_kind, "low_modes | volume_elements | nodes")->required();
    cert->add_option("--h", cert_h, "observation length scale")->required();
    cert->add_option("--order", cert_order, "h1 | h2")->default_val("h1");
    cert->add_option("--probes", cert_probes, "probe count (>= 100)")->default_val(200);
    cert->add_option("--N", cert_n, "certification grid resolution")->default_val(48);
    cert->add_option("--L", cert_l, "box side")->default_val(6.283185307179586);
    cert->add_option("--seed", cert_seed, "probe seed")->default_val(1);
    cert->add_option("--out", out_dir, "certificate cache directory");

    auto* plt = app.add_subcommand("plot", "emit decay / rate plots from a run or sweep directory");
    plt->add_option("--dir", dir_arg, "run or sweep directory")->required();

    auto* defcfg = app.add_subcommand("default-config", "print a config with every default value");

    double th_g = 0.0, th_nu = 1.0, th_l1 = 1.0, th_c0 = 1.0, th_c = 1.0;
    std::optional<double> th_h;
    auto* th = app.add_subcommand("thresholds", "print the sufficient-condition report");
    th->set_help_flag("--help", "print help");
    th->add_option("--G", th_g, "Grashof number")->required();
    th->add_option("--nu", th_nu, "viscosity")->default_val(1.0);
    th->add_option("--lambda1", th_l1, "smallest Stokes eigenvalue")->default_val(1.0);
    th->add_option("--c0", th_c0, "certified interpolant constant")->default_val(1.0);
    th->add_option("--c", th_c, "dimensionless constant in the sufficient conditions")->default_val(1.0);
    th->add_option("--h", th_h, "observation length scale (enables feasibility check)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(config_path, out_dir, seed, override_constraints);
        if (swp->parsed()) return run_sweep_cmd(plan_path, out_dir, workers, seed);
        if (cert->parsed())
            return run_certify(cert_kind, cert_h, cert_order, cert_probes, cert_n, cert_l, cert_seed, out_dir);
        if (plt->parsed()) {
            plot_directory(dir_arg);
            return kExitOk;
        }
        if (defcfg->parsed()) {
            std::cout << AssimilationConfig{}.to_json() << "\n";
            return kExitOk;
        }
        if (th->parsed()) return run_thresholds(th_g, th_nu, th_l1, th_c0, th_c, th_h);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kExitBlowup;
    } catch (const CflError& e) {
        std::cerr << "CFL: " << e.what() << "\n";
        return kExitBlowup;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
