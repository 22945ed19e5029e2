#include "nsnudge/assimilate.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nsnudge/rng.hpp"
#include "nsnudge/spectral_ops.hpp"

namespace nsnudge {

using json = nlohmann::ordered_json;

namespace {
constexpr double kRoundoffFloor = 1e-13;

// seed streams within one run
constexpr std::uint64_t kStreamTruthIc = 0x11;
constexpr std::uint64_t kStreamV0Perturb = 0x22;
}  // namespace

std::string to_string(V0Policy p) {
    switch (p) {
        case V0Policy::Zero: return "zero";
        case V0Policy::Given: return "given";
        case V0Policy::TruthPlusPerturbation: return "truth_plus_perturbation";
    }
    return "?";
}

V0Policy v0_policy_from_string(const std::string& s) {
    if (s == "zero") return V0Policy::Zero;
    if (s == "given") return V0Policy::Given;
    if (s == "truth_plus_perturbation" || s == "truth") return V0Policy::TruthPlusPerturbation;
    throw std::invalid_argument("unknown v0 policy: " + s);
}

void AssimilationConfig::validate() const {
    GridSpec g = grid();
    stepper.validate();
    if (!(nu > 0.0)) throw ValidationError("config: nu must be > 0");
    if (!(T > 0.0)) throw ValidationError("config: T must be > 0");
    if (sample_stride < 1) throw ValidationError("config: sample_stride must be >= 1");
    if (mu < 0.0) throw ValidationError("config: mu must be >= 0");
    if (mu > 0.0) {
        interp.validate(g);
        double spill = mu * c0 * interp.h * interp.h;
        if (spill > nu && !override_constraints) {
            std::ostringstream os;
            os << "config: well-posedness constraint mu*c0*h^2 <= nu violated (mu*c0*h^2 = " << spill
               << " > nu = " << nu << "); set override_constraints to run anyway";
            throw ValidationError(os.str());
        }
    }
    if (v0_policy == V0Policy::Given && v0_path.empty())
        throw ValidationError("config: v0 policy 'given' needs v0_path");
}

std::string AssimilationConfig::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["grid"] = {{"N", N}, {"L", L}};
    j["nu"] = nu;
    j["forcing"] = {{"kind", to_string(forcing.kind)},   {"amplitude", forcing.amplitude},
                    {"grashof", forcing.grashof},        {"shell_min", forcing.shell_min},
                    {"shell_max", forcing.shell_max},    {"seed_stream", forcing.seed_stream},
                    {"custom_path", forcing.custom_path}};
    j["interpolant"] = {{"kind", to_string(interp.kind)},
                        {"h", interp.h},
                        {"node_offset_x", interp.node_offset_x},
                        {"node_offset_y", interp.node_offset_y}};
    j["mu"] = mu;
    j["c0"] = c0;
    j["c"] = c;
    j["v0"] = {{"policy", to_string(v0_policy)}, {"perturbation", v0_perturbation}, {"path", v0_path}};
    j["spinup"] = spinup;
    j["T"] = T;
    j["stepper"] = {{"dt", stepper.dt}, {"cfl_safety", stepper.cfl_safety}, {"scheme", stepper.scheme}};
    j["sample_stride"] = sample_stride;
    j["seed"] = seed;
    j["override_constraints"] = override_constraints;
    return j.dump(2);
}

AssimilationConfig AssimilationConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: JSON parse error: ") + e.what());
    }
    AssimilationConfig c;
    try {
        const auto& g = j.at("grid");
        c.N = g.at("N").get<int>();
        c.L = g.at("L").get<double>();
        c.nu = j.at("nu").get<double>();
        const auto& f = j.at("forcing");
        c.forcing.kind = forcing_kind_from_string(f.at("kind").get<std::string>());
        c.forcing.amplitude = f.value("amplitude", 0.0);
        c.forcing.grashof = f.value("grashof", 0.0);
        c.forcing.shell_min = f.value("shell_min", 3);
        c.forcing.shell_max = f.value("shell_max", 5);
        c.forcing.seed_stream = f.value("seed_stream", std::uint64_t{1});
        c.forcing.custom_path = f.value("custom_path", std::string());
        const auto& ip = j.at("interpolant");
        c.interp.kind = interpolant_kind_from_string(ip.at("kind").get<std::string>());
        c.interp.h = ip.at("h").get<double>();
        c.interp.node_offset_x = ip.value("node_offset_x", 0.5);
        c.interp.node_offset_y = ip.value("node_offset_y", 0.5);
        c.mu = j.at("mu").get<double>();
        c.c0 = j.value("c0", 1.0);
        c.c = j.value("c", 1.0);
        if (j.contains("v0")) {
            c.v0_policy = v0_policy_from_string(j["v0"].value("policy", "zero"));
            c.v0_perturbation = j["v0"].value("perturbation", 0.0);
            c.v0_path = j["v0"].value("path", std::string());
        }
        c.spinup = j.value("spinup", -1.0);
        c.T = j.at("T").get<double>();
        const auto& st = j.at("stepper");
        c.stepper.dt = st.at("dt").get<double>();
        c.stepper.cfl_safety = st.value("cfl_safety", 0.5);
        c.stepper.scheme = st.value("scheme", "cnab2");
        c.sample_stride = j.value("sample_stride", 1);
        c.seed = j.value("seed", std::uint64_t{1});
        c.override_constraints = j.value("override_constraints", false);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    return c;
}

std::uint64_t AssimilationConfig::hash() const {
    std::string canon = to_json();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---- decay fitting -----------------------------------------------------------

FitResult ErrorSeries::fit_decay_rate(const std::vector<ErrorSample>& samples, double t_begin,
                                      double t_end, bool use_h1) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : samples) {
        if (s.t < t_begin || s.t > t_end) continue;
        double w = use_h1 ? s.h1_w : s.l2_w;
        if (w <= kRoundoffFloor) continue;
        pts.emplace_back(s.t, std::log(w));
    }
    if (pts.size() < 10)
        throw ValidationError("fit_decay_rate: need at least 10 samples above the round-off floor in the window");
    double n = static_cast<double>(pts.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (auto [t, y] : pts) {
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    double denom = n * stt - st * st;
    double slope = (n * sty - st * sy) / denom;
    double icept = (sy - slope * st) / n;
    double ss = 0;
    for (auto [t, y] : pts) {
        double r = y - (icept + slope * t);
        ss += r * r;
    }
    FitResult fit;
    fit.alpha = -slope;
    fit.logC = icept;
    fit.rms_residual = std::sqrt(ss / n);
    fit.nsamples = static_cast<int>(pts.size());
    fit.t_begin = pts.front().first;
    fit.t_end = pts.back().first;
    return fit;
}

double ErrorSeries::transient_end() const {
    double peak = 0.0;
    for (const auto& s : samples) {
        peak = std::max(peak, s.h1_w);
        if (peak > 0.0 && s.h1_w < 0.5 * peak) return s.t;
    }
    return samples.empty() ? 0.0 : samples.back().t;
}

// ---- coupled run ---------------------------------------------------------------

RunPairResult run_pair(const AssimilationConfig& config) {
    config.validate();
    GridSpec g = config.grid();
    double lam1 = g.lambda1();

    VelocityField f = make_forcing(g, config.forcing, config.nu, config.seed);
    double G = grashof(f, config.nu, lam1);

    ThresholdReport report = thresholds(G > 0.0 ? G : 0.0, config.nu, lam1, config.c0,
                                        std::max(config.c, 1e-12), config.mu > 0.0
                                            ? std::optional<double>(config.interp.h)
                                            : std::nullopt);

    RunPairResult result{ErrorSeries{}, {}, VelocityField(g), VelocityField(g), 0.0, G, report, {}};
    if (config.mu > 0.0 && report.feasible && !*report.feasible)
        result.warnings.push_back("thresholds: (mu, h) not feasible per the periodic sufficient conditions");

    // truth initial condition: random low-mode field spun up for config.spinup.
    // The amplitude sits well inside the attractor bound sqrt(2)*nu*G so the
    // first transient respects the advective CFL limit at any forcing scale.
    double ic_amp = config.nu * std::max(G, 1.0) * 0.1;
    VelocityField u0 = random_divfree_field(g, split_seed(config.seed, kStreamTruthIc), 1, 3, ic_amp, 1.0);

    double spinup = config.resolved_spinup();
    ImexStepper truth(g, config.nu, f, config.stepper);
    truth.set_state(u0, -spinup);
    long spin_steps = std::lround(spinup / config.stepper.dt);
    for (long s = 0; s < spin_steps; ++s) {
        truth.advance();
        if (config.sample_stride > 0 && s % (config.sample_stride * 10) == 0)
            result.monitors.push_back(monitor(truth.state(), truth.time(), G, config.nu, lam1, false));
    }

    // assimilated initial condition
    VelocityField v0(g);
    switch (config.v0_policy) {
        case V0Policy::Zero: break;
        case V0Policy::Given: v0 = load_snapshot(config.v0_path); break;
        case V0Policy::TruthPlusPerturbation: {
            v0 = truth.state();
            if (config.v0_perturbation > 0.0) {
                double scale = config.v0_perturbation * std::max(norm_l2(v0), 1e-30);
                VelocityField noise = random_divfree_field(g, split_seed(config.seed, kStreamV0Perturb), 1,
                                                           g.dealias_kmax(), scale, 1.0);
                v0 += noise;
            }
            break;
        }
    }

    std::optional<NudgeConfig> nudge;
    if (config.mu > 0.0)
        nudge = NudgeConfig{config.mu, config.interp, config.c0, config.override_constraints};
    ImexStepper assim(g, config.nu, f, config.stepper, nudge);
    assim.set_state(v0, 0.0);

    // restart the truth clock so both steppers share the assimilation clock
    VelocityField u_now = truth.state();
    truth.set_state(u_now, 0.0);

    auto record = [&](double t) {
        VelocityField w = truth.state();
        w -= assim.state();
        Norms nw = norms(w);
        Norms nu_ = norms(truth.state());
        MonitorReport mon = monitor(truth.state(), t, G, config.nu, lam1, true);
        result.monitors.push_back(mon);
        int flags = 0;
        for (const auto& v : mon.violations) {
            if (v == "l2_bound") flags |= 1;
            if (v == "h1_bound") flags |= 2;
        }
        result.series.samples.push_back(ErrorSample{t, nw.l2, nw.h1, nu_.l2, nu_.h1, flags});
    };

    record(0.0);
    long nsteps = std::lround(config.T / config.stepper.dt);
    if (nsteps < 1) nsteps = 1;
    for (long s = 1; s <= nsteps; ++s) {
        truth.advance();
        if (config.mu > 0.0) {
            VelocityField obs = interp_apply(config.interp, truth.state());
            assim.advance(&obs);
        } else {
            assim.advance();
        }
        if (s % config.sample_stride == 0 || s == nsteps) record(truth.time());
    }

    // fit on the H1 error after the transient; the window closes where the
    // series first reaches the accumulated round-off region (100x the
    // 1e-13 floor), so a long run idling at the floor does not flatten the fit
    double tb = result.series.transient_end();
    double te = result.series.samples.back().t;
    for (const auto& s : result.series.samples) {
        if (s.t > tb && s.h1_w < 1e-11) {
            te = s.t;
            break;
        }
    }
    try {
        result.series.fit = ErrorSeries::fit_decay_rate(result.series.samples, tb, te, true);
    } catch (const ValidationError&) {
        result.warnings.push_back("fit: too few samples above the round-off floor after the transient");
    }

    result.u_final = truth.state();
    result.v_final = assim.state();
    result.t_final = truth.time();
    return result;
}

// ---- prediction ---------------------------------------------------------------

PredictionResult prediction_experiment(const AssimilationConfig& config, double t1, double T_pred,
                                       const std::vector<double>& eps_ladder) {
    AssimilationConfig upto = config;
    upto.T = t1;
    RunPairResult pair = run_pair(upto);

    GridSpec g = config.grid();
    VelocityField f = make_forcing(g, config.forcing, config.nu, config.seed);

    ImexStepper truth(g, config.nu, f, config.stepper);
    truth.set_state(pair.u_final, t1);
    ImexStepper forecast(g, config.nu, f, config.stepper);
    forecast.set_state(pair.v_final, t1);

    PredictionResult out;
    out.t1 = t1;
    auto record = [&](double t) {
        VelocityField w = truth.state();
        w -= forecast.state();
        Norms nw = norms(w);
        Norms nu_ = norms(truth.state());
        out.divergence.push_back(ErrorSample{t, nw.l2, nw.h1, nu_.l2, nu_.h1, 0});
    };
    record(t1);
    long nsteps = std::lround(T_pred / config.stepper.dt);
    for (long s = 1; s <= nsteps; ++s) {
        truth.advance();
        forecast.advance();
        if (s % config.sample_stride == 0 || s == nsteps) record(truth.time());
    }

    for (double eps : eps_ladder) {
        PredictionPoint p{eps, T_pred, true};
        for (const auto& s : out.divergence) {
            double rel = s.l2_u > 0.0 ? s.l2_w / s.l2_u : s.l2_w;
            if (rel > eps) {  // first strict exceedance
                p.time_to_eps = s.t - t1;
                p.censored = false;
                break;
            }
        }
        out.ladder.push_back(p);
    }
    return out;
}

// ---- calibration ----------------------------------------------------------------

FeasiblePair feasible_pair(const ThresholdReport& report) {
    FeasiblePair fp;
    fp.mu = report.mu_periodic;
    double inv_h2 = std::max(report.periodic_h_bound, report.mu_periodic * report.c0 / report.nu);
    if (inv_h2 <= 0.0) return fp;
    // nudge h just inside the bound so feasibility holds under round-off
    fp.h = std::sqrt(1.0 / inv_h2) * (1.0 - 1e-12);
    fp.mu_top = report.nu / (report.c0 * fp.h * fp.h);
    fp.mu_eval = fp.mu > 0.0 ? std::sqrt(fp.mu * fp.mu_top) : 0.0;
    return fp;
}

namespace {

// a candidate c is representable on the grid when the report-boundary pair
// fits it: cell partitions survive dealiasing, the modal cutoff stays inside
// the resolved band, explicit nudging respects mu*dt <= 1
bool candidate_resolvable(const AssimilationConfig& base, double c, double G) {
    GridSpec g = base.grid();
    ThresholdReport rep = thresholds(G, base.nu, g.lambda1(), base.c0, c);
    FeasiblePair fp = feasible_pair(rep);
    if (!(fp.mu > 0.0) || !(fp.h > 0.0)) return false;
    InterpolantSpec spec = base.interp;
    spec.h = fp.h;
    try {
        spec.validate(g);
    } catch (const std::invalid_argument&) {
        return false;
    }
    if (spec.kind == InterpolantKind::LowModes) {
        if (spec.cutoff() < g.dk()) return false;
        if (spec.cutoff() > g.dealias_kmax() * g.dk()) return false;
    } else if (fp.mu_eval * base.stepper.dt > 1.0) {
        return false;
    }
    return true;
}

CalibrationEvaluation evaluate_candidate(const AssimilationConfig& base, double c, double G) {
    CalibrationEvaluation ev;
    ev.c = c;
    ev.G = G;
    GridSpec g = base.grid();
    ThresholdReport rep = thresholds(G, base.nu, g.lambda1(), base.c0, c);
    FeasiblePair fp = feasible_pair(rep);
    ev.mu = fp.mu_eval;
    ev.h = fp.h;
    if (!candidate_resolvable(base, c, G)) return ev;
    ev.resolvable = true;

    AssimilationConfig cfg = base;
    cfg.c = c;
    cfg.mu = fp.mu_eval;
    cfg.interp.h = fp.h;
    cfg.forcing.grashof = G;
    try {
        RunPairResult run = run_pair(cfg);
        const auto& s = run.series.samples;
        double w0 = 0.0;
        for (const auto& smp : s) w0 = std::max(w0, smp.h1_w);
        double wend = s.back().h1_w;
        ev.decades = w0 > 0.0 && wend > 0.0 ? std::log10(w0 / wend) : 0.0;
        if (run.series.fit) ev.fitted_rate = run.series.fit->alpha;
        ev.converged = ev.fitted_rate > 0.0 && ev.decades >= 1.5;
    } catch (const std::exception&) {
        ev.converged = false;
    }
    return ev;
}

}  // namespace

CalibrationResult calibrate_c(const AssimilationConfig& base, const std::vector<double>& grashof_ladder,
                              int max_evaluations) {
    if (grashof_ladder.empty()) throw ValidationError("calibrate_c: need at least one Grashof value");
    CalibrationResult res;
    res.low_confidence = grashof_ladder.size() < 3;
    const double c_min = 1e-6, c_max = 8.0;

    // largest candidate the grid can represent at every ladder point; pure
    // arithmetic, no simulation
    auto resolvable_all = [&](double c) {
        for (double G : grashof_ladder)
            if (!candidate_resolvable(base, c, G)) return false;
        return true;
    };
    // resolvable candidates form an interval: J goes negative for tiny c and
    // h*(c) outruns the grid for large c. Scan down for a foothold, then
    // push the cap up against the first unresolvable candidate above it.
    double c_res = 0.0, above = 0.0;
    for (double p = c_max; p >= c_min; p *= 0.5) {
        if (resolvable_all(p)) {
            c_res = p;
            break;
        }
        above = p;
    }
    if (c_res == 0.0) {
        res.c_lo = c_min;
        res.c_hi = c_max;
        return res;
    }
    if (above > 0.0) {
        for (int it = 0; it < 50; ++it) {
            double mid = std::sqrt(c_res * above);
            (resolvable_all(mid) ? c_res : above) = mid;
        }
    }

    int budget = max_evaluations;
    auto works = [&](double c) {
        --budget;
        for (double G : grashof_ladder) {
            CalibrationEvaluation ev = evaluate_candidate(base, c, G);
            res.evaluations.push_back(ev);
            if (!ev.converged) return false;
        }
        return true;
    };

    // the easiest candidate is the resolvability cap (finest h, largest mu);
    // walk down from it to bracket the smallest workable c
    if (budget <= 0 || !works(c_res)) {
        res.c_lo = c_min;
        res.c_hi = c_res;
        return res;
    }
    double hi = c_res, lo = 0.0;
    double factor = 0.5;
    while (budget > 0) {
        double probe = hi * factor;
        if (probe < c_min) break;
        if (works(probe)) {
            hi = probe;
            factor = 0.35;
        } else {
            lo = probe;
            break;
        }
    }
    if (lo == 0.0) {
        // workable all the way to the floor
        res.c_lo = c_min;
        res.c_hi = hi;
        res.converged = true;
        res.low_confidence = true;
        return res;
    }
    while (budget > 0 && hi / lo > 2.0) {
        double mid = std::sqrt(hi * lo);
        if (works(mid))
            hi = mid;
        else
            lo = mid;
    }
    res.c_lo = lo;
    res.c_hi = hi;
    res.converged = hi / lo <= 2.0;
    return res;
}

}  // namespace nsnudge
