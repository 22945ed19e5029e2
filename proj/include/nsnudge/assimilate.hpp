#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsnudge/forcing.hpp"
#include "nsnudge/interpolant.hpp"
#include "nsnudge/monitor.hpp"
#include "nsnudge/stepper.hpp"
#include "nsnudge/thresholds.hpp"

namespace nsnudge {

enum class V0Policy { Zero, Given, TruthPlusPerturbation };

std::string to_string(V0Policy p);
V0Policy v0_policy_from_string(const std::string& s);

struct AssimilationConfig {
    int N = 32;
    double L = 6.283185307179586476925287;  // 2*pi
    double nu = 0.1;
    ForcingSpec forcing;
    InterpolantSpec interp;
    double mu = 1.0;
    double c0 = 1.0;   // certified interpolant constant
    double c = 1.0;    // configured dimensionless constant of the sufficient conditions
    V0Policy v0_policy = V0Policy::Zero;
    double v0_perturbation = 0.0;          // relative size for TruthPlusPerturbation
    std::string v0_path;                   // snapshot for Given
    double spinup = -1.0;                  // truth spin-up; negative: auto, 5/(nu*lambda1)
    double T = 10.0;                       // assimilation horizon
    StepperConfig stepper;
    int sample_stride = 1;
    std::uint64_t seed = 1;
    bool override_constraints = false;

    GridSpec grid() const { return GridSpec(L, N); }
    double resolved_spinup() const { return spinup < 0.0 ? 5.0 / (nu * grid().lambda1()) : spinup; }
    void validate() const;

    std::string to_json() const;
    static AssimilationConfig from_json(const std::string& text);
    std::uint64_t hash() const;  // canonical-JSON FNV-1a, keys sweep caching
};

struct ErrorSample {
    double t;
    double l2_w, h1_w;  // |w|, ||w||, w = u - v
    double l2_u, h1_u;
    int monitor_flags;  // bit 0: l2 bound violated, bit 1: h1 bound violated (post spin-up)
};

struct FitResult {
    double alpha = 0.0;      // decay exponent of ||w|| ~ C e^{-alpha t}
    double logC = 0.0;
    double rms_residual = 0.0;  // RMS in log space
    int nsamples = 0;
    double t_begin = 0.0, t_end = 0.0;
};

struct ErrorSeries {
    std::vector<ErrorSample> samples;
    std::optional<FitResult> fit;  // on ||w|| (H1), the periodic-case norm

    // least-squares fit of log h1_w over [t_begin, t_end]; samples at or
    // below the round-off floor are excluded. Throws ValidationError with
    // fewer than 10 usable samples.
    static FitResult fit_decay_rate(const std::vector<ErrorSample>& samples, double t_begin,
                                    double t_end, bool use_h1 = true);

    // transient exclusion per the fitting policy: drop leading samples until
    // h1_w first falls below 50% of its running maximum
    double transient_end() const;
};

struct RunPairResult {
    ErrorSeries series;
    std::vector<MonitorReport> monitors;  // truth trajectory, spin-up included
    VelocityField u_final, v_final;
    double t_final = 0.0;
    double G = 0.0;
    ThresholdReport thresholds;
    std::vector<std::string> warnings;
};

// Coupled truth/assimilated integration: spin the truth up, start v per the
// v0 policy, then advance in lockstep; every step the truth is observed
// through I_h (end-of-step) and the observation drives the nudged step.
RunPairResult run_pair(const AssimilationConfig& config);

struct PredictionPoint {
    double eps;
    double time_to_eps;  // first strict exceedance after t1; T_pred if censored
    bool censored;
};

struct PredictionResult {
    double t1;
    std::vector<ErrorSample> divergence;  // forecast-vs-truth norms over [t1, t1+T_pred]
    std::vector<PredictionPoint> ladder;
};

// Section-5 experiment: assimilate over [0, t1], then integrate the
// un-nudged equations from v(t1) and record how the forecast drifts off the
// truth. eps entries are relative L2 errors |w|/|u|.
PredictionResult prediction_experiment(const AssimilationConfig& config, double t1, double T_pred,
                                       const std::vector<double>& eps_ladder);

struct CalibrationEvaluation {
    double c;
    double G;
    double mu, h;
    bool resolvable = false;
    bool converged = false;
    double fitted_rate = 0.0;
    double decades = 0.0;
};

struct CalibrationResult {
    double c_lo = 0.0;        // largest failing candidate (0 if none failed)
    double c_hi = 0.0;        // smallest working candidate
    bool converged = false;   // bracket tightened to c_hi/c_lo <= 2
    bool low_confidence = false;  // fewer than 3 Grashof values supplied
    std::vector<CalibrationEvaluation> evaluations;
};

// Bisect (in log space) for the smallest configured c whose report-boundary
// (mu, h) pair synchronizes every ladder point. base supplies everything but
// forcing amplitude and (mu, h), which are derived per candidate.
CalibrationResult calibrate_c(const AssimilationConfig& base, const std::vector<double>& grashof_ladder,
                              int max_evaluations);

// Feasible pair derived from a report: h is the largest length compatible
// with both the periodic h-bound and well-posedness; the window of
// admissible mu runs from mu_periodic up to nu/(c0 h^2). mu_eval sits at the
// window's geometric middle and is what calibration and headline runs use.
struct FeasiblePair {
    double mu = 0.0;      // mu_periodic, the sufficient lower bound
    double mu_top = 0.0;  // nu/(c0 h^2)
    double mu_eval = 0.0; // geometric middle of [mu, mu_top]
    double h = 0.0;
};
FeasiblePair feasible_pair(const ThresholdReport& report);

}  // namespace nsnudge
