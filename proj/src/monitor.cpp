#include "nsnudge/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "nsnudge/spectral_ops.hpp"

namespace nsnudge {

MonitorReport monitor(const VelocityField& state, double t, double G, double nu, double lambda1,
                      bool post_spinup) {
    Norms n = norms(state);
    MonitorReport r;
    r.t = t;
    r.l2_sq = n.l2 * n.l2;
    r.h1_sq = n.h1 * n.h1;
    r.h2_sq = n.h2 * n.h2;
    r.bound_l2_sq = 2.0 * nu * nu * G * G;
    r.bound_h1_sq = 2.0 * nu * nu * lambda1 * G * G;
    double gp = (1.0 + G) * (1.0 + G);
    r.auball_ratio = r.h2_sq / (nu * nu * lambda1 * lambda1 * gp * gp);
    r.post_spinup = post_spinup;
    if (post_spinup) {
        if (r.l2_sq > r.bound_l2_sq) r.violations.push_back("l2_bound");
        if (r.h1_sq > r.bound_h1_sq) r.violations.push_back("h1_bound");
    }
    return r;
}

std::string MonitorReport::to_json() const {
    nlohmann::ordered_json j;
    j["t"] = t;
    j["l2_sq"] = l2_sq;
    j["h1_sq"] = h1_sq;
    j["h2_sq"] = h2_sq;
    j["bound_l2_sq"] = bound_l2_sq;
    j["bound_h1_sq"] = bound_h1_sq;
    j["auball_ratio"] = auball_ratio;
    j["post_spinup"] = post_spinup;
    j["violations"] = violations;
    return j.dump();
}

std::vector<WindowCheck> check_windows(const std::vector<MonitorReport>& samples, double window,
                                       double G, double nu, double lambda1, double t0) {
    std::vector<WindowCheck> out;
    if (samples.size() < 2) return out;
    double bound = 2.0 * (1.0 + window * nu * lambda1) * nu * G * G;
    double bound2 = bound * lambda1;

    // cumulative trapezoid integrals at each sample time
    std::vector<double> ih1(samples.size(), 0.0), ih2(samples.size(), 0.0);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        double dt = samples[i].t - samples[i - 1].t;
        ih1[i] = ih1[i - 1] + 0.5 * dt * (samples[i].h1_sq + samples[i - 1].h1_sq);
        ih2[i] = ih2[i - 1] + 0.5 * dt * (samples[i].h2_sq + samples[i - 1].h2_sq);
    }
    std::size_t j = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].t < t0) continue;
        double tend = samples[i].t + window;
        if (samples.back().t < tend - 1e-12) break;
        while (j + 1 < samples.size() && samples[j + 1].t <= tend) ++j;
        WindowCheck w;
        w.t_begin = samples[i].t;
        w.h1_integral = ih1[j] - ih1[i];
        w.h2_integral = ih2[j] - ih2[i];
        // partial last interval, trapezoid against the interpolated endpoint
        if (j + 1 < samples.size() && samples[j].t < tend) {
            double dt = samples[j + 1].t - samples[j].t;
            double frac = (tend - samples[j].t) / dt;
            double h1_end = samples[j].h1_sq + frac * (samples[j + 1].h1_sq - samples[j].h1_sq);
            double h2_end = samples[j].h2_sq + frac * (samples[j + 1].h2_sq - samples[j].h2_sq);
            w.h1_integral += 0.5 * (tend - samples[j].t) * (samples[j].h1_sq + h1_end);
            w.h2_integral += 0.5 * (tend - samples[j].t) * (samples[j].h2_sq + h2_end);
        }
        w.bound_h1 = bound;
        w.bound_h2 = bound2;
        w.h1_ok = w.h1_integral <= bound;
        w.h2_ok = w.h2_integral <= bound2;
        out.push_back(w);
    }
    return out;
}

double empirical_auball_constant(const std::vector<MonitorReport>& samples) {
    double c = 0.0;
    for (const auto& s : samples)
        if (s.post_spinup) c = std::max(c, s.auball_ratio);
    return c;
}

}  // namespace nsnudge
