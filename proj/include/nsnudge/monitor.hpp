#pragma once

#include <string>
#include <vector>

#include "nsnudge/field.hpp"

namespace nsnudge {

// A-priori attractor bounds evaluated along a trajectory. The instantaneous
// bounds |u|^2 <= 2 nu^2 G^2 and ||u||^2 <= 2 nu^2 lambda1 G^2 hold after a
// spin-up time t0 that depends on the initial data; before t0 violations are
// data, not errors. The |Au|^2 bound carries an unknown shape constant, so
// only the ratio |Au|^2 / (nu^2 lambda1^2 (1+G)^4) is reported.
struct MonitorReport {
    double t = 0.0;
    double l2_sq = 0.0;
    double h1_sq = 0.0;
    double h2_sq = 0.0;
    double bound_l2_sq = 0.0;  // 2 nu^2 G^2
    double bound_h1_sq = 0.0;  // 2 nu^2 lambda1 G^2
    double auball_ratio = 0.0;
    bool post_spinup = false;
    std::vector<std::string> violations;

    std::string to_json() const;
};

MonitorReport monitor(const VelocityField& state, double t, double G, double nu, double lambda1,
                      bool post_spinup);

// Windowed integral bounds from the same a-priori analysis:
//   int_t^{t+Tw} ||u||^2 <= 2 (1 + Tw nu lambda1) nu G^2
//   int_t^{t+Tw} |Au|^2  <= 2 (1 + Tw nu lambda1) nu lambda1 G^2
// accumulated with the trapezoid rule over the sampled reports.
struct WindowCheck {
    double t_begin = 0.0;
    double h1_integral = 0.0;
    double h2_integral = 0.0;
    double bound_h1 = 0.0;
    double bound_h2 = 0.0;
    bool h1_ok = true;
    bool h2_ok = true;
};

std::vector<WindowCheck> check_windows(const std::vector<MonitorReport>& samples, double window,
                                       double G, double nu, double lambda1, double t0);

// max auball ratio over post-spin-up samples (the empirical shape constant)
double empirical_auball_constant(const std::vector<MonitorReport>& samples);

}  // namespace nsnudge
