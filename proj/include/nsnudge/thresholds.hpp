#pragma once

#include <optional>
#include <string>

namespace nsnudge {

// phi(r) = r - beta*(1 + log r), r >= 1, beta > 0
double minlog_phi(double r, double beta);
// exact minimum of phi over r >= 1: 1 - beta for beta <= 1, else -beta*log(beta)
double minlog_lower_bound(double beta);

// Sufficient-condition arithmetic for synchronization of the nudged system.
// All fields are exact formula evaluations; no simulation. The h-dependent
// entries (well-posedness cap, feasibility) are present only when h is supplied.
struct ThresholdReport {
    double G = 0.0;
    double lambda1 = 0.0;
    double nu = 0.0;
    double c0 = 1.0;  // certified interpolant constant
    double c = 1.0;   // configured dimensionless constant

    double c1 = 0.0;  // 5*c0*c^2
    double c2 = 0.0;  // 3*max{c3, c4}
    double c3 = 0.0;  // 2*c*log(2*c^(3/2))
    double c4 = 0.0;  // 8*c
    double J = 0.0;   // c3 + c4*log(1+G)

    double dirichlet_h_bound = 0.0;  // required 1/h^2 >= c1*lambda1*G^2
    double periodic_h_bound = 0.0;   // required 1/h^2 >= c2*lambda1*G*(1+log(1+G))
    double mu_dirichlet = 0.0;       // 5*c^2*G^2*nu*lambda1
    double mu_periodic = 0.0;        // 3*nu*lambda1*J*G
    double mu_periodic_alt = 0.0;  // alternative form 3*c2*nu*lambda1*G*(1+log(1+G))/c0

    std::optional<double> h;
    std::optional<double> wellposed_bound;  // nu/(c0*h^2)
    std::optional<bool> feasible;           // mu_periodic <= wellposed_bound and h-bound met

    std::string to_json() const;
};

// pre: nu, lambda1, c0 > 0, G >= 0. The analysis assumes c >= 1; smaller
// calibrated values are accepted (the formulas remain well defined for
// c > 0) since the constant is empirical here.
ThresholdReport thresholds(double G, double nu, double lambda1, double c0, double c,
                           std::optional<double> h = std::nullopt);

}  // namespace nsnudge
