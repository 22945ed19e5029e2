#include "nsnudge/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace nsnudge {

double minlog_phi(double r, double beta) {
    if (!(r >= 1.0)) throw std::domain_error("minlog_phi: r must be >= 1");
    if (!(beta > 0.0)) throw std::domain_error("minlog_phi: beta must be > 0");
    return r - beta * (1.0 + std::log(r));
}

double minlog_lower_bound(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("minlog_lower_bound: beta must be > 0");
    return beta <= 1.0 ? 1.0 - beta : -beta * std::log(beta);
}

ThresholdReport thresholds(double G, double nu, double lambda1, double c0, double c,
                           std::optional<double> h) {
    if (!(nu > 0.0) || !(lambda1 > 0.0) || !(c0 > 0.0) || !(c > 0.0) || !(G >= 0.0))
        throw std::invalid_argument("thresholds: G >= 0 and nu, lambda1, c0, c > 0 required");

    ThresholdReport r;
    r.G = G;
    r.lambda1 = lambda1;
    r.nu = nu;
    r.c0 = c0;
    r.c = c;

    r.c1 = 5.0 * c0 * c * c;
    r.c3 = 2.0 * c * std::log(2.0 * std::pow(c, 1.5));
    r.c4 = 8.0 * c;
    r.c2 = 3.0 * std::max(r.c3, r.c4);
    r.J = r.c3 + r.c4 * std::log1p(G);

    r.dirichlet_h_bound = r.c1 * lambda1 * G * G;
    r.periodic_h_bound = r.c2 * lambda1 * G * (1.0 + std::log1p(G));
    r.mu_dirichlet = 5.0 * c * c * G * G * nu * lambda1;
    r.mu_periodic = 3.0 * nu * lambda1 * r.J * G;
    r.mu_periodic_alt = 3.0 * r.c2 * nu * lambda1 * G * (1.0 + std::log1p(G)) / c0;

    if (h) {
        if (!(*h > 0.0)) throw std::invalid_argument("thresholds: h must be > 0");
        r.h = *h;
        r.wellposed_bound = nu / (c0 * *h * *h);
        bool hb = 1.0 / (*h * *h) >= r.periodic_h_bound;
        r.feasible = hb && r.mu_periodic <= *r.wellposed_bound;
    }
    return r;
}

std::string ThresholdReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["G"] = G;
    j["nu"] = nu;
    j["lambda1"] = lambda1;
    j["c0"] = c0;
    j["c"] = c;
    j["c1"] = c1;
    j["c2"] = c2;
    j["c3"] = c3;
    j["c4"] = c4;
    j["J"] = J;
    j["dirichlet_h_bound"] = dirichlet_h_bound;
    j["periodic_h_bound"] = periodic_h_bound;
    j["mu_dirichlet"] = mu_dirichlet;
    j["mu_periodic"] = mu_periodic;
    j["mu_periodic_alt"] = mu_periodic_alt;
    if (h) {
        j["h"] = *h;
        j["wellposed_bound"] = *wellposed_bound;
        j["feasible"] = *feasible;
    }
    return j.dump(2);
}

}  // namespace nsnudge
