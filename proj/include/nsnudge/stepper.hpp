#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "nsnudge/field.hpp"
#include "nsnudge/interpolant.hpp"

namespace nsnudge {

struct StepperConfig {
    double dt = 1e-3;
    double cfl_safety = 0.5;        // in (0,1)
    std::string scheme = "cnab2";   // Crank-Nicolson viscosity + AB2 advection

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be > 0");
        if (!(cfl_safety > 0.0 && cfl_safety < 1.0))
            throw std::invalid_argument("stepper: cfl_safety must lie in (0,1)");
        if (scheme != "cnab2") throw std::invalid_argument("stepper: unknown scheme " + scheme);
    }
};

struct NudgeConfig {
    double mu = 0.0;
    InterpolantSpec interp;
    double c0 = 1.0;  // certified constant entering mu*c0*h^2 <= nu
    bool override_constraints = false;
};

struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CflError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One IMEX step of the functional Navier-Stokes system
//   du/dt + nu*A*u + B(u,u) = f            (un-nudged)
//   dv/dt + nu*A*v + B(v,v) = f + mu*P_sigma(I_h(u) - I_h(v))
// Viscosity is Crank-Nicolson, advection Adams-Bashforth-2 (forward Euler on
// the first step). The nudge enters as a post-step correction against the
// un-nudged update y:
//   v = y + dt*mu*K(O - I_h(y)),
// with O the observation of the truth at the end-of-step time. For LowModes
// K is the exact per-mode implicit factor 1/(1 + dt*nu*k^2/2 + dt*mu); for
// the piecewise-constant kinds K = P_sigma (dealiased) and explicit
// stability demands mu*dt <= 1. With O = I_h(y) the correction is exactly
// zero, so a self-observing run is bit-identical to the un-nudged one.
class ImexStepper {
  public:
    ImexStepper(const GridSpec& grid, double nu, VelocityField forcing, StepperConfig config,
                std::optional<NudgeConfig> nudge = std::nullopt);

    void set_state(const VelocityField& state, double t);
    const VelocityField& state() const { return state_; }
    double time() const { return t_; }

    // advance one dt; observed is the truth observation I_h(u) as a spectral
    // field (end-of-step time), required iff nudging is configured
    void advance(const VelocityField* observed = nullptr);

    // nudged step that observes its own un-nudged update; the correction is
    // exactly zero, so the trajectory matches the un-nudged one bit for bit
    void advance_self_observed();

    const std::optional<NudgeConfig>& nudge() const { return nudge_; }
    double max_velocity() const { return last_max_velocity_; }

  private:
    VelocityField predict();
    void accept(VelocityField next);
    void apply_nudge_correction(VelocityField& y, const VelocityField& observed) const;
    VelocityField nonlinear_rhs(const VelocityField& v, double* maxvel);
    void check_health(const VelocityField& v) const;

    GridSpec grid_;
    double nu_;
    VelocityField forcing_;
    StepperConfig cfg_;
    std::optional<NudgeConfig> nudge_;

    VelocityField state_;
    VelocityField prev_nl_;
    bool have_prev_nl_ = false;
    double t_ = 0.0;
    double blowup_scale_ = 0.0;
    double last_max_velocity_ = 0.0;
};

struct TrajectoryCallbacks {
    int sample_stride = 1;
    // called at t=0 and after every sample_stride steps
    std::function<void(double t, const VelocityField& state)> on_sample;
};

// integrate the un-nudged system for nsteps = round(T/dt); returns the final
// state. Deterministic: fixed iteration order, no hidden state.
VelocityField integrate(const VelocityField& u0, const VelocityField& forcing, double nu, double T,
                        const StepperConfig& config, const TrajectoryCallbacks& callbacks = {});

}  // namespace nsnudge
