#include "nsnudge/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsnudge/fft.hpp"
#include "nsnudge/spectral_ops.hpp"

namespace nsnudge {

ImexStepper::ImexStepper(const GridSpec& grid, double nu, VelocityField forcing, StepperConfig config,
                         std::optional<NudgeConfig> nudge)
    : grid_(grid),
      nu_(nu),
      forcing_(std::move(forcing)),
      cfg_(config),
      nudge_(std::move(nudge)),
      state_(grid),
      prev_nl_(grid) {
    cfg_.validate();
    if (!(nu_ > 0.0)) throw ValidationError("stepper: nu must be > 0");
    if (forcing_.grid() != grid_) throw ValidationError("stepper: forcing resolution mismatch");
    apply_dealias(forcing_);
    zero_mean(forcing_);
    if (nudge_) {
        if (!(nudge_->mu > 0.0)) throw ValidationError("stepper: nudging requires mu > 0");
        nudge_->interp.validate(grid_);
        double spill = nudge_->mu * nudge_->c0 * nudge_->interp.h * nudge_->interp.h;
        if (spill > nu_ && !nudge_->override_constraints) {
            std::ostringstream os;
            os << "stepper: well-posedness constraint mu*c0*h^2 <= nu violated (mu*c0*h^2 = " << spill
               << ", nu = " << nu_ << "); pass the override flag to run anyway";
            throw ValidationError(os.str());
        }
        if (nudge_->interp.kind != InterpolantKind::LowModes && nudge_->mu * cfg_.dt > 1.0 &&
            !nudge_->override_constraints) {
            throw ValidationError("stepper: explicit nudging needs mu*dt <= 1 (got " +
                                  std::to_string(nudge_->mu * cfg_.dt) + ")");
        }
    }
    double fl2 = norm_l2(forcing_);
    double lam1 = grid_.lambda1();
    double G = fl2 / (nu_ * nu_ * lam1);
    blowup_scale_ = std::max(2.0 * nu_ * nu_ * G * G, 1e-30);
}

void ImexStepper::set_state(const VelocityField& state, double t) {
    if (state.grid() != grid_) throw ValidationError("stepper: state resolution mismatch");
    state_ = state;
    apply_dealias(state_);
    zero_mean(state_);
    t_ = t;
    have_prev_nl_ = false;
    double e0 = norm_l2(state_);
    blowup_scale_ = std::max(blowup_scale_, std::max(e0 * e0, 1e-30));
}

VelocityField ImexStepper::nonlinear_rhs(const VelocityField& v, double* maxvel) {
    // -B(v,v); the advecting-velocity transform doubles as the CFL probe
    VelocityField vm(v);
    apply_dealias(vm);
    RealVectorField r = to_real(vm);
    double m = 0.0;
    for (int n = 0; n < grid_.size(); ++n)
        m = std::max(m, std::max(std::abs(r.u1[n]), std::abs(r.u2[n])));
    if (maxvel) *maxvel = m;
    VelocityField nl = bilinear(v, v);
    nl *= -1.0;
    return nl;
}

void ImexStepper::check_health(const VelocityField& v) const {
    double e = norm_l2(v);
    if (!std::isfinite(e)) {
        std::ostringstream os;
        os << "blow-up detected at t = " << t_ << ": non-finite state norm";
        throw BlowUpError(os.str());
    }
    if (e * e > 1e6 * blowup_scale_) {
        std::ostringstream os;
        os << "blow-up detected at t = " << t_ << ": |v|^2 = " << e * e << " exceeds 1e6 x reference scale "
           << blowup_scale_ << " (numerical instability; 2D NSE cannot blow up)";
        throw BlowUpError(os.str());
    }
}

VelocityField ImexStepper::predict() {
    check_health(state_);
    double maxvel = 0.0;
    VelocityField nl = nonlinear_rhs(state_, &maxvel);
    last_max_velocity_ = maxvel;
    if (maxvel > 0.0) {
        double dt_cfl = cfg_.cfl_safety * grid_.dx() / maxvel;
        if (cfg_.dt > dt_cfl) {
            std::ostringstream os;
            os << "CFL violation at t = " << t_ << ": dt = " << cfg_.dt << " > " << dt_cfl
               << " (max velocity " << maxvel << ")";
            throw CflError(os.str());
        }
    }

    VelocityField rhs(grid_);
    if (have_prev_nl_) {
        rhs = nl;
        rhs *= 1.5;
        rhs.axpy(-0.5, prev_nl_);
    } else {
        rhs = nl;
    }
    rhs += forcing_;

    VelocityField next(grid_);
    const int N = grid_.N();
    const double dt = cfg_.dt;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            int n = grid_.flat(a, b);
            double half = 0.5 * dt * nu_ * grid_.ksq(a, b);
            double inv = 1.0 / (1.0 + half);
            for (int i = 0; i < 2; ++i)
                next.comp(i)[n] = ((1.0 - half) * state_.comp(i)[n] + dt * rhs.comp(i)[n]) * inv;
        }
    zero_mean(next);

    prev_nl_ = std::move(nl);
    have_prev_nl_ = true;
    return next;
}

void ImexStepper::accept(VelocityField next) {
    state_ = std::move(next);
    t_ += cfg_.dt;
    check_health(state_);
}

void ImexStepper::apply_nudge_correction(VelocityField& y, const VelocityField& observed) const {
    const double dt = cfg_.dt;
    const double mu = nudge_->mu;
    VelocityField diff = observed;
    diff -= interp_apply(nudge_->interp, y);

    if (nudge_->interp.kind == InterpolantKind::LowModes) {
        // per-mode implicit: v = y + dt*mu*(O - I_h y)/(1 + dt*nu*k^2/2 + dt*mu)
        const int N = grid_.N();
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                int n = grid_.flat(a, b);
                double half = 0.5 * dt * nu_ * grid_.ksq(a, b);
                double gain = dt * mu / (1.0 + half + dt * mu);
                for (int i = 0; i < 2; ++i) y.comp(i)[n] += gain * diff.comp(i)[n];
            }
    } else {
        apply_dealias(diff);
        zero_mean(diff);
        VelocityField corr = leray_project(diff);
        y.axpy(dt * mu, corr);
    }
    zero_mean(y);
}

void ImexStepper::advance(const VelocityField* observed) {
    VelocityField y = predict();
    if (!nudge_) {
        if (observed) throw ValidationError("stepper: observation supplied but nudging not configured");
        accept(std::move(y));
        return;
    }
    if (!observed) throw ValidationError("stepper: nudging configured but no observation supplied");
    apply_nudge_correction(y, *observed);
    accept(std::move(y));
}

void ImexStepper::advance_self_observed() {
    if (!nudge_) throw ValidationError("stepper: nudging not configured");
    VelocityField y = predict();
    VelocityField obs = interp_apply(nudge_->interp, y);
    apply_nudge_correction(y, obs);
    accept(std::move(y));
}

VelocityField integrate(const VelocityField& u0, const VelocityField& forcing, double nu, double T,
                        const StepperConfig& config, const TrajectoryCallbacks& callbacks) {
    if (!(T > 0.0)) throw ValidationError("integrate: T must be > 0");
    ImexStepper stepper(u0.grid(), nu, forcing, config);
    stepper.set_state(u0, 0.0);
    long nsteps = std::lround(T / config.dt);
    if (nsteps < 1) nsteps = 1;
    if (callbacks.on_sample) callbacks.on_sample(0.0, stepper.state());
    for (long s = 1; s <= nsteps; ++s) {
        stepper.advance();
        if (callbacks.on_sample && (s % std::max(1, callbacks.sample_stride) == 0 || s == nsteps))
            callbacks.on_sample(stepper.time(), stepper.state());
    }
    return stepper.state();
}

}  // namespace nsnudge
