#include "nsnudge/forcing.hpp"

#include <stdexcept>

#include "nsnudge/rng.hpp"
#include "nsnudge/spectral_ops.hpp"

namespace nsnudge {

std::string to_string(ForcingKind k) {
    switch (k) {
        case ForcingKind::SteadyLowMode: return "steady_low_mode";
        case ForcingKind::TaylorGreenSustain: return "taylor_green_sustain";
        case ForcingKind::Custom: return "custom";
    }
    return "?";
}

ForcingKind forcing_kind_from_string(const std::string& s) {
    if (s == "steady_low_mode") return ForcingKind::SteadyLowMode;
    if (s == "taylor_green_sustain") return ForcingKind::TaylorGreenSustain;
    if (s == "custom") return ForcingKind::Custom;
    throw std::invalid_argument("unknown forcing kind: " + s);
}

VelocityField make_forcing(const GridSpec& grid, const ForcingSpec& spec, double nu,
                           std::uint64_t run_seed) {
    double amp = spec.amplitude;
    if (spec.grashof > 0.0) amp = spec.grashof * nu * nu * grid.lambda1();
    switch (spec.kind) {
        case ForcingKind::SteadyLowMode: {
            if (amp < 0.0) throw std::invalid_argument("forcing: amplitude must be >= 0");
            VelocityField f = random_divfree_field(grid, split_seed(run_seed, spec.seed_stream),
                                                   spec.shell_min, spec.shell_max, amp);
            return f;
        }
        case ForcingKind::TaylorGreenSustain:
            return taylor_green(grid, amp);
        case ForcingKind::Custom: {
            VelocityField f = load_snapshot(spec.custom_path);
            if (f.grid() != grid) throw std::invalid_argument("forcing: custom snapshot resolution mismatch");
            VelocityField p = leray_project(f);
            apply_dealias(p);
            zero_mean(p);
            if (amp > 0.0) {
                double n0 = norm_l2(p);
                if (n0 > 0.0) p *= amp / n0;
            }
            return p;
        }
    }
    throw std::logic_error("forcing: unreachable");
}

double grashof(const VelocityField& forcing, double nu, double lambda1) {
    if (!(nu > 0.0) || !(lambda1 > 0.0)) throw std::invalid_argument("grashof: nu, lambda1 must be > 0");
    return norm_l2(forcing) / (nu * nu * lambda1);
}

}  // namespace nsnudge
