#pragma once

#include <cstdint>
#include <string>

#include "nsnudge/field.hpp"

namespace nsnudge {

enum class ForcingKind { SteadyLowMode, TaylorGreenSustain, Custom };

std::string to_string(ForcingKind k);
ForcingKind forcing_kind_from_string(const std::string& s);

// Steady (time-independent), zero-mean, divergence-free body force.
// amplitude is the L2 norm |f|; when grashof > 0 it wins and
// |f| = grashof * nu^2 * lambda1 is derived at build time.
struct ForcingSpec {
    ForcingKind kind = ForcingKind::SteadyLowMode;
    double amplitude = 0.0;
    double grashof = 0.0;
    int shell_min = 3;  // active band of integer frequency magnitudes
    int shell_max = 5;
    std::uint64_t seed_stream = 1;  // phase stream within the run seed
    std::string custom_path;        // snapshot file for Custom
};

VelocityField make_forcing(const GridSpec& grid, const ForcingSpec& spec, double nu,
                           std::uint64_t run_seed);

// G = |f| / (nu^2 lambda1); the limsup in the definition degenerates to the
// constant value for steady forcing.
double grashof(const VelocityField& forcing, double nu, double lambda1);

}  // namespace nsnudge
