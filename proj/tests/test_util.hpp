#pragma once

#include <cmath>

#include "nsnudge/field.hpp"
#include "nsnudge/rng.hpp"
#include "nsnudge/spectral_ops.hpp"

namespace nsnudge {
namespace testutil {

// conjugate-symmetric zero-mean field that is NOT divergence-free:
// independent random draws per component on the dealiased band
inline VelocityField random_symmetric_field(const GridSpec& g, std::uint64_t seed, int jmin = 1,
                                            int jmax = 1 << 20) {
    SplitMix64 rng(seed);
    VelocityField f(g);
    const int N = g.N();
    int kmax = std::min(jmax, g.dealias_kmax());
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            int j1 = g.freq(a), j2 = g.freq(b);
            if (!(j1 > 0 || (j1 == 0 && j2 > 0))) continue;
            double jm = std::sqrt(static_cast<double>(j1) * j1 + static_cast<double>(j2) * j2);
            if (jm < jmin || jm > kmax) continue;
            for (int i = 0; i < 2; ++i) {
                Complex z(rng.normal(), rng.normal());
                f.at(i, a, b) = z;
                f.at(i, g.index_of(-j1), g.index_of(-j2)) = std::conj(z);
            }
        }
    apply_dealias(f);
    zero_mean(f);
    return f;
}

inline double rel_l2_error(const VelocityField& a, const VelocityField& b) {
    VelocityField d = a;
    d -= b;
    double nb = norm_l2(b);
    return nb > 0.0 ? norm_l2(d) / nb : norm_l2(d);
}

}  // namespace testutil
}  // namespace nsnudge
