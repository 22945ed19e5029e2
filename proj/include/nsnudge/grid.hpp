#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nsnudge {

// Periodic box [0,L]^2 sampled on an N x N grid, with the FFT wavenumber
// lattice k = (2*pi/L) * (j1, j2), j in {-N/2, ..., N/2-1}.
//
// Spectral coefficients are stored on the full complex lattice in FFT order,
// row-major: index a in [0,N) maps to the signed frequency
//   j(a) = a          for a <= N/2-1
//   j(a) = a - N      otherwise.
// Fields carry continuum Fourier-series coefficients, so Plancherel sums
// reproduce the continuum L2 norms (|f|^2 = L^2 * sum |fhat|^2).
class GridSpec {
  public:
    GridSpec(double box_side, int resolution) : L_(box_side), N_(resolution) {
        if (!(L_ > 0.0)) throw std::invalid_argument("GridSpec: box side must be > 0");
        if (N_ < 4 || N_ % 2 != 0) throw std::invalid_argument("GridSpec: resolution must be an even integer >= 4");
    }

    double L() const { return L_; }
    int N() const { return N_; }
    int size() const { return N_ * N_; }

    // smallest Stokes eigenvalue on the box
    double lambda1() const {
        double dk = 2.0 * pi() / L_;
        return dk * dk;
    }

    double dk() const { return 2.0 * pi() / L_; }
    double dx() const { return L_ / N_; }

    // signed integer frequency of storage index a
    int freq(int a) const { return a <= N_ / 2 - 1 ? a : a - N_; }
    // storage index of signed frequency j (j in [-N/2, N/2-1])
    int index_of(int j) const { return j >= 0 ? j : j + N_; }

    double k1(int a) const { return dk() * freq(a); }
    double k2(int b) const { return dk() * freq(b); }
    double ksq(int a, int b) const {
        double ka = k1(a), kb = k2(b);
        return ka * ka + kb * kb;
    }

    int flat(int a, int b) const { return a * N_ + b; }

    // two-thirds rule: retain |j1|,|j2| <= floor(N/3)
    int dealias_kmax() const { return N_ / 3; }
    bool dealias_keep(int a, int b) const {
        int m = dealias_kmax();
        return std::abs(freq(a)) <= m && std::abs(freq(b)) <= m;
    }

    std::vector<bool> dealias_mask() const {
        std::vector<bool> mask(size());
        for (int a = 0; a < N_; ++a)
            for (int b = 0; b < N_; ++b) mask[flat(a, b)] = dealias_keep(a, b);
        return mask;
    }

    bool operator==(const GridSpec& o) const { return L_ == o.L_ && N_ == o.N_; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }

    static constexpr double pi() { return 3.14159265358979323846264338327950288; }

  private:
    double L_;
    int N_;
};

}  // namespace nsnudge
