#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "nsnudge/grid.hpp"

namespace nsnudge {

using Complex = std::complex<double>;

// Scalar periodic field in spectral coefficients (work fields: vorticity,
// streamfunction, interpolant channels).
class ScalarField {
  public:
    explicit ScalarField(const GridSpec& grid) : grid_(grid), c_(grid.size(), Complex(0.0, 0.0)) {}

    const GridSpec& grid() const { return grid_; }
    Complex& at(int a, int b) { return c_[grid_.flat(a, b)]; }
    const Complex& at(int a, int b) const { return c_[grid_.flat(a, b)]; }
    std::vector<Complex>& data() { return c_; }
    const std::vector<Complex>& data() const { return c_; }

  private:
    GridSpec grid_;
    std::vector<Complex> c_;
};

// Two-component periodic vector field in spectral coefficients. The canonical
// state: divergence-free, zero-mean, conjugate-symmetric. Construction does
// not enforce the invariants (interpolant outputs are legitimately not
// divergence-free); the operators that must preserve them do, and
// diagnostics below let tests pin them down.
class VelocityField {
  public:
    explicit VelocityField(const GridSpec& grid)
        : grid_(grid), c_{std::vector<Complex>(grid.size()), std::vector<Complex>(grid.size())} {}

    const GridSpec& grid() const { return grid_; }

    std::vector<Complex>& comp(int i) { return c_[i]; }
    const std::vector<Complex>& comp(int i) const { return c_[i]; }

    Complex& at(int i, int a, int b) { return c_[i][grid_.flat(a, b)]; }
    const Complex& at(int i, int a, int b) const { return c_[i][grid_.flat(a, b)]; }

    VelocityField& operator+=(const VelocityField& o) {
        require_same_grid(o);
        for (int i = 0; i < 2; ++i)
            for (std::size_t n = 0; n < c_[i].size(); ++n) c_[i][n] += o.c_[i][n];
        return *this;
    }
    VelocityField& operator-=(const VelocityField& o) {
        require_same_grid(o);
        for (int i = 0; i < 2; ++i)
            for (std::size_t n = 0; n < c_[i].size(); ++n) c_[i][n] -= o.c_[i][n];
        return *this;
    }
    VelocityField& operator*=(double s) {
        for (int i = 0; i < 2; ++i)
            for (auto& z : c_[i]) z *= s;
        return *this;
    }

    friend VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
    friend VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
    friend VelocityField operator*(double s, VelocityField f) { return f *= s; }
    friend VelocityField operator*(VelocityField f, double s) { return f *= s; }

    // this += s * o
    void axpy(double s, const VelocityField& o) {
        require_same_grid(o);
        for (int i = 0; i < 2; ++i)
            for (std::size_t n = 0; n < c_[i].size(); ++n) c_[i][n] += s * o.c_[i][n];
    }

    void require_same_grid(const VelocityField& o) const {
        if (grid_ != o.grid_) throw std::invalid_argument("VelocityField: resolution mismatch");
    }

  private:
    GridSpec grid_;
    std::vector<Complex> c_[2];
};

// Real-space samples on the N x N grid, x_m = m*L/N (row-major, x slowest).
struct RealVectorField {
    GridSpec grid;
    std::vector<double> u1, u2;

    explicit RealVectorField(const GridSpec& g)
        : grid(g), u1(g.size(), 0.0), u2(g.size(), 0.0) {}
};

}  // namespace nsnudge
