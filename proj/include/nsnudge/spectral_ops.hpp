#pragma once

#include <cstdint>
#include <string>

#include "nsnudge/field.hpp"

namespace nsnudge {

struct Norms {
    double l2;  // |f|,  L2(Omega) norm
    double h1;  // ||f||, gradient (V) norm
    double h2;  // |Af|, Stokes norm
};

// ---- transforms -----------------------------------------------------------

RealVectorField to_real(const VelocityField& f);
VelocityField to_spectral(const RealVectorField& samples);

// scalar channel variants (work fields)
std::vector<double> to_real(const ScalarField& f);
ScalarField to_spectral_scalar(const GridSpec& grid, const std::vector<double>& samples);

// ---- operators of the functional setting ----------------------------------

// Orthogonal projection onto divergence-free zero-mean fields:
// uhat -> uhat - k (k.uhat)/|k|^2 for k != 0, and 0 at k = 0.
VelocityField leray_project(const VelocityField& f);

// Stokes operator: per-mode multiplication by |k|^2.
VelocityField stokes_apply(const VelocityField& f);

// B(u,v) = P_sigma(u . grad v), pseudo-spectral with the two-thirds mask
// applied to the inputs and to the product.
VelocityField bilinear(const VelocityField& u, const VelocityField& v);

Norms norms(const VelocityField& f);
double norm_l2(const VelocityField& f);

// L2(Omega) inner product (u,v) = L^2 * sum Re(uhat conj(vhat))
double inner_l2(const VelocityField& u, const VelocityField& v);

// ---- in-place hygiene ------------------------------------------------------

void zero_mean(VelocityField& f);
void apply_dealias(VelocityField& f);
void apply_dealias(ScalarField& f);

// diagnostics
double max_divergence(const VelocityField& f);          // max_k |k.uhat|
double conjugate_symmetry_defect(const VelocityField& f);

// ---- constructors ----------------------------------------------------------

// Random divergence-free zero-mean dealiased field with energy on the shell
// jmin <= |j| <= jmax (integer frequency magnitudes), spectrum ~ |k|^(-decay),
// scaled so |f| = amplitude. Built from a random streamfunction, so
// divergence-free to round-off.
VelocityField random_divfree_field(const GridSpec& grid, std::uint64_t seed, int jmin, int jmax,
                                   double amplitude, double decay = 0.0);

// Taylor-Green vortex scaled so |f| = amplitude:
// u = s*(sin(2*pi*x/L) cos(2*pi*y/L), -cos(2*pi*x/L) sin(2*pi*y/L)).
VelocityField taylor_green(const GridSpec& grid, double amplitude);

// ---- checkpoint snapshots ---------------------------------------------------

// Binary snapshot: magic, version, N, component count, metadata length, L,
// metadata bytes (JSON), then per component N^2 little-endian float64 pairs
// (re, im) in row-major FFT order.
void save_snapshot(const std::string& path, const VelocityField& f, const std::string& metadata);
VelocityField load_snapshot(const std::string& path, std::string* metadata = nullptr);

}  // namespace nsnudge
