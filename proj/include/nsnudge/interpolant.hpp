#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsnudge/field.hpp"

namespace nsnudge {

enum class InterpolantKind { LowModes, VolumeElements, Nodes };

std::string to_string(InterpolantKind k);
InterpolantKind interpolant_kind_from_string(const std::string& s);

// Observable operator I_h at observation length scale h.
//  - LowModes: orthogonal projection onto wavenumbers |k| <= 1/h
//  - VolumeElements: piecewise-constant field of exact cell means on the
//    ceil(L/h)^2 uniform square partition
//  - Nodes: piecewise-constant field of exact point samples, one node per
//    cell at the configurable cell-relative offset (default center)
// Cell means and nodal values are exact integrals/evaluations of the Fourier
// series; piecewise-constant outputs are returned as dealiased spectral
// fields.
struct InterpolantSpec {
    InterpolantKind kind = InterpolantKind::LowModes;
    double h = 1.0;
    double node_offset_x = 0.5;  // cell-relative, in [0,1)
    double node_offset_y = 0.5;

    double cutoff() const { return 1.0 / h; }
    int cells_per_side(double box_side) const;  // ceil(L/h); meaningful for VolumeElements/Nodes

    // throws std::invalid_argument on h > L, non-positive h, or a grid too
    // coarse to resolve the cells (ceil(L/h) > N/3 for the cell kinds)
    void validate(const GridSpec& grid) const;

    std::string cache_key(const GridSpec& grid) const;
};

// Raw low-dimensional observation data: mode coefficients (re/im pairs over
// the independent half-lattice, both components) or per-cell two-component
// values, row-major.
struct ObservationRecord {
    InterpolantSpec spec;
    std::vector<double> values;

    std::string to_json() const;
    static ObservationRecord from_json(const std::string& text);
    void save_binary(const std::string& path) const;
    static ObservationRecord load_binary(const std::string& path);
};

ObservationRecord observe(const InterpolantSpec& spec, const VelocityField& field);
VelocityField reconstruct(const GridSpec& grid, const ObservationRecord& record);

// I_h as a field-to-field map; identically reconstruct(observe(.)).
VelocityField interp_apply(const InterpolantSpec& spec, const VelocityField& field);

enum class CertOrder { H1, H2 };
std::string to_string(CertOrder o);

// Empirical approximation constant: max over probe fields of
//   H1: |phi - I_h phi|_{L2}^2 / (h^2 ||phi||^2)
//   H2: |phi - I_h phi|_{L2}^2 / (h^4/4 |A phi|^2)
// where ||.|| and |A.| are the gradient and Stokes norms. The L2 error is
// computed against the exact piecewise-constant interpolant (continuum
// functionals), not its dealiased representation.
struct InterpCertificate {
    InterpolantSpec spec;
    CertOrder order = CertOrder::H1;
    double c0_estimate = 0.0;   // max defining ratio over all probes
    double worst_case_ratio = 0.0;
    int sample_count = 0;
    std::string worst_probe;
    int grid_n = 0;
    double grid_l = 0.0;
    std::uint64_t seed = 0;

    // the c0 entering mu*c0*h^2 <= nu: the H2 ratio bounds c0^2
    double effective_c0() const;

    std::string to_json() const;
    static InterpCertificate from_json(const std::string& text);
};

// probes >= 100 required; the probe set mixes seeded random divergence-free
// fields across band windows with adversarial single modes near the
// relevant cutoffs.
InterpCertificate certify_c0(const GridSpec& grid, const InterpolantSpec& spec, CertOrder order,
                             int probes, std::uint64_t seed);

// worst defining ratio over a fresh random validation set
double validate_certificate(const GridSpec& grid, const InterpCertificate& cert, int probes,
                            std::uint64_t seed);

namespace interp_detail {
// exact per-cell means / nodal values of one spectral channel (row-major cells)
std::vector<double> cell_means_channel(const GridSpec& grid, int cells, const std::vector<Complex>& coeff);
std::vector<double> node_values_channel(const GridSpec& grid, int cells, double offx, double offy,
                                        const std::vector<Complex>& coeff);
// defining ratio of one probe
double certificate_ratio(const GridSpec& grid, const InterpolantSpec& spec, CertOrder order,
                         const VelocityField& probe);
}  // namespace interp_detail

}  // namespace nsnudge
