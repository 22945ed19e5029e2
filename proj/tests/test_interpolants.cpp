#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "nsnudge/interpolant.hpp"
#include "nsnudge/spectral_ops.hpp"
#include "test_util.hpp"

using namespace nsnudge;
using testutil::random_symmetric_field;

namespace {
const double kPi = GridSpec::pi();
}

TEST_CASE("spec validation") {
    GridSpec g(2.0 * kPi, 32);
    InterpolantSpec bad{InterpolantKind::VolumeElements, 10.0};
    CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);  // h > L
    InterpolantSpec coarse{InterpolantKind::Nodes, g.L() / 24.0};
    CHECK_THROWS_AS(coarse.validate(g), std::invalid_argument);  // 24 cells > N/3
    InterpolantSpec fine_modes{InterpolantKind::LowModes, g.L() / 64.0};
    CHECK_NOTHROW(fine_modes.validate(g));  // low-modes cutoff may exceed the band
    CHECK(InterpolantSpec{InterpolantKind::Nodes, g.L() / 8.0}.cells_per_side(g.L()) == 8);
    // h = L/M computed in floating point still yields M cells
    double h = g.L() / 7.0;
    CHECK(InterpolantSpec{InterpolantKind::Nodes, h}.cells_per_side(g.L()) == 7);
}

TEST_CASE("piecewise-constant kinds reproduce constants; low modes keep them at k=0") {
    GridSpec g(2.0 * kPi, 32);
    // constant scalar channel: only the k=0 coefficient
    std::vector<Complex> coeff(g.size(), Complex(0.0, 0.0));
    coeff[g.flat(0, 0)] = Complex(0.8125, 0.0);
    auto means = interp_detail::cell_means_channel(g, 4, coeff);
    auto nodes = interp_detail::node_values_channel(g, 4, 0.5, 0.5, coeff);
    for (double m : means) CHECK(m == doctest::Approx(0.8125).epsilon(1e-14));
    for (double v : nodes) CHECK(v == doctest::Approx(0.8125).epsilon(1e-14));

    // a zero-mean field has no constant part and low-modes projection keeps it that way
    VelocityField f = random_divfree_field(g, 21, 1, 6, 1.0);
    VelocityField p = interp_apply(InterpolantSpec{InterpolantKind::LowModes, g.L() / (4.0 * kPi)}, f);
    CHECK(std::abs(p.at(0, 0, 0)) == 0.0);
    CHECK(std::abs(p.at(1, 0, 0)) == 0.0);
}

TEST_CASE("low modes: cutoff |k| <= 1/h keeps and zeroes exactly the right modes") {
    GridSpec g(2.0 * kPi, 32);
    InterpolantSpec spec{InterpolantKind::LowModes, g.L() / (4.0 * kPi)};  // cutoff radius 2 in lattice units
    VelocityField f(g);
    auto set_pair = [&](int i, int j1, int j2, Complex z) {
        f.at(i, g.index_of(j1), g.index_of(j2)) = z;
        f.at(i, g.index_of(-j1), g.index_of(-j2)) = std::conj(z);
    };
    set_pair(0, 1, 0, Complex(0.0, 1.0));   // |j|^2 = 1: kept
    set_pair(0, 2, 0, Complex(0.5, 0.0));   // |j|^2 = 4: kept (boundary, inclusive)
    set_pair(1, 2, 1, Complex(0.3, 0.3));   // |j|^2 = 5: zeroed
    set_pair(1, 3, 0, Complex(0.1, -0.2));  // |j|^2 = 9: zeroed
    VelocityField p = interp_apply(spec, f);
    CHECK(p.at(0, g.index_of(1), 0) == Complex(0.0, 1.0));
    CHECK(p.at(0, g.index_of(2), 0) == Complex(0.5, 0.0));
    CHECK(p.at(1, g.index_of(2), g.index_of(1)) == Complex(0.0, 0.0));
    CHECK(p.at(1, g.index_of(3), 0) == Complex(0.0, 0.0));
    CHECK(p.at(0, g.index_of(-1), 0) == Complex(0.0, -1.0));

    // idempotence and the orthogonal-projection identities:
    // -(I_h v, v) = -|P v|^2 and -(I_h v, Av) = -||P v||^2
    VelocityField v = random_divfree_field(g, 5150, 1, 10, 2.0);
    VelocityField pv = interp_apply(spec, v);
    CHECK(testutil::rel_l2_error(interp_apply(spec, pv), pv) == 0.0);
    Norms npv = norms(pv);
    CHECK(inner_l2(pv, v) == doctest::Approx(npv.l2 * npv.l2).epsilon(1e-12));
    CHECK(inner_l2(pv, stokes_apply(v)) == doctest::Approx(npv.h1 * npv.h1).epsilon(1e-12));
}

TEST_CASE("volume elements: closed-form cell means of sin(2*pi*x/L)") {
    double L = 2.0 * kPi;
    GridSpec g(L, 32);
    std::vector<Complex> coeff(g.size(), Complex(0.0, 0.0));
    // sin(2*pi*x/L): modes (1,0) and (-1,0) with coefficients -i/2, +i/2
    coeff[g.flat(g.index_of(1), 0)] = Complex(0.0, -0.5);
    coeff[g.flat(g.index_of(-1), 0)] = Complex(0.0, 0.5);
    int M = 4;
    auto means = interp_detail::cell_means_channel(g, M, coeff);
    for (int jx = 0; jx < M; ++jx) {
        double a = jx * L / M, b = (jx + 1) * L / M;
        double expect = (L / (2.0 * kPi)) * (std::cos(2.0 * kPi * a / L) - std::cos(2.0 * kPi * b / L)) / (b - a);
        for (int jy = 0; jy < M; ++jy)
            CHECK(means[jx * M + jy] == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("nodes: exact Fourier evaluation at cell centers and offsets") {
    double L = 2.0 * kPi;
    GridSpec g(L, 32);
    std::vector<Complex> coeff(g.size(), Complex(0.0, 0.0));
    coeff[g.flat(g.index_of(1), 0)] = Complex(0.0, -0.5);
    coeff[g.flat(g.index_of(-1), 0)] = Complex(0.0, 0.5);
    coeff[g.flat(0, g.index_of(2))] = Complex(0.25, 0.0);
    coeff[g.flat(0, g.index_of(-2))] = Complex(0.25, 0.0);
    int M = 5;
    for (double off : {0.5, 0.25}) {
        auto vals = interp_detail::node_values_channel(g, M, off, off, coeff);
        for (int jx = 0; jx < M; ++jx)
            for (int jy = 0; jy < M; ++jy) {
                double x = (jx + off) * L / M, y = (jy + off) * L / M;
                double expect = std::sin(x) + 0.5 * std::cos(2.0 * y);
                CHECK(vals[jx * M + jy] == doctest::Approx(expect).epsilon(1e-13));
            }
    }
}

TEST_CASE("apply is linear for all three kinds") {
    GridSpec g(2.0 * kPi, 32);
    for (InterpolantKind kind :
         {InterpolantKind::LowModes, InterpolantKind::VolumeElements, InterpolantKind::Nodes}) {
        InterpolantSpec spec{kind, kind == InterpolantKind::LowModes ? g.L() / (2.0 * kPi * 5.0) : g.L() / 7.0};
        VelocityField f = random_symmetric_field(g, 600, 1, 9);
        VelocityField h = random_symmetric_field(g, 601, 1, 9);
        double alpha = 1.7, beta = -0.4;
        VelocityField combo = f;
        combo *= alpha;
        combo.axpy(beta, h);
        VelocityField lhs = interp_apply(spec, combo);
        VelocityField rhs = interp_apply(spec, f);
        rhs *= alpha;
        rhs.axpy(beta, interp_apply(spec, h));
        CHECK(testutil::rel_l2_error(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("volume elements: re-averaging the dealiased output returns the means") {
    GridSpec g(2.0 * kPi, 32);
    InterpolantSpec spec{InterpolantKind::VolumeElements, g.L() / 4.0};
    VelocityField f = random_divfree_field(g, 88, 1, 6, 1.0);
    int M = 4;
    auto means = interp_detail::cell_means_channel(g, M, f.comp(0));
    VelocityField out = interp_apply(spec, f);
    auto remeans = interp_detail::cell_means_channel(g, M, out.comp(0));
    // the dealiased representation drops the piecewise-constant tail; each
    // re-averaged mean deviates by at most ||tail||_L2 / cell side (Cauchy-Schwarz)
    double s = g.L() / M;
    double pc_l2_sq = 0.0;
    for (double m : means) pc_l2_sq += s * s * m * m;
    double kept_sq = 0.0;
    for (const auto& z : out.comp(0)) kept_sq += std::norm(z);
    kept_sq *= g.L() * g.L();
    double tail = std::sqrt(std::max(pc_l2_sq - kept_sq, 0.0));
    for (std::size_t n = 0; n < means.size(); ++n)
        CHECK(std::abs(remeans[n] - means[n]) <= tail / s + 1e-12);
}

TEST_CASE("observation records: counts, round-trip, serialization") {
    GridSpec g(2.0 * kPi, 32);

    // low modes at cutoff radius 2: modes with 0 < |j|^2 <= 4 number 12; the
    // record stores 2 scalars per mode (complex pairs over the half lattice)
    InterpolantSpec lm{InterpolantKind::LowModes, g.L() / (4.0 * kPi)};
    VelocityField f = random_divfree_field(g, 99, 1, 8, 1.0);
    ObservationRecord rec = observe(lm, f);
    CHECK(rec.values.size() == 24);

    InterpolantSpec nd{InterpolantKind::Nodes, g.L() / 8.0};
    ObservationRecord rec_n = observe(nd, f);
    CHECK(rec_n.values.size() == 2 * 64);

    // record -> field equals apply bit-exactly
    VelocityField direct = interp_apply(nd, f);
    VelocityField via = reconstruct(g, rec_n);
    for (int i = 0; i < 2; ++i)
        for (int n = 0; n < g.size(); ++n) CHECK(via.comp(i)[n] == direct.comp(i)[n]);

    // JSON and binary round-trips preserve the values bit-exactly
    ObservationRecord back = ObservationRecord::from_json(rec_n.to_json());
    REQUIRE(back.values.size() == rec_n.values.size());
    for (std::size_t n = 0; n < back.values.size(); ++n) CHECK(back.values[n] == rec_n.values[n]);
    VelocityField via2 = reconstruct(g, back);
    for (int i = 0; i < 2; ++i)
        for (int n = 0; n < g.size(); ++n) CHECK(via2.comp(i)[n] == direct.comp(i)[n]);

    rec_n.save_binary("test_obs.rec");
    ObservationRecord bin = ObservationRecord::load_binary("test_obs.rec");
    CHECK(bin.spec.kind == rec_n.spec.kind);
    CHECK(bin.spec.h == rec_n.spec.h);
    for (std::size_t n = 0; n < bin.values.size(); ++n) CHECK(bin.values[n] == rec_n.values[n]);
    std::remove("test_obs.rec");
}

TEST_CASE("certify: low-modes H1 certificate obeys the Plancherel bound") {
    GridSpec g(2.0 * kPi, 32);
    // cutoff radius 9.95: the nearest mode above (|j| = 10) drives the ratio to (9.95/10)^2
    InterpolantSpec spec{InterpolantKind::LowModes, g.L() / (2.0 * kPi * 9.95)};
    InterpCertificate cert = certify_c0(g, spec, CertOrder::H1, 150, 3);
    CHECK(cert.c0_estimate <= 1.0 + 1e-9);
    CHECK(cert.c0_estimate > 0.9);
    CHECK(cert.sample_count >= 150);

    // single-mode ratio is exactly (|k| h)^-2 above the cutoff
    VelocityField probe(g);
    probe.at(0, 0, g.index_of(10)) = Complex(0.0, 1.0);
    probe.at(0, 0, g.index_of(-10)) = Complex(0.0, -1.0);
    double ratio = interp_detail::certificate_ratio(g, spec, CertOrder::H1, probe);
    CHECK(ratio == doctest::Approx(std::pow(9.95 / 10.0, 2)).epsilon(1e-12));

    // a probe the interpolant reproduces exactly contributes ratio 0 and
    // cannot drive the max; the zero probe also exercises the guarded
    // zero-denominator path
    InterpolantSpec vol{InterpolantKind::VolumeElements, g.L() / 4.0};
    VelocityField zero(g);
    CHECK(interp_detail::certificate_ratio(g, vol, CertOrder::H1, zero) == 0.0);

    CHECK_THROWS_AS(certify_c0(g, spec, CertOrder::H1, 50, 3), std::invalid_argument);
    CHECK_THROWS_AS(certify_c0(g, vol, CertOrder::H2, 150, 3), std::invalid_argument);
}

TEST_CASE("certify: volume and node certificates are finite and doubling-stable") {
    GridSpec g(2.0 * kPi, 48);
    InterpolantSpec vol{InterpolantKind::VolumeElements, g.L() / 8.0};
    InterpCertificate c1 = certify_c0(g, vol, CertOrder::H1, 150, 7);
    InterpCertificate c2 = certify_c0(g, vol, CertOrder::H1, 300, 7);
    CHECK(c1.c0_estimate > 0.0);
    CHECK(std::isfinite(c1.c0_estimate));
    CHECK(std::abs(c2.c0_estimate - c1.c0_estimate) <= 0.1 * std::max(c1.c0_estimate, c2.c0_estimate));

    InterpolantSpec nod{InterpolantKind::Nodes, g.L() / 8.0};
    InterpCertificate n1 = certify_c0(g, nod, CertOrder::H2, 150, 7);
    InterpCertificate n2 = certify_c0(g, nod, CertOrder::H2, 300, 7);
    CHECK(n1.c0_estimate > 0.0);
    CHECK(std::isfinite(n1.c0_estimate));
    CHECK(std::abs(n2.c0_estimate - n1.c0_estimate) <= 0.1 * std::max(n1.c0_estimate, n2.c0_estimate));
    CHECK(n1.effective_c0() == doctest::Approx(std::sqrt(n1.c0_estimate)));

    // fresh validation set stays within 5% of the certified constant
    for (const auto& cert : {c1, n1}) {
        double worst = validate_certificate(g, cert, 120, 1234);
        CHECK(worst <= 1.05 * cert.c0_estimate);
    }
    InterpolantSpec lm{InterpolantKind::LowModes, g.L() / (2.0 * kPi * 9.95)};
    InterpCertificate lc = certify_c0(g, lm, CertOrder::H1, 150, 7);
    CHECK(validate_certificate(g, lc, 120, 99) <= 1.05 * lc.c0_estimate);

    // certificate JSON round-trip
    InterpCertificate parsed = InterpCertificate::from_json(n1.to_json());
    CHECK(parsed.c0_estimate == n1.c0_estimate);
    CHECK(parsed.spec.kind == InterpolantKind::Nodes);
    CHECK(parsed.order == CertOrder::H2);
}
