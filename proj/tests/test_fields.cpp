#include <doctest.h>

#include <cmath>

#include "nsnudge/spectral_ops.hpp"
#include "test_util.hpp"

using namespace nsnudge;
using testutil::random_symmetric_field;

namespace {
const double kPi = GridSpec::pi();
}

TEST_CASE("grid basics") {
    GridSpec g(2.0 * kPi, 32);
    CHECK(g.lambda1() == doctest::Approx(1.0).epsilon(1e-15));
    GridSpec g2(1.0, 16);
    CHECK(g2.lambda1() == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-15));
    CHECK(g.dealias_kmax() == 10);
    // mask keeps exactly |j1|,|j2| <= N/3 and is closed under negation
    auto mask = g.dealias_mask();
    for (int a = 0; a < 32; ++a)
        for (int b = 0; b < 32; ++b) {
            bool expect = std::abs(g.freq(a)) <= 10 && std::abs(g.freq(b)) <= 10;
            CHECK(mask[g.flat(a, b)] == expect);
            int am = g.index_of(-g.freq(a)) % 32, bm = g.index_of(-g.freq(b)) % 32;
            CHECK(mask[g.flat(a, b)] == mask[g.flat(am, bm)]);
        }
    CHECK_THROWS_AS(GridSpec(2.0, 17), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(-1.0, 16), std::invalid_argument);
}

TEST_CASE("transform: zero field round-trips to zero") {
    GridSpec g(2.0 * kPi, 16);
    VelocityField f(g);
    RealVectorField r = to_real(f);
    for (double v : r.u1) CHECK(v == 0.0);
    VelocityField back = to_spectral(r);
    CHECK(norm_l2(back) == 0.0);
}

TEST_CASE("transform: single mode is the Fourier series definition") {
    double L = 3.0;
    GridSpec g(L, 16);
    VelocityField f(g);
    // uhat(k) = (0, a) at k = (2*pi/L, 0), plus the conjugate partner
    Complex a(0.35, -0.2);
    f.at(1, g.index_of(1), 0) = a;
    f.at(1, g.index_of(-1), 0) = std::conj(a);
    RealVectorField r = to_real(f);
    for (int m = 0; m < 16; ++m)
        for (int n = 0; n < 16; ++n) {
            double x = m * L / 16.0;
            double expect = 2.0 * (a.real() * std::cos(2.0 * kPi * x / L) - a.imag() * std::sin(2.0 * kPi * x / L));
            CHECK(r.u1[g.flat(m, n)] == doctest::Approx(0.0).epsilon(1e-14));
            CHECK(r.u2[g.flat(m, n)] == doctest::Approx(expect).epsilon(1e-13));
        }
    VelocityField back = to_spectral(r);
    CHECK(testutil::rel_l2_error(back, f) < 1e-13);
}

TEST_CASE("transform: random conjugate-symmetric field round-trips below 1e-12") {
    for (int n : {16, 32}) {
        GridSpec g(2.0 * kPi, n);
        VelocityField f = random_symmetric_field(g, 9000 + n);
        VelocityField back = to_spectral(to_real(f));
        CHECK(testutil::rel_l2_error(back, f) < 1e-12);
    }
}

TEST_CASE("transform: resolution mismatch rejected") {
    GridSpec g(2.0 * kPi, 16);
    RealVectorField r(g);
    r.u1.resize(10);
    CHECK_THROWS_AS(to_spectral(r), std::invalid_argument);
}

TEST_CASE("leray: divergence-free fields are fixed points") {
    GridSpec g(2.0 * kPi, 16);
    VelocityField f = random_divfree_field(g, 42, 1, 5, 2.0);
    VelocityField p = leray_project(f);
    CHECK(testutil::rel_l2_error(p, f) < 1e-14);
}

TEST_CASE("leray: pure gradients project to zero") {
    GridSpec g(2.0 * kPi, 16);
    SplitMix64 rng(7);
    VelocityField f(g);
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b) {
            int j1 = g.freq(a), j2 = g.freq(b);
            if (!(j1 > 0 || (j1 == 0 && j2 > 0)) || std::abs(j1) > 5 || std::abs(j2) > 5) continue;
            Complex s(rng.normal(), rng.normal());
            f.at(0, a, b) = g.k1(a) * s;
            f.at(1, a, b) = g.k2(b) * s;
            f.at(0, g.index_of(-j1), g.index_of(-j2)) = std::conj(g.k1(a) * s);
            f.at(1, g.index_of(-j1), g.index_of(-j2)) = std::conj(g.k2(b) * s);
        }
    double n0 = norm_l2(f);
    CHECK(n0 > 0.0);
    CHECK(norm_l2(leray_project(f)) < 1e-14 * n0);
}

TEST_CASE("leray: variational oracle on the small lattice") {
    // P f is the L2-closest divergence-free field: the residual f - Pf is
    // curl-free and orthogonal to every divergence-free direction
    GridSpec g(2.0 * kPi, 8);
    VelocityField f = random_symmetric_field(g, 1234);
    VelocityField p = leray_project(f);
    double scale = norm_l2(f);

    CHECK(max_divergence(p) < 1e-13 * scale);

    VelocityField resid = f;
    resid -= p;
    // curl of the residual vanishes mode by mode
    double max_curl = 0.0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            Complex curl = Complex(0.0, g.k1(a)) * resid.at(1, a, b) - Complex(0.0, g.k2(b)) * resid.at(0, a, b);
            max_curl = std::max(max_curl, std::abs(curl));
        }
    CHECK(max_curl < 1e-13 * scale);

    // orthogonality and optimality against random divergence-free competitors
    double p_dist = norm_l2(resid);
    for (int trial = 0; trial < 20; ++trial) {
        VelocityField q = random_divfree_field(g, 500 + trial, 1, 2, 1.0 + 0.3 * trial);
        CHECK(std::abs(inner_l2(resid, q)) < 1e-12 * scale * norm_l2(q));
        VelocityField diff = f;
        diff -= q;
        CHECK(norm_l2(diff) >= p_dist * (1.0 - 1e-12));
    }
}

TEST_CASE("leray: idempotent and self-adjoint") {
    GridSpec g(2.0 * kPi, 16);
    for (int trial = 0; trial < 20; ++trial) {
        VelocityField f = random_symmetric_field(g, 100 + trial);
        VelocityField p = leray_project(f);
        VelocityField pp = leray_project(p);
        CHECK(testutil::rel_l2_error(pp, p) < 1e-14);
        VelocityField h = random_symmetric_field(g, 900 + trial);
        double lhs = inner_l2(p, h);
        double rhs = inner_l2(f, leray_project(h));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("stokes: eigen-relation and lowest-mode eigenfunction") {
    double L = 2.0;
    GridSpec g(L, 16);
    VelocityField f(g);
    // lowest mode |k|^2 = lambda1, divergence-free orientation
    f.at(0, 0, g.index_of(1)) = Complex(0.4, 0.1);
    f.at(0, 0, g.index_of(-1)) = Complex(0.4, -0.1);
    VelocityField af = stokes_apply(f);
    VelocityField expected = f;
    expected *= g.lambda1();
    CHECK(testutil::rel_l2_error(af, expected) == 0.0);

    VelocityField z(g);
    CHECK(norm_l2(stokes_apply(z)) == 0.0);
}

TEST_CASE("stokes: Poincare inequality lambda1*||f||^2 <= |Af|^2") {
    GridSpec g(2.0 * kPi, 16);
    for (int trial = 0; trial < 20; ++trial) {
        VelocityField f = random_divfree_field(g, 3000 + trial, 1, 5, 1.0);
        Norms n = norms(f);
        CHECK(g.lambda1() * n.h1 * n.h1 <= n.h2 * n.h2 * (1.0 + 1e-12));
        CHECK(g.lambda1() * n.l2 * n.l2 <= n.h1 * n.h1 * (1.0 + 1e-12));
    }
}

TEST_CASE("bilinear: Taylor-Green advection is a pure gradient") {
    GridSpec g(2.0 * kPi, 32);
    VelocityField u = taylor_green(g, g.L() / std::sqrt(2.0));  // unit coefficients

    // closed-form oracle: u.grad u = (sin x cos x, sin y cos y) = grad phi
    // with phi = -(cos 2x + cos 2y)/4
    RealVectorField adv(g);
    for (int m = 0; m < 32; ++m)
        for (int n = 0; n < 32; ++n) {
            double x = m * g.L() / 32.0, y = n * g.L() / 32.0;
            adv.u1[g.flat(m, n)] = std::sin(x) * std::cos(x);
            adv.u2[g.flat(m, n)] = std::sin(y) * std::cos(y);
        }
    VelocityField adv_hat = to_spectral(adv);
    double adv_scale = norm_l2(adv_hat);
    CHECK(norm_l2(leray_project(adv_hat)) < 1e-13 * adv_scale);

    VelocityField b = bilinear(u, u);
    CHECK(norm_l2(b) < 1e-12 * adv_scale);
}

TEST_CASE("bilinear: vanishes on zero arguments, rejects mismatched grids") {
    GridSpec g(2.0 * kPi, 16);
    VelocityField z(g);
    VelocityField v = random_divfree_field(g, 5, 1, 4, 1.0);
    CHECK(norm_l2(bilinear(z, v)) == 0.0);
    CHECK(norm_l2(bilinear(v, z)) == 0.0);
    GridSpec g2(2.0 * kPi, 32);
    VelocityField w(g2);
    CHECK_THROWS_AS(bilinear(v, w), std::invalid_argument);
}

TEST_CASE("bilinear: output is divergence-free and zero-mean") {
    GridSpec g(2.0 * kPi, 16);
    for (int trial = 0; trial < 10; ++trial) {
        VelocityField u = random_divfree_field(g, 40 + trial, 1, 5, 1.5);
        VelocityField v = random_divfree_field(g, 80 + trial, 1, 5, 0.7);
        VelocityField b = bilinear(u, v);
        double scale = std::max(norm_l2(b), 1e-30);
        CHECK(max_divergence(b) < 1e-12 * scale);
        CHECK(std::abs(b.at(0, 0, 0)) == 0.0);
        CHECK(conjugate_symmetry_defect(b) < 1e-12 * scale);
    }
}

TEST_CASE("bilinear: skew symmetry and orthogonality identities at N=16") {
    GridSpec g(2.0 * kPi, 16);
    for (int trial = 0; trial < 25; ++trial) {
        VelocityField u = random_divfree_field(g, 7000 + trial, 1, 5, 1.0);
        VelocityField v = random_divfree_field(g, 7100 + trial, 1, 5, 1.0);
        VelocityField w = random_divfree_field(g, 7200 + trial, 1, 5, 1.0);
        Norms nu_ = norms(u), nv = norms(v), nw = norms(w);

        // <B(u,v),w> = -<B(u,w),v>
        double lhs = inner_l2(bilinear(u, v), w);
        double rhs = -inner_l2(bilinear(u, w), v);
        double scale_balg = nu_.l2 * nv.h1 * nw.h1 + 1e-30;
        CHECK(std::abs(lhs - rhs) < 1e-10 * scale_balg);

        // <B(u,w),w> = 0, tolerance relative to |u| ||w||^2
        double orth = inner_l2(bilinear(u, w), w);
        CHECK(std::abs(orth) < 1e-10 * (nu_.l2 * nw.h1 * nw.h1 + 1e-30));

        // (B(w,w),Aw) = 0
        double balgp = inner_l2(bilinear(w, w), stokes_apply(w));
        CHECK(std::abs(balgp) < 1e-10 * (nw.l2 * nw.h1 * nw.h2 + 1e-30));

        // (B(u,w),Aw) + (B(w,u),Aw) = -(B(w,w),Au)
        VelocityField aw = stokes_apply(w);
        double left = inner_l2(bilinear(u, w), aw) + inner_l2(bilinear(w, u), aw);
        double right = -inner_l2(bilinear(w, w), stokes_apply(u));
        double scale_bp = nu_.h1 * nw.h1 * (nw.h2 + nu_.h2) + 1e-30;
        CHECK(std::abs(left - right) < 1e-10 * scale_bp);
    }
}

TEST_CASE("norms: lowest mode attains Poincare equality") {
    double L = 5.0;
    GridSpec g(L, 16);
    VelocityField f(g);
    Complex a(0.3, 0.7);
    f.at(0, 0, g.index_of(1)) = a;
    f.at(0, 0, g.index_of(-1)) = std::conj(a);
    Norms n = norms(f);
    CHECK(n.h1 * n.h1 == doctest::Approx(g.lambda1() * n.l2 * n.l2).epsilon(1e-14));
    // |f|^2 = L^2 * 2|a|^2
    CHECK(n.l2 * n.l2 == doctest::Approx(L * L * 2.0 * std::norm(a)).epsilon(1e-14));

    VelocityField z(g);
    Norms zn = norms(z);
    CHECK(zn.l2 == 0.0);
    CHECK(zn.h1 == 0.0);
    CHECK(zn.h2 == 0.0);
}

TEST_CASE("norms: real-space quadrature oracle at N=32") {
    GridSpec g(2.0 * kPi, 32);
    VelocityField f = random_symmetric_field(g, 77);
    RealVectorField r = to_real(f);
    // the rectangle rule is exact for band-limited periodic integrands
    double cell = (g.L() / g.N()) * (g.L() / g.N());
    double quad = 0.0;
    for (int n = 0; n < g.size(); ++n) quad += cell * (r.u1[n] * r.u1[n] + r.u2[n] * r.u2[n]);
    Norms nn = norms(f);
    CHECK(quad == doctest::Approx(nn.l2 * nn.l2).epsilon(1e-10));
}

TEST_CASE("snapshot: round-trip with metadata") {
    GridSpec g(2.0 * kPi, 16);
    VelocityField f = random_divfree_field(g, 11, 1, 4, 3.0);
    std::string path = "test_snapshot.fld";
    save_snapshot(path, f, "{\"scheme\":\"cnab2\",\"dt\":0.001}");
    std::string meta;
    VelocityField back = load_snapshot(path, &meta);
    CHECK(meta == "{\"scheme\":\"cnab2\",\"dt\":0.001}");
    CHECK(back.grid().N() == 16);
    CHECK(back.grid().L() == g.L());
    for (int i = 0; i < 2; ++i)
        for (int n = 0; n < g.size(); ++n) CHECK(back.comp(i)[n] == f.comp(i)[n]);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_snapshot("does_not_exist.fld"), std::runtime_error);
}

TEST_CASE("random fields: divergence-free, zero-mean, conjugate-symmetric, normalized") {
    GridSpec g(2.0 * kPi, 32);
    VelocityField f = random_divfree_field(g, 321, 2, 6, 2.5, 1.0);
    CHECK(norm_l2(f) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(max_divergence(f) < 1e-12 * norm_l2(f));
    CHECK(std::abs(f.at(0, 0, 0)) == 0.0);
    CHECK(conjugate_symmetry_defect(f) == 0.0);
    // determinism
    VelocityField f2 = random_divfree_field(g, 321, 2, 6, 2.5, 1.0);
    CHECK(testutil::rel_l2_error(f, f2) == 0.0);
}
