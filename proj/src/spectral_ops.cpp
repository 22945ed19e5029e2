#include "nsnudge/spectral_ops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "nsnudge/fft.hpp"
#include "nsnudge/rng.hpp"

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

namespace nsnudge {

namespace {

// backward transform of a copy of the coefficients, returning samples
std::vector<Complex> synth(const GridSpec& g, const std::vector<Complex>& coeff) {
    std::vector<Complex> buf(coeff);
    fft::backward(g.N(), buf.data());
    return buf;
}

std::vector<Complex> analyze(const GridSpec& g, const std::vector<Complex>& samples) {
    std::vector<Complex> buf(samples);
    fft::forward(g.N(), buf.data());
    double scale = 1.0 / (static_cast<double>(g.N()) * g.N());
    for (auto& z : buf) z *= scale;
    return buf;
}

void zero_mean_scalar(const GridSpec& g, std::vector<Complex>& c) { c[g.flat(0, 0)] = Complex(0.0, 0.0); }

}  // namespace

RealVectorField to_real(const VelocityField& f) {
    const GridSpec& g = f.grid();
    RealVectorField out(g);
    auto b1 = synth(g, f.comp(0));
    auto b2 = synth(g, f.comp(1));
    for (int n = 0; n < g.size(); ++n) {
        out.u1[n] = b1[n].real();
        out.u2[n] = b2[n].real();
    }
    return out;
}

VelocityField to_spectral(const RealVectorField& samples) {
    const GridSpec& g = samples.grid;
    if (static_cast<int>(samples.u1.size()) != g.size() || static_cast<int>(samples.u2.size()) != g.size())
        throw std::invalid_argument("to_spectral: resolution mismatch between samples and grid");
    VelocityField out(g);
    std::vector<Complex> buf(g.size());
    for (int i = 0; i < 2; ++i) {
        const auto& src = i == 0 ? samples.u1 : samples.u2;
        for (int n = 0; n < g.size(); ++n) buf[n] = Complex(src[n], 0.0);
        out.comp(i) = analyze(g, buf);
    }
    return out;
}

std::vector<double> to_real(const ScalarField& f) {
    auto buf = synth(f.grid(), f.data());
    std::vector<double> out(buf.size());
    for (std::size_t n = 0; n < buf.size(); ++n) out[n] = buf[n].real();
    return out;
}

ScalarField to_spectral_scalar(const GridSpec& grid, const std::vector<double>& samples) {
    if (static_cast<int>(samples.size()) != grid.size())
        throw std::invalid_argument("to_spectral_scalar: resolution mismatch between samples and grid");
    std::vector<Complex> buf(grid.size());
    for (int n = 0; n < grid.size(); ++n) buf[n] = Complex(samples[n], 0.0);
    ScalarField out(grid);
    out.data() = analyze(grid, buf);
    return out;
}

VelocityField leray_project(const VelocityField& f) {
    const GridSpec& g = f.grid();
    VelocityField out(g);
    const int N = g.N();
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
            int n = g.flat(a, b);
            if (a == 0 && b == 0) continue;
            double ka = g.k1(a), kb = g.k2(b);
            double k2 = ka * ka + kb * kb;
            Complex kdotu = ka * f.comp(0)[n] + kb * f.comp(1)[n];
            out.comp(0)[n] = f.comp(0)[n] - ka * kdotu / k2;
            out.comp(1)[n] = f.comp(1)[n] - kb * kdotu / k2;
        }
    }
    return out;
}

VelocityField stokes_apply(const VelocityField& f) {
    const GridSpec& g = f.grid();
    VelocityField out(g);
    const int N = g.N();
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            int n = g.flat(a, b);
            double k2 = g.ksq(a, b);
            out.comp(0)[n] = k2 * f.comp(0)[n];
            out.comp(1)[n] = k2 * f.comp(1)[n];
        }
    return out;
}

VelocityField bilinear(const VelocityField& u, const VelocityField& v) {
    u.require_same_grid(v);
    const GridSpec& g = u.grid();
    const int N = g.N();

    // dealiased copies of the advecting velocity, in real space
    VelocityField um(u);
    apply_dealias(um);
    auto u1r = synth(g, um.comp(0));
    auto u2r = synth(g, um.comp(1));

    VelocityField out(g);
    std::vector<Complex> dx(g.size()), dy(g.size());
    for (int i = 0; i < 2; ++i) {
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                int n = g.flat(a, b);
                bool keep = g.dealias_keep(a, b);
                Complex vc = keep ? v.comp(i)[n] : Complex(0.0, 0.0);
                dx[n] = Complex(0.0, g.k1(a)) * vc;
                dy[n] = Complex(0.0, g.k2(b)) * vc;
            }
        fft::backward(N, dx.data());
        fft::backward(N, dy.data());
        for (int n = 0; n < g.size(); ++n) {
            double adv = u1r[n].real() * dx[n].real() + u2r[n].real() * dy[n].real();
            dx[n] = Complex(adv, 0.0);
        }
        out.comp(i) = analyze(g, dx);
    }
    apply_dealias(out);
    zero_mean(out);
    return leray_project(out);
}

Norms norms(const VelocityField& f) {
    const GridSpec& g = f.grid();
    const int N = g.N();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            int n = g.flat(a, b);
            double k2 = g.ksq(a, b);
            double e = std::norm(f.comp(0)[n]) + std::norm(f.comp(1)[n]);
            s0 += e;
            s1 += k2 * e;
            s2 += k2 * k2 * e;
        }
    double area = g.L() * g.L();
    return Norms{std::sqrt(area * s0), std::sqrt(area * s1), std::sqrt(area * s2)};
}

double norm_l2(const VelocityField& f) {
    double s0 = 0.0;
    for (int i = 0; i < 2; ++i)
        for (const auto& z : f.comp(i)) s0 += std::norm(z);
    return std::sqrt(f.grid().L() * f.grid().L() * s0);
}

double inner_l2(const VelocityField& u, const VelocityField& v) {
    u.require_same_grid(v);
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
        const auto& a = u.comp(i);
        const auto& b = v.comp(i);
        for (std::size_t n = 0; n < a.size(); ++n)
            s += a[n].real() * b[n].real() + a[n].imag() * b[n].imag();
    }
    return u.grid().L() * u.grid().L() * s;
}

void zero_mean(VelocityField& f) {
    zero_mean_scalar(f.grid(), f.comp(0));
    zero_mean_scalar(f.grid(), f.comp(1));
}

void apply_dealias(VelocityField& f) {
    const GridSpec& g = f.grid();
    const int N = g.N();
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            if (!g.dealias_keep(a, b)) {
                int n = g.flat(a, b);
                f.comp(0)[n] = Complex(0.0, 0.0);
                f.comp(1)[n] = Complex(0.0, 0.0);
            }
}

void apply_dealias(ScalarField& f) {
    const GridSpec& g = f.grid();
    const int N = g.N();
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            if (!g.dealias_keep(a, b)) f.data()[g.flat(a, b)] = Complex(0.0, 0.0);
}

double max_divergence(const VelocityField& f) {
    const GridSpec& g = f.grid();
    const int N = g.N();
    double worst = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            int n = g.flat(a, b);
            worst = std::max(worst, std::abs(g.k1(a) * f.comp(0)[n] + g.k2(b) * f.comp(1)[n]));
        }
    return worst;
}

double conjugate_symmetry_defect(const VelocityField& f) {
    const GridSpec& g = f.grid();
    const int N = g.N();
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                int am = (N - a) % N, bm = (N - b) % N;
                worst = std::max(worst,
                                 std::abs(f.comp(i)[g.flat(a, b)] - std::conj(f.comp(i)[g.flat(am, bm)])));
            }
    return worst;
}

VelocityField random_divfree_field(const GridSpec& grid, std::uint64_t seed, int jmin, int jmax,
                                   double amplitude, double decay) {
    SplitMix64 rng(seed);
    const int N = grid.N();
    jmax = std::min(jmax, grid.dealias_kmax());
    VelocityField out(grid);
    // random streamfunction psi, u = (d_y psi, -d_x psi) = (i k2, -i k1) psihat
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
            int j1 = grid.freq(a), j2 = grid.freq(b);
            // one draw per conjugate pair: representative has j1 > 0, or j1 == 0 and j2 > 0
            if (!(j1 > 0 || (j1 == 0 && j2 > 0))) continue;
            double jm = std::sqrt(static_cast<double>(j1) * j1 + static_cast<double>(j2) * j2);
            if (jm < jmin || jm > jmax) continue;
            double mag = std::pow(jm, -decay);
            Complex psi = mag * Complex(rng.normal(), rng.normal());
            double ka = grid.k1(a), kb = grid.k2(b);
            Complex uh = Complex(0.0, kb) * psi;
            Complex vh = Complex(0.0, -ka) * psi;
            out.at(0, a, b) = uh;
            out.at(1, a, b) = vh;
            int am = grid.index_of(-j1), bm = grid.index_of(-j2);
            out.at(0, am, bm) = std::conj(uh);
            out.at(1, am, bm) = std::conj(vh);
        }
    }
    apply_dealias(out);
    zero_mean(out);
    double n0 = norm_l2(out);
    if (n0 > 0.0 && amplitude > 0.0) out *= amplitude / n0;
    return out;
}

VelocityField taylor_green(const GridSpec& grid, double amplitude) {
    VelocityField out(grid);
    const double q = 0.25;
    int p = grid.index_of(1), m = grid.index_of(-1);
    // u1 = sin(kx)cos(ky), u2 = -cos(kx)sin(ky) with k = 2*pi/L
    out.at(0, p, p) = Complex(0.0, -q);
    out.at(0, p, m) = Complex(0.0, -q);
    out.at(0, m, p) = Complex(0.0, q);
    out.at(0, m, m) = Complex(0.0, q);
    out.at(1, p, p) = Complex(0.0, q);
    out.at(1, m, p) = Complex(0.0, q);
    out.at(1, p, m) = Complex(0.0, -q);
    out.at(1, m, m) = Complex(0.0, -q);
    double n0 = norm_l2(out);
    out *= amplitude / n0;
    return out;
}

namespace {
constexpr char kSnapshotMagic[8] = {'N', 'S', 'F', 'L', 'D', 'S', 'N', 'P'};
constexpr std::uint32_t kSnapshotVersion = 1;
}  // namespace

void save_snapshot(const std::string& path, const VelocityField& f, const std::string& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_snapshot: cannot open " + path);
    const GridSpec& g = f.grid();
    std::uint32_t n = static_cast<std::uint32_t>(g.N());
    std::uint32_t ncomp = 2;
    std::uint32_t mlen = static_cast<std::uint32_t>(metadata.size());
    double L = g.L();
    out.write(kSnapshotMagic, 8);
    out.write(reinterpret_cast<const char*>(&kSnapshotVersion), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&ncomp), 4);
    out.write(reinterpret_cast<const char*>(&mlen), 4);
    out.write(reinterpret_cast<const char*>(&L), 8);
    out.write(metadata.data(), mlen);
    for (int i = 0; i < 2; ++i)
        out.write(reinterpret_cast<const char*>(f.comp(i).data()),
                  static_cast<std::streamsize>(sizeof(Complex) * f.comp(i).size()));
    if (!out) throw std::runtime_error("save_snapshot: write failed for " + path);
}

VelocityField load_snapshot(const std::string& path, std::string* metadata) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_snapshot: cannot open " + path);
    char magic[8];
    std::uint32_t version = 0, n = 0, ncomp = 0, mlen = 0;
    double L = 0.0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&ncomp), 4);
    in.read(reinterpret_cast<char*>(&mlen), 4);
    in.read(reinterpret_cast<char*>(&L), 8);
    if (!in || std::memcmp(magic, kSnapshotMagic, 8) != 0)
        throw std::runtime_error("load_snapshot: bad magic in " + path);
    if (version != kSnapshotVersion) throw std::runtime_error("load_snapshot: unsupported version");
    if (ncomp != 2) throw std::runtime_error("load_snapshot: expected 2 components");
    std::string meta(mlen, '\0');
    in.read(meta.data(), mlen);
    GridSpec g(L, static_cast<int>(n));
    VelocityField f(g);
    for (int i = 0; i < 2; ++i)
        in.read(reinterpret_cast<char*>(f.comp(i).data()),
                static_cast<std::streamsize>(sizeof(Complex) * f.comp(i).size()));
    if (!in) throw std::runtime_error("load_snapshot: truncated file " + path);
    if (metadata) *metadata = std::move(meta);
    return f;
}

}  // namespace nsnudge
