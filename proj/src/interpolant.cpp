#include "nsnudge/interpolant.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nsnudge/rng.hpp"
#include "nsnudge/spectral_ops.hpp"

namespace nsnudge {

using json = nlohmann::ordered_json;

std::string to_string(InterpolantKind k) {
    switch (k) {
        case InterpolantKind::LowModes: return "low_modes";
        case InterpolantKind::VolumeElements: return "volume_elements";
        case InterpolantKind::Nodes: return "nodes";
    }
    return "?";
}

InterpolantKind interpolant_kind_from_string(const std::string& s) {
    if (s == "low_modes" || s == "modes") return InterpolantKind::LowModes;
    if (s == "volume_elements" || s == "volumes") return InterpolantKind::VolumeElements;
    if (s == "nodes") return InterpolantKind::Nodes;
    throw std::invalid_argument("unknown interpolant kind: " + s);
}

std::string to_string(CertOrder o) { return o == CertOrder::H1 ? "h1" : "h2"; }

int InterpolantSpec::cells_per_side(double box_side) const {
    // epsilon guard: h = L/M computed in floating point must give M cells
    return static_cast<int>(std::ceil(box_side / h - 1e-9));
}

void InterpolantSpec::validate(const GridSpec& grid) const {
    if (!(h > 0.0)) throw std::invalid_argument("interpolant: h must be > 0");
    if (h > grid.L()) throw std::invalid_argument("interpolant: h > L (no observation cell fits the box)");
    if (kind != InterpolantKind::LowModes) {
        int m = cells_per_side(grid.L());
        if (m > grid.dealias_kmax())
            throw std::invalid_argument("interpolant: grid too coarse to resolve cells (need ceil(L/h) <= N/3, got " +
                                        std::to_string(m) + " cells at N = " + std::to_string(grid.N()) + ")");
    }
    if (kind == InterpolantKind::Nodes) {
        if (node_offset_x < 0.0 || node_offset_x >= 1.0 || node_offset_y < 0.0 || node_offset_y >= 1.0)
            throw std::invalid_argument("interpolant: node offsets must lie in [0,1)");
    }
}

std::string InterpolantSpec::cache_key(const GridSpec& grid) const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind) << "|h=" << h << "|N=" << grid.N() << "|L=" << grid.L();
    if (kind == InterpolantKind::Nodes) os << "|off=" << node_offset_x << "," << node_offset_y;
    return os.str();
}

namespace {

// keep mode (j1,j2) under the |k| <= 1/h cutoff (integer radius against the
// real cutoff, tolerant at exact equality)
bool lowmode_keep(const GridSpec& g, const InterpolantSpec& spec, int a, int b) {
    int j1 = g.freq(a), j2 = g.freq(b);
    double msq = static_cast<double>(j1) * j1 + static_cast<double>(j2) * j2;
    double cut = spec.cutoff() / g.dk();
    return msq <= cut * cut * (1.0 + 1e-12);
}

// mean of e^{i k x} over cell j of M equal cells on [0,L]
Complex mean_weight(double k, double L, int M, int j) {
    double s = L / M;
    if (k == 0.0) return Complex(1.0, 0.0);
    double a = j * s, b = a + s;
    Complex num = std::exp(Complex(0.0, k * b)) - std::exp(Complex(0.0, k * a));
    return num / Complex(0.0, k * s);
}

struct SeparableWeights {
    // w[j*N + a]: weight of storage index a for cell/node j
    std::vector<Complex> w1, w2;
    int M, N;
};

SeparableWeights build_mean_weights(const GridSpec& g, int M) {
    SeparableWeights sw;
    sw.M = M;
    sw.N = g.N();
    sw.w1.resize(static_cast<std::size_t>(M) * g.N());
    sw.w2.resize(static_cast<std::size_t>(M) * g.N());
    for (int j = 0; j < M; ++j)
        for (int a = 0; a < g.N(); ++a) {
            sw.w1[static_cast<std::size_t>(j) * g.N() + a] = mean_weight(g.k1(a), g.L(), M, j);
            sw.w2[static_cast<std::size_t>(j) * g.N() + a] = mean_weight(g.k2(a), g.L(), M, j);
        }
    return sw;
}

SeparableWeights build_node_weights(const GridSpec& g, int M, double offx, double offy) {
    SeparableWeights sw;
    sw.M = M;
    sw.N = g.N();
    sw.w1.resize(static_cast<std::size_t>(M) * g.N());
    sw.w2.resize(static_cast<std::size_t>(M) * g.N());
    double s = g.L() / M;
    for (int j = 0; j < M; ++j) {
        double x = (j + offx) * s, y = (j + offy) * s;
        for (int a = 0; a < g.N(); ++a) {
            sw.w1[static_cast<std::size_t>(j) * g.N() + a] = std::exp(Complex(0.0, g.k1(a) * x));
            sw.w2[static_cast<std::size_t>(j) * g.N() + a] = std::exp(Complex(0.0, g.k2(a) * y));
        }
    }
    return sw;
}

// weight tables are rebuilt every observation inside the coupled run loop
// without this cache; keyed like the FFT plans, guarded for sweep workers
std::mutex weights_mutex;
std::map<std::string, std::shared_ptr<const SeparableWeights>> weights_cache;

std::shared_ptr<const SeparableWeights> mean_weights(const GridSpec& g, int M) {
    std::ostringstream key;
    key.precision(17);
    key << "mean|" << g.N() << "|" << g.L() << "|" << M;
    std::lock_guard<std::mutex> lock(weights_mutex);
    auto& slot = weights_cache[key.str()];
    if (!slot) slot = std::make_shared<SeparableWeights>(build_mean_weights(g, M));
    return slot;
}

std::shared_ptr<const SeparableWeights> node_weights(const GridSpec& g, int M, double offx, double offy) {
    std::ostringstream key;
    key.precision(17);
    key << "node|" << g.N() << "|" << g.L() << "|" << M << "|" << offx << "|" << offy;
    std::lock_guard<std::mutex> lock(weights_mutex);
    auto& slot = weights_cache[key.str()];
    if (!slot) slot = std::make_shared<SeparableWeights>(build_node_weights(g, M, offx, offy));
    return slot;
}

// vals[jx*M + jy] = Re( sum_{a,b} w1[jx,a] coeff[a,b] w2[jy,b] )
std::vector<double> apply_weights(const GridSpec& g, const SeparableWeights& sw,
                                  const std::vector<Complex>& coeff) {
    const int N = g.N(), M = sw.M;
    // t[a*M + jy] = sum_b coeff[a,b] w2[jy,b]
    std::vector<Complex> t(static_cast<std::size_t>(N) * M, Complex(0.0, 0.0));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            Complex c = coeff[g.flat(a, b)];
            if (c == Complex(0.0, 0.0)) continue;
            for (int jy = 0; jy < M; ++jy) t[static_cast<std::size_t>(a) * M + jy] += c * sw.w2[static_cast<std::size_t>(jy) * N + b];
        }
    std::vector<double> vals(static_cast<std::size_t>(M) * M, 0.0);
    for (int jx = 0; jx < M; ++jx)
        for (int a = 0; a < N; ++a) {
            Complex w = sw.w1[static_cast<std::size_t>(jx) * N + a];
            if (w == Complex(0.0, 0.0)) continue;
            for (int jy = 0; jy < M; ++jy)
                vals[static_cast<std::size_t>(jx) * M + jy] += (w * t[static_cast<std::size_t>(a) * M + jy]).real();
        }
    return vals;
}

// exact continuum Fourier coefficients (dealiased band) of the
// piecewise-constant field with the given cell values
void pc_to_spectral(const GridSpec& g, int M, const std::vector<double>& vals, std::vector<Complex>& out) {
    const int N = g.N();
    const SeparableWeights& mw = *mean_weights(g, M);
    double s = g.L() / M;
    double cellfrac = (s / g.L()) * (s / g.L());
    // u[jx*N + b] = sum_jy vals[jx,jy] conj(w2[jy,b])
    std::vector<Complex> u(static_cast<std::size_t>(M) * N, Complex(0.0, 0.0));
    for (int jx = 0; jx < M; ++jx)
        for (int jy = 0; jy < M; ++jy) {
            double v = vals[static_cast<std::size_t>(jx) * M + jy];
            if (v == 0.0) continue;
            for (int b = 0; b < N; ++b)
                u[static_cast<std::size_t>(jx) * N + b] += v * std::conj(mw.w2[static_cast<std::size_t>(jy) * N + b]);
        }
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
            if (!g.dealias_keep(a, b)) continue;
            Complex acc(0.0, 0.0);
            for (int jx = 0; jx < M; ++jx)
                acc += std::conj(mw.w1[static_cast<std::size_t>(jx) * N + a]) * u[static_cast<std::size_t>(jx) * N + b];
            out[g.flat(a, b)] = cellfrac * acc;
        }
    }
}

bool half_lattice_rep(const GridSpec& g, int a, int b) {
    int j1 = g.freq(a), j2 = g.freq(b);
    return j1 > 0 || (j1 == 0 && j2 > 0);
}

std::vector<double> cell_values(const GridSpec& g, const InterpolantSpec& spec,
                                const std::vector<Complex>& coeff) {
    int M = spec.cells_per_side(g.L());
    if (spec.kind == InterpolantKind::VolumeElements)
        return apply_weights(g, *mean_weights(g, M), coeff);
    return apply_weights(g, *node_weights(g, M, spec.node_offset_x, spec.node_offset_y), coeff);
}

}  // namespace

std::vector<double> interp_detail::cell_means_channel(const GridSpec& grid, int cells,
                                                      const std::vector<Complex>& coeff) {
    return apply_weights(grid, *mean_weights(grid, cells), coeff);
}

std::vector<double> interp_detail::node_values_channel(const GridSpec& grid, int cells, double offx,
                                                       double offy, const std::vector<Complex>& coeff) {
    return apply_weights(grid, *node_weights(grid, cells, offx, offy), coeff);
}

ObservationRecord observe(const InterpolantSpec& spec, const VelocityField& field) {
    const GridSpec& g = field.grid();
    spec.validate(g);
    ObservationRecord rec;
    rec.spec = spec;
    if (spec.kind == InterpolantKind::LowModes) {
        const int N = g.N();
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                if (!half_lattice_rep(g, a, b)) continue;
                if (!lowmode_keep(g, spec, a, b)) continue;
                if (!g.dealias_keep(a, b)) continue;
                int n = g.flat(a, b);
                rec.values.push_back(field.comp(0)[n].real());
                rec.values.push_back(field.comp(0)[n].imag());
                rec.values.push_back(field.comp(1)[n].real());
                rec.values.push_back(field.comp(1)[n].imag());
            }
    } else {
        auto v1 = cell_values(g, spec, field.comp(0));
        auto v2 = cell_values(g, spec, field.comp(1));
        rec.values.reserve(v1.size() * 2);
        for (std::size_t n = 0; n < v1.size(); ++n) {
            rec.values.push_back(v1[n]);
            rec.values.push_back(v2[n]);
        }
    }
    return rec;
}

VelocityField reconstruct(const GridSpec& grid, const ObservationRecord& record) {
    const InterpolantSpec& spec = record.spec;
    spec.validate(grid);
    VelocityField out(grid);
    if (spec.kind == InterpolantKind::LowModes) {
        const int N = grid.N();
        std::size_t idx = 0;
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                if (!half_lattice_rep(grid, a, b)) continue;
                if (!lowmode_keep(grid, spec, a, b)) continue;
                if (!grid.dealias_keep(a, b)) continue;
                if (idx + 4 > record.values.size())
                    throw std::invalid_argument("reconstruct: observation record too short");
                Complex c0(record.values[idx], record.values[idx + 1]);
                Complex c1(record.values[idx + 2], record.values[idx + 3]);
                idx += 4;
                int n = grid.flat(a, b);
                out.comp(0)[n] = c0;
                out.comp(1)[n] = c1;
                int nm = grid.flat(grid.index_of(-grid.freq(a)), grid.index_of(-grid.freq(b)));
                out.comp(0)[nm] = std::conj(c0);
                out.comp(1)[nm] = std::conj(c1);
            }
        if (idx != record.values.size()) throw std::invalid_argument("reconstruct: observation record size mismatch");
    } else {
        int M = spec.cells_per_side(grid.L());
        std::size_t ncell = static_cast<std::size_t>(M) * M;
        if (record.values.size() != 2 * ncell)
            throw std::invalid_argument("reconstruct: observation record size mismatch");
        std::vector<double> v1(ncell), v2(ncell);
        for (std::size_t n = 0; n < ncell; ++n) {
            v1[n] = record.values[2 * n];
            v2[n] = record.values[2 * n + 1];
        }
        pc_to_spectral(grid, M, v1, out.comp(0));
        pc_to_spectral(grid, M, v2, out.comp(1));
    }
    return out;
}

VelocityField interp_apply(const InterpolantSpec& spec, const VelocityField& field) {
    return reconstruct(field.grid(), observe(spec, field));
}

double InterpCertificate::effective_c0() const {
    return order == CertOrder::H1 ? c0_estimate : std::sqrt(c0_estimate);
}

double interp_detail::certificate_ratio(const GridSpec& g, const InterpolantSpec& spec, CertOrder order,
                                        const VelocityField& probe) {
    Norms nn = norms(probe);
    double denom = order == CertOrder::H1 ? spec.h * spec.h * nn.h1 * nn.h1
                                          : 0.25 * std::pow(spec.h, 4) * nn.h2 * nn.h2;
    if (denom <= 0.0) return 0.0;

    double err2 = 0.0;
    if (spec.kind == InterpolantKind::LowModes) {
        const int N = g.N();
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                if (lowmode_keep(g, spec, a, b)) continue;
                int n = g.flat(a, b);
                err2 += std::norm(probe.comp(0)[n]) + std::norm(probe.comp(1)[n]);
            }
        err2 *= g.L() * g.L();
    } else {
        // |phi - I_h phi|^2 = |phi|^2 - 2 s^2 sum val*mean + s^2 sum val^2,
        // exact for the continuum piecewise-constant interpolant
        int M = spec.cells_per_side(g.L());
        double s = g.L() / M;
        double cellarea = s * s;
        err2 = nn.l2 * nn.l2;
        for (int i = 0; i < 2; ++i) {
            auto means = interp_detail::cell_means_channel(g, M, probe.comp(i));
            std::vector<double> vals;
            if (spec.kind == InterpolantKind::VolumeElements)
                vals = means;
            else
                vals = interp_detail::node_values_channel(g, M, spec.node_offset_x, spec.node_offset_y,
                                                          probe.comp(i));
            for (std::size_t n = 0; n < vals.size(); ++n)
                err2 += cellarea * (vals[n] * vals[n] - 2.0 * vals[n] * means[n]);
        }
        err2 = std::max(err2, 0.0);
    }
    return err2 / denom;
}

namespace {

// adversarial single-mode probes: pure streamfunction modes at lattice radii
// straddling the relevant cutoff (projection cutoff, cell scale, band edge)
std::vector<VelocityField> adversarial_probes(const GridSpec& g, const InterpolantSpec& spec) {
    std::vector<VelocityField> probes;
    int kmax = g.dealias_kmax();
    std::set<std::pair<int, int>> picked;
    auto add_mode = [&](int j1, int j2) {
        if (j1 == 0 && j2 == 0) return;
        if (std::abs(j1) > kmax || std::abs(j2) > kmax) return;
        if (!(j1 > 0 || (j1 == 0 && j2 > 0))) std::swap(j1, j2);
        if (!(j1 > 0 || (j1 == 0 && j2 > 0))) return;
        if (!picked.insert({j1, j2}).second) return;
        VelocityField f(g);
        int a = g.index_of(j1), b = g.index_of(j2);
        Complex psi(1.0, 0.5);
        Complex uh = Complex(0.0, g.k2(b)) * psi;
        Complex vh = Complex(0.0, -g.k1(a)) * psi;
        f.at(0, a, b) = uh;
        f.at(1, a, b) = vh;
        f.at(0, g.index_of(-j1), g.index_of(-j2)) = std::conj(uh);
        f.at(1, g.index_of(-j1), g.index_of(-j2)) = std::conj(vh);
        probes.push_back(std::move(f));
    };
    std::vector<double> radii;
    if (spec.kind == InterpolantKind::LowModes) {
        double cut = spec.cutoff() / g.dk();
        for (double r : {cut * 1.001, cut * 1.05, cut * 1.2, cut * 1.5, cut * 2.0}) radii.push_back(r);
    } else {
        double cellrad = GridSpec::pi() / (spec.h * g.dk());  // cell Nyquist in lattice units
        for (double r : {cellrad * 0.5, cellrad * 0.9, cellrad, cellrad * 1.5, cellrad * 2.0}) radii.push_back(r);
        radii.push_back(kmax * 0.9);
    }
    radii.push_back(1.0);
    radii.push_back(kmax * 1.0);
    for (double r : radii) {
        int rr = std::max(1, std::min(kmax, static_cast<int>(std::lround(r))));
        add_mode(rr, 0);
        add_mode(0, rr);
        int d = std::max(1, static_cast<int>(std::lround(r / std::sqrt(2.0))));
        add_mode(d, d);
        add_mode(d, -d);
        if (rr + 1 <= kmax) add_mode(rr + 1, 0);
    }
    return probes;
}

VelocityField random_probe(const GridSpec& g, SplitMix64& rng, int which) {
    int kmax = g.dealias_kmax();
    int jmin = 1, jmax = kmax;
    double decay = 0.0;
    switch (which % 4) {
        case 0: decay = 0.0; break;
        case 1: decay = 1.0; break;
        case 2: jmin = std::max(1, kmax / 2); decay = 0.0; break;
        case 3: jmax = std::max(2, kmax / 3); decay = 2.0; break;
    }
    return random_divfree_field(g, rng.next(), jmin, jmax, 1.0, decay);
}

}  // namespace

InterpCertificate certify_c0(const GridSpec& grid, const InterpolantSpec& spec, CertOrder order,
                             int probes, std::uint64_t seed) {
    spec.validate(grid);
    if (probes < 100) throw std::invalid_argument("certify_c0: need at least 100 probes");
    if (order == CertOrder::H2 && spec.kind != InterpolantKind::Nodes)
        throw std::invalid_argument("certify_c0: H2-order certificates apply to the nodal interpolant");

    InterpCertificate cert;
    cert.spec = spec;
    cert.order = order;
    cert.grid_n = grid.N();
    cert.grid_l = grid.L();
    cert.seed = seed;

    auto consider = [&](const VelocityField& probe, const std::string& label) {
        double r = interp_detail::certificate_ratio(grid, spec, order, probe);
        ++cert.sample_count;
        if (r > cert.c0_estimate) {
            cert.c0_estimate = r;
            cert.worst_probe = label;
        }
    };

    auto adv = adversarial_probes(grid, spec);
    for (std::size_t i = 0; i < adv.size(); ++i) consider(adv[i], "mode#" + std::to_string(i));

    SplitMix64 rng(split_seed(seed, 0xCE57));
    int remaining = std::max(0, probes - static_cast<int>(adv.size()));
    for (int i = 0; i < remaining; ++i) consider(random_probe(grid, rng, i), "random#" + std::to_string(i));

    cert.worst_case_ratio = cert.c0_estimate;
    return cert;
}

double validate_certificate(const GridSpec& grid, const InterpCertificate& cert, int probes,
                            std::uint64_t seed) {
    SplitMix64 rng(split_seed(seed, 0x7A11));
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
        VelocityField probe = random_probe(grid, rng, i);
        worst = std::max(worst, interp_detail::certificate_ratio(grid, cert.spec, cert.order, probe));
    }
    return worst;
}

// ---- serialization ----------------------------------------------------------

std::string ObservationRecord::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["kind"] = to_string(spec.kind);
    j["h"] = spec.h;
    if (spec.kind == InterpolantKind::Nodes) {
        j["node_offset_x"] = spec.node_offset_x;
        j["node_offset_y"] = spec.node_offset_y;
    }
    j["values"] = values;
    return j.dump();
}

ObservationRecord ObservationRecord::from_json(const std::string& text) {
    json j = json::parse(text);
    ObservationRecord rec;
    rec.spec.kind = interpolant_kind_from_string(j.at("kind").get<std::string>());
    rec.spec.h = j.at("h").get<double>();
    if (j.contains("node_offset_x")) rec.spec.node_offset_x = j["node_offset_x"].get<double>();
    if (j.contains("node_offset_y")) rec.spec.node_offset_y = j["node_offset_y"].get<double>();
    rec.values = j.at("values").get<std::vector<double>>();
    return rec;
}

namespace {
constexpr char kObsMagic[8] = {'N', 'S', 'O', 'B', 'S', 'R', 'E', 'C'};
}

void ObservationRecord::save_binary(const std::string& path) const {
    static_assert(std::endian::native == std::endian::little);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("ObservationRecord: cannot open " + path);
    std::uint32_t version = 1;
    std::uint8_t kind = static_cast<std::uint8_t>(spec.kind);
    std::uint64_t count = values.size();
    out.write(kObsMagic, 8);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&kind), 1);
    out.write(reinterpret_cast<const char*>(&spec.h), 8);
    out.write(reinterpret_cast<const char*>(&spec.node_offset_x), 8);
    out.write(reinterpret_cast<const char*>(&spec.node_offset_y), 8);
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(8 * values.size()));
    if (!out) throw std::runtime_error("ObservationRecord: write failed for " + path);
}

ObservationRecord ObservationRecord::load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("ObservationRecord: cannot open " + path);
    char magic[8];
    std::uint32_t version = 0;
    std::uint8_t kind = 0;
    std::uint64_t count = 0;
    ObservationRecord rec;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&kind), 1);
    in.read(reinterpret_cast<char*>(&rec.spec.h), 8);
    in.read(reinterpret_cast<char*>(&rec.spec.node_offset_x), 8);
    in.read(reinterpret_cast<char*>(&rec.spec.node_offset_y), 8);
    in.read(reinterpret_cast<char*>(&count), 8);
    if (!in || std::memcmp(magic, kObsMagic, 8) != 0)
        throw std::runtime_error("ObservationRecord: bad magic in " + path);
    if (version != 1) throw std::runtime_error("ObservationRecord: unsupported version");
    rec.spec.kind = static_cast<InterpolantKind>(kind);
    rec.values.resize(count);
    in.read(reinterpret_cast<char*>(rec.values.data()), static_cast<std::streamsize>(8 * count));
    if (!in) throw std::runtime_error("ObservationRecord: truncated file " + path);
    return rec;
}

std::string InterpCertificate::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["kind"] = to_string(spec.kind);
    j["h"] = spec.h;
    j["node_offset_x"] = spec.node_offset_x;
    j["node_offset_y"] = spec.node_offset_y;
    j["order"] = to_string(order);
    j["c0_estimate"] = c0_estimate;
    j["worst_case_ratio"] = worst_case_ratio;
    j["effective_c0"] = effective_c0();
    j["sample_count"] = sample_count;
    j["worst_probe"] = worst_probe;
    j["grid"] = {{"N", grid_n}, {"L", grid_l}};
    j["seed"] = seed;
    return j.dump(2);
}

InterpCertificate InterpCertificate::from_json(const std::string& text) {
    json j = json::parse(text);
    InterpCertificate c;
    c.spec.kind = interpolant_kind_from_string(j.at("kind").get<std::string>());
    c.spec.h = j.at("h").get<double>();
    c.spec.node_offset_x = j.value("node_offset_x", 0.5);
    c.spec.node_offset_y = j.value("node_offset_y", 0.5);
    c.order = j.at("order").get<std::string>() == "h2" ? CertOrder::H2 : CertOrder::H1;
    c.c0_estimate = j.at("c0_estimate").get<double>();
    c.worst_case_ratio = j.value("worst_case_ratio", c.c0_estimate);
    c.sample_count = j.value("sample_count", 0);
    c.worst_probe = j.value("worst_probe", "");
    if (j.contains("grid")) {
        c.grid_n = j["grid"].value("N", 0);
        c.grid_l = j["grid"].value("L", 0.0);
    }
    c.seed = j.value("seed", 0ULL);
    return c;
}

}  // namespace nsnudge
