#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsnudge/assimilate.hpp"
#include "nsnudge/interpolant.hpp"
#include "nsnudge/plot.hpp"
#include "nsnudge/run_io.hpp"
#include "nsnudge/spectral_ops.hpp"
#include "nsnudge/thresholds.hpp"

namespace py = pybind11;
using namespace nsnudge;

namespace {

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

VelocityField field_from_arrays(const GridSpec& g, const ComplexArray& u1, const ComplexArray& u2) {
    if (u1.ndim() != 2 || u2.ndim() != 2 || u1.shape(0) != g.N() || u1.shape(1) != g.N() ||
        u2.shape(0) != g.N() || u2.shape(1) != g.N())
        throw std::invalid_argument("expected two N x N complex arrays matching the grid");
    VelocityField f(g);
    auto a1 = u1.unchecked<2>();
    auto a2 = u2.unchecked<2>();
    for (int a = 0; a < g.N(); ++a)
        for (int b = 0; b < g.N(); ++b) {
            f.at(0, a, b) = a1(a, b);
            f.at(1, a, b) = a2(a, b);
        }
    return f;
}

py::tuple field_to_arrays(const VelocityField& f) {
    int n = f.grid().N();
    ComplexArray u1({n, n}), u2({n, n});
    auto a1 = u1.mutable_unchecked<2>();
    auto a2 = u2.mutable_unchecked<2>();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            a1(a, b) = f.at(0, a, b);
            a2(a, b) = f.at(1, a, b);
        }
    return py::make_tuple(u1, u2);
}

py::dict series_to_dict(const ErrorSeries& series) {
    std::size_t n = series.samples.size();
    py::array_t<double> t(n), l2w(n), h1w(n), l2u(n), h1u(n);
    auto tt = t.mutable_unchecked<1>();
    auto a = l2w.mutable_unchecked<1>();
    auto b = h1w.mutable_unchecked<1>();
    auto c = l2u.mutable_unchecked<1>();
    auto d = h1u.mutable_unchecked<1>();
    for (std::size_t i = 0; i < n; ++i) {
        tt(i) = series.samples[i].t;
        a(i) = series.samples[i].l2_w;
        b(i) = series.samples[i].h1_w;
        c(i) = series.samples[i].l2_u;
        d(i) = series.samples[i].h1_u;
    }
    py::dict out;
    out["t"] = t;
    out["l2_w"] = l2w;
    out["h1_w"] = h1w;
    out["l2_u"] = l2u;
    out["h1_u"] = h1u;
    if (series.fit) {
        py::dict fit;
        fit["alpha"] = series.fit->alpha;
        fit["logC"] = series.fit->logC;
        fit["rms_residual"] = series.fit->rms_residual;
        fit["nsamples"] = series.fit->nsamples;
        out["fit"] = fit;
    }
    return out;
}

py::dict report_to_dict(const ThresholdReport& r) {
    py::dict d;
    d["G"] = r.G;
    d["nu"] = r.nu;
    d["lambda1"] = r.lambda1;
    d["c0"] = r.c0;
    d["c"] = r.c;
    d["c1"] = r.c1;
    d["c2"] = r.c2;
    d["c3"] = r.c3;
    d["c4"] = r.c4;
    d["J"] = r.J;
    d["dirichlet_h_bound"] = r.dirichlet_h_bound;
    d["periodic_h_bound"] = r.periodic_h_bound;
    d["mu_dirichlet"] = r.mu_dirichlet;
    d["mu_periodic"] = r.mu_periodic;
    d["mu_periodic_alt"] = r.mu_periodic_alt;
    if (r.h) {
        d["h"] = *r.h;
        d["wellposed_bound"] = *r.wellposed_bound;
        d["feasible"] = *r.feasible;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_nsnudge, m) {
    m.doc() = "pseudo-spectral 2D Navier-Stokes with feedback-nudging data assimilation";

    py::register_exception<ValidationError>(m, "NsnudgeValidationError", PyExc_ValueError);
    py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<double, int>(), py::arg("L"), py::arg("N"))
        .def_property_readonly("L", &GridSpec::L)
        .def_property_readonly("N", &GridSpec::N)
        .def_property_readonly("lambda1", &GridSpec::lambda1)
        .def_property_readonly("dealias_kmax", &GridSpec::dealias_kmax);

    py::class_<VelocityField>(m, "VelocityField")
        .def(py::init([](const GridSpec& g, const ComplexArray& u1, const ComplexArray& u2) {
                 return field_from_arrays(g, u1, u2);
             }),
             py::arg("grid"), py::arg("u1"), py::arg("u2"))
        .def_property_readonly("grid", &VelocityField::grid)
        .def("coefficients", &field_to_arrays, "spectral coefficients as two N x N complex arrays");

    m.def("random_divfree_field", &random_divfree_field, py::arg("grid"), py::arg("seed"),
          py::arg("jmin"), py::arg("jmax"), py::arg("amplitude"), py::arg("decay") = 0.0);
    m.def("taylor_green", &taylor_green, py::arg("grid"), py::arg("amplitude"));

    m.def("to_real", [](const VelocityField& f) {
        RealVectorField r = to_real(f);
        int n = f.grid().N();
        py::array_t<double> u1({n, n}), u2({n, n});
        std::copy(r.u1.begin(), r.u1.end(), u1.mutable_data());
        std::copy(r.u2.begin(), r.u2.end(), u2.mutable_data());
        return py::make_tuple(u1, u2);
    });
    m.def("leray_project", &leray_project);
    m.def("stokes_apply", &stokes_apply);
    m.def("bilinear", &bilinear);
    m.def("norms", [](const VelocityField& f) {
        Norms n = norms(f);
        return py::make_tuple(n.l2, n.h1, n.h2);
    });
    m.def("inner_l2", &inner_l2);
    m.def("max_divergence", &max_divergence);

    py::enum_<InterpolantKind>(m, "InterpolantKind")
        .value("LowModes", InterpolantKind::LowModes)
        .value("VolumeElements", InterpolantKind::VolumeElements)
        .value("Nodes", InterpolantKind::Nodes);

    py::class_<InterpolantSpec>(m, "InterpolantSpec")
        .def(py::init([](const std::string& kind, double h, double offx, double offy) {
                 InterpolantSpec s;
                 s.kind = interpolant_kind_from_string(kind);
                 s.h = h;
                 s.node_offset_x = offx;
                 s.node_offset_y = offy;
                 return s;
             }),
             py::arg("kind"), py::arg("h"), py::arg("node_offset_x") = 0.5, py::arg("node_offset_y") = 0.5)
        .def_readonly("kind", &InterpolantSpec::kind)
        .def_readonly("h", &InterpolantSpec::h);

    m.def("interp_apply", &interp_apply, py::arg("spec"), py::arg("field"));
    m.def("observe", [](const InterpolantSpec& spec, const VelocityField& f) {
        ObservationRecord rec = observe(spec, f);
        return py::make_tuple(rec.to_json(), py::cast(rec.values));
    });
    m.def("certify_c0", [](const GridSpec& g, const InterpolantSpec& spec, const std::string& order,
                           int probes, std::uint64_t seed) {
        InterpCertificate cert =
            certify_c0(g, spec, order == "h2" ? CertOrder::H2 : CertOrder::H1, probes, seed);
        py::dict d;
        d["c0_estimate"] = cert.c0_estimate;
        d["effective_c0"] = cert.effective_c0();
        d["worst_probe"] = cert.worst_probe;
        d["sample_count"] = cert.sample_count;
        d["json"] = cert.to_json();
        return d;
    }, py::arg("grid"), py::arg("spec"), py::arg("order"), py::arg("probes"), py::arg("seed"));

    m.def("minlog_phi", &minlog_phi, py::arg("r"), py::arg("beta"));
    m.def("minlog_lower_bound", &minlog_lower_bound, py::arg("beta"));
    m.def("thresholds", [](double G, double nu, double lambda1, double c0, double c, py::object h) {
        std::optional<double> hh;
        if (!h.is_none()) hh = h.cast<double>();
        return report_to_dict(thresholds(G, nu, lambda1, c0, c, hh));
    }, py::arg("G"), py::arg("nu"), py::arg("lambda1"), py::arg("c0"), py::arg("c"),
       py::arg("h") = py::none());

    m.def("integrate", [](const VelocityField& u0, const VelocityField& forcing, double nu, double T,
                          double dt) {
        StepperConfig cfg;
        cfg.dt = dt;
        return integrate(u0, forcing, nu, T, cfg);
    }, py::arg("u0"), py::arg("forcing"), py::arg("nu"), py::arg("T"), py::arg("dt"));

    m.def("run_pair", [](const std::string& config_json) {
        AssimilationConfig cfg = AssimilationConfig::from_json(config_json);
        cfg.validate();
        RunPairResult r = run_pair(cfg);
        py::dict out;
        out["series"] = series_to_dict(r.series);
        out["G"] = r.G;
        out["t_final"] = r.t_final;
        out["thresholds"] = report_to_dict(r.thresholds);
        out["warnings"] = r.warnings;
        out["u_final"] = field_to_arrays(r.u_final);
        out["v_final"] = field_to_arrays(r.v_final);
        return out;
    }, py::arg("config_json"));

    m.def("fit_decay_rate", [](const py::array_t<double>& t, const py::array_t<double>& w,
                               double t_begin, double t_end) {
        auto tt = t.unchecked<1>();
        auto ww = w.unchecked<1>();
        std::vector<ErrorSample> samples;
        for (py::ssize_t i = 0; i < tt.shape(0); ++i)
            samples.push_back({tt(i), ww(i), ww(i), 1.0, 1.0, 0});
        FitResult f = ErrorSeries::fit_decay_rate(samples, t_begin, t_end, true);
        py::dict d;
        d["alpha"] = f.alpha;
        d["logC"] = f.logC;
        d["rms_residual"] = f.rms_residual;
        d["nsamples"] = f.nsamples;
        return d;
    }, py::arg("t"), py::arg("w"), py::arg("t_begin"), py::arg("t_end"));

    m.def("prediction_experiment", [](const std::string& config_json, double t1, double T_pred,
                                      const std::vector<double>& eps_ladder) {
        AssimilationConfig cfg = AssimilationConfig::from_json(config_json);
        PredictionResult r = prediction_experiment(cfg, t1, T_pred, eps_ladder);
        py::list ladder;
        for (const auto& p : r.ladder) {
            py::dict d;
            d["eps"] = p.eps;
            d["time_to_eps"] = p.time_to_eps;
            d["censored"] = p.censored;
            ladder.append(d);
        }
        py::dict out;
        out["t1"] = r.t1;
        out["ladder"] = ladder;
        return out;
    }, py::arg("config_json"), py::arg("t1"), py::arg("T_pred"), py::arg("eps_ladder"));

    m.def("simulate_to_directory", [](const std::string& config_json, const std::string& out_dir) {
        AssimilationConfig cfg = AssimilationConfig::from_json(config_json);
        cfg.validate();
        RunPairResult r = run_pair(cfg);
        write_run_directory(out_dir, cfg, r, 0.0);
        return out_dir;
    }, py::arg("config_json"), py::arg("out_dir"));

    m.def("default_config_json", []() {
        AssimilationConfig cfg;
        return cfg.to_json();
    });
}
