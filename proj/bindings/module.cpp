// Python bindings for the main operations: state construction, phase-space
// transforms, apparatus families and error figures, outcome distributions,
// sampling and scenario runs.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "akmeter/report.hpp"
#include "akmeter/scenario.hpp"
#include "akmeter/verify.hpp"

namespace py = pybind11;
using namespace akmeter;

namespace {

std::vector<cdouble> amps_from_array(const py::array_t<cdouble>& arr, std::size_t n) {
    if (arr.ndim() != 1 || std::size_t(arr.shape(0)) != n) {
        throw std::invalid_argument("amplitude array must be 1-D with grid.n entries");
    }
    const auto r = arr.unchecked<1>();
    std::vector<cdouble> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = r(i);
    return out;
}

py::array_t<cdouble> amps_to_array(const std::vector<cdouble>& amps) {
    py::array_t<cdouble> out(py::array::ShapeContainer{py::ssize_t(amps.size())});
    auto w = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < amps.size(); ++i) w(py::ssize_t(i)) = amps[i];
    return out;
}

py::array_t<double> dist_to_array(const PhaseSpaceDist& d) {
    py::array_t<double> out({py::ssize_t(d.x_axis.n), py::ssize_t(d.p_axis.n)});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < d.x_axis.n; ++i) {
        for (std::size_t k = 0; k < d.p_axis.n; ++k) {
            w(py::ssize_t(i), py::ssize_t(k)) = d.at(i, k);
        }
    }
    return out;
}

WaveFunction1D wf_from(const GridSpec1D& g, const py::array_t<cdouble>& arr) {
    return WaveFunction1D{g, amps_from_array(arr, g.n)};
}

py::dict report_to_dict(const ErrorReport& r) {
    py::dict d;
    d["dei_x"] = r.dei_x;
    d["dei_p"] = r.dei_p;
    d["def_x"] = r.def_x;
    d["def_p"] = r.def_p;
    d["dd_x"] = r.dd_x;
    d["dd_p"] = r.dd_p;
    d["cross_term_x"] = r.cross_term_x;
    d["cross_term_p"] = r.cross_term_p;
    d["mean_ei_x"] = r.mean_ei_x;
    d["mean_ei_p"] = r.mean_ei_p;
    d["mean_ef_x"] = r.mean_ef_x;
    d["mean_ef_p"] = r.mean_ef_p;
    d["mean_d_x"] = r.mean_d_x;
    d["mean_d_p"] = r.mean_d_p;
    return d;
}

}  // namespace

PYBIND11_MODULE(_akmeter, m) {
    m.doc() = "Arthurs-Kelly simultaneous position/momentum measurement toolkit";

    py::register_exception<Error>(m, "AkmeterError");

    py::class_<GridSpec1D>(m, "Grid")
        .def(py::init([](double half_width, std::size_t n, double hbar) {
                 return GridSpec1D::centered(half_width, n, hbar);
             }),
             py::arg("half_width"), py::arg("n"), py::arg("hbar") = 1.0)
        .def_readonly("x_min", &GridSpec1D::x_min)
        .def_readonly("n", &GridSpec1D::n)
        .def_readonly("dx", &GridSpec1D::dx)
        .def_readonly("hbar", &GridSpec1D::hbar)
        .def_property_readonly("dp", &GridSpec1D::dp)
        .def("x_axis",
             [](const GridSpec1D& g) {
                 py::array_t<double> out(py::array::ShapeContainer{py::ssize_t(g.n)});
                 auto w = out.mutable_unchecked<1>();
                 for (std::size_t i = 0; i < g.n; ++i) w(py::ssize_t(i)) = g.x(i);
                 return out;
             })
        .def("p_axis", [](const GridSpec1D& g) {
            py::array_t<double> out(py::array::ShapeContainer{py::ssize_t(g.n)});
            auto w = out.mutable_unchecked<1>();
            for (std::size_t i = 0; i < g.n; ++i) w(py::ssize_t(i)) = g.p(i);
            return out;
        });

    py::class_<PhaseSpaceDist>(m, "Distribution")
        .def_property_readonly("values", &dist_to_array)
        .def_property_readonly("x_axis", [](const PhaseSpaceDist& d) { return d.x_axis; })
        .def_property_readonly("p_axis", [](const PhaseSpaceDist& d) { return d.p_axis; })
        .def("mass", &mass)
        .def("min_value", &min_value)
        .def("moments", [](const PhaseSpaceDist& d) {
            const PhaseSpaceMoments mo = moments(d);
            py::dict out;
            out["mean_x"] = mo.mean_x;
            out["var_x"] = mo.var_x;
            out["mean_p"] = mo.mean_p;
            out["var_p"] = mo.var_p;
            return out;
        });
    m.def("l1_distance", &l1_distance, py::arg("a"), py::arg("b"));

    py::class_<ApparatusState>(m, "Apparatus");
    m.def(
        "retro_optimal",
        [](double lambda_i, const GridSpec1D& g, const py::array_t<cdouble>& phi_f) {
            return make_retrodictively_optimal(lambda_i, normalize(wf_from(g, phi_f)));
        },
        py::arg("lambda_i"), py::arg("grid"), py::arg("phi_f"));
    m.def(
        "pred_optimal",
        [](double lambda_f, const GridSpec1D& g, const py::array_t<cdouble>& phi_i) {
            return make_predictively_optimal(lambda_f, normalize(wf_from(g, phi_i)));
        },
        py::arg("lambda_f"), py::arg("grid"), py::arg("phi_i"));
    m.def("complete_optimal", &make_completely_optimal, py::arg("lambda_i"),
          py::arg("lambda_f"), py::arg("grid"));
    m.def("min_disturbing", &make_minimally_disturbing, py::arg("lambda_"), py::arg("eta"),
          py::arg("grid"));
    m.def(
        "error_report",
        [](const ApparatusState& ap) { return report_to_dict(error_report(ap)); },
        py::arg("apparatus"));

    m.def(
        "coherent_state",
        [](const GridSpec1D& g, double mu_x, double mu_p, double lam) {
            return amps_to_array(coherent_wavefunction({mu_x, mu_p, lam}, g).amps);
        },
        py::arg("grid"), py::arg("mu_x"), py::arg("mu_p"), py::arg("lambda_"));
    m.def(
        "gaussian_packet",
        [](const GridSpec1D& g, double center, double width) {
            return amps_to_array(gaussian_packet(g, center, width).amps);
        },
        py::arg("grid"), py::arg("center"), py::arg("width"));

    m.def(
        "wigner",
        [](const GridSpec1D& g, const py::array_t<cdouble>& psi) {
            return wigner_of_pure(wf_from(g, psi));
        },
        py::arg("grid"), py::arg("psi"));
    m.def(
        "husimi",
        [](const GridSpec1D& g, const py::array_t<cdouble>& psi, double lambda_i) {
            return husimi(wf_from(g, psi), lambda_i);
        },
        py::arg("grid"), py::arg("psi"), py::arg("lambda_i"));
    m.def(
        "smeared_wigner",
        [](const GridSpec1D& g, const py::array_t<cdouble>& psi, double lam, double eta) {
            return smeared_wigner(wf_from(g, psi), lam, eta);
        },
        py::arg("grid"), py::arg("psi"), py::arg("lambda_"), py::arg("eta"));

    m.def(
        "outcome_distribution",
        [](const GridSpec1D& g, const py::array_t<cdouble>& psi, const ApparatusState& ap,
           const std::string& route) {
            const WaveFunction1D w = wf_from(g, psi);
            if (route == "convolution") return outcome_distribution_convolution(w, ap);
            if (route == "direct") return outcome_distribution_direct(w, ap);
            throw std::invalid_argument("route must be 'convolution' or 'direct'");
        },
        py::arg("grid"), py::arg("psi"), py::arg("apparatus"),
        py::arg("route") = "convolution");
    m.def(
        "pointer_variances",
        [](const PhaseSpaceDist& rho) {
            const PointerSpreads ps = pointer_variances(rho);
            return py::make_tuple(ps.dmu_x, ps.dmu_p);
        },
        py::arg("rho"));
    m.def(
        "sample",
        [](const PhaseSpaceDist& rho, std::size_t count, std::uint64_t seed) {
            const auto samples = sample_outcomes(rho, count, seed);
            py::array_t<double> out({py::ssize_t(count), py::ssize_t(2)});
            auto w = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < samples.size(); ++i) {
                w(py::ssize_t(i), 0) = samples[i].mu_x;
                w(py::ssize_t(i), 1) = samples[i].mu_p;
            }
            return out;
        },
        py::arg("rho"), py::arg("count"), py::arg("seed"));

    m.def(
        "run_scenario_text",
        [](const std::string& text) {
            return report_to_json(run_scenario(parse_scenario(text)).report);
        },
        py::arg("text"), "Run a scenario given as text; returns the JSON report.");
    m.def("verify", []() {
        py::list out;
        for (const auto& r : run_verification_suite()) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    });
}
