#include "sampnum/error_analysis.hpp"
#include "sampnum/errors.hpp"
#include "sampnum/experiment.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sampnum;

namespace {

std::vector<double> to_vector(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    return {a.data(), a.data() + a.size()};
}

template <class Report>
std::string csv_text(const Report& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

template <class Report>
std::string summary_text(const Report& r) {
    std::ostringstream os;
    print_summary(os, r);
    return os.str();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted least-squares sampling recovery on the torus";

    py::register_exception<CheckFailure>(m, "CheckFailure", PyExc_RuntimeError);
    py::register_exception<DegenerateFitError>(m, "DegenerateFitError", PyExc_RuntimeError);

    py::class_<SpaceParams>(m, "SpaceParams")
        .def(py::init<int, double>(), py::arg("d"), py::arg("s"))
        .def_readonly("d", &SpaceParams::d)
        .def_readonly("s", &SpaceParams::s);

    py::class_<OrderedBasis, std::shared_ptr<OrderedBasis>>(m, "OrderedBasis")
        .def_property_readonly("dim", &OrderedBasis::dim)
        .def("__len__", &OrderedBasis::size)
        .def("index", [](const OrderedBasis& b, std::size_t j) {
            auto v = b.index(j);
            return std::vector<std::uint32_t>(v.begin(), v.end());
        })
        .def("weight", &OrderedBasis::weight)
        .def("sigma", &OrderedBasis::sigma)
        .def("approximation_number", &OrderedBasis::approximation_number)
        .def_property_readonly("weights", [](const OrderedBasis& b) {
            return std::vector<double>(b.weights().begin(), b.weights().end());
        })
        .def_property_readonly("sigmas", [](const OrderedBasis& b) {
            return std::vector<double>(b.sigmas().begin(), b.sigmas().end());
        })
        .def("eval_first", [](const OrderedBasis& b, std::vector<double> x, std::size_t count) {
            std::vector<double> out(count);
            if (count > b.size()) throw ArgumentError("eval_first: count exceeds basis size");
            b.eval_first(x, count, out);
            return out;
        });

    m.def("ordered_basis",
          [](const SpaceParams& p, std::size_t size, std::size_t cap) {
              return std::const_pointer_cast<OrderedBasis>(ordered_basis(p, size, cap));
          },
          py::arg("params"), py::arg("size"), py::arg("cap") = kDefaultEnumerationCap);

    py::class_<Enclosure>(m, "Enclosure")
        .def_readonly("lo", &Enclosure::lo)
        .def_readonly("hi", &Enclosure::hi)
        .def_property_readonly("mid", &Enclosure::mid);

    py::class_<SpectrumSummary>(m, "SpectrumSummary")
        .def("__len__", &SpectrumSummary::size)
        .def_property_readonly("total", &SpectrumSummary::total)
        .def_property_readonly("total_enclosure", &SpectrumSummary::total_enclosure)
        .def("a", &SpectrumSummary::a)
        .def("head", &SpectrumSummary::head)
        .def("tail", &SpectrumSummary::tail)
        .def("tail_enclosure", &SpectrumSummary::tail_enclosure);
    m.def("spectral_sums", [](const std::shared_ptr<OrderedBasis>& b) { return spectral_sums(*b); });
    m.def("beta_gamma", [](const SpectrumSummary& s, std::size_t k) {
        const auto bg = beta_gamma(s, k);
        return py::make_tuple(bg.beta, bg.gamma);
    });

    py::class_<CoefVector>(m, "CoefVector")
        .def(py::init([](std::shared_ptr<OrderedBasis> b, std::vector<double> c) {
            return CoefVector(std::move(b), std::move(c));
        }))
        .def_property_readonly("coefficients", [](const CoefVector& f) {
            return std::vector<double>(f.coefficients().begin(), f.coefficients().end());
        })
        .def("__len__", &CoefVector::size)
        .def("l2_norm", &CoefVector::l2_norm)
        .def("h_norm", &CoefVector::h_norm)
        .def("__call__", [](const CoefVector& f, std::vector<double> x) { return f(x); });
    m.def("random_unit_function",
          [](std::shared_ptr<OrderedBasis> b, std::size_t begin, std::size_t end, std::uint64_t seed) {
              return random_unit_function(std::move(b), begin, end, seed);
          },
          py::arg("basis"), py::arg("begin"), py::arg("end"), py::arg("seed"));

    py::class_<DensityParams>(m, "DensityParams")
        .def(py::init([](std::shared_ptr<OrderedBasis> b, std::size_t k, std::size_t mm) {
                 return DensityParams(std::move(b), k, mm);
             }),
             py::arg("basis"), py::arg("k"), py::arg("m"))
        .def_property_readonly("k", &DensityParams::k)
        .def_property_readonly("m", &DensityParams::m);
    m.def("density_eval", [](const DensityParams& p, std::vector<double> x) { return density_eval(p, x); });
    m.def("density_selfcheck", &density_selfcheck, py::arg("params"), py::arg("q"));

    py::class_<PointSet>(m, "PointSet")
        .def("__len__", &PointSet::size)
        .def_readonly("d", &PointSet::d)
        .def_readonly("seed", &PointSet::seed)
        .def_property_readonly("coords", [](const PointSet& p) {
            py::array_t<double> a({static_cast<py::ssize_t>(p.size()), static_cast<py::ssize_t>(p.d)});
            std::copy(p.coords.begin(), p.coords.end(), a.mutable_data());
            return a;
        })
        .def_property_readonly("densities", [](const PointSet& p) { return p.densities; });
    m.def("sample_points", &sample_points, py::arg("params"), py::arg("n"), py::arg("seed"));

    py::class_<InfoMatrices>(m, "InfoMatrices")
        .def_readonly("k", &InfoMatrices::k)
        .def_readonly("m", &InfoMatrices::m)
        .def_readonly("weights", &InfoMatrices::weights)
        .def_readonly("B", &InfoMatrices::B)
        .def_readonly("G", &InfoMatrices::G)
        .def_readonly("Gamma", &InfoMatrices::Gamma);
    m.def("build_matrices",
          [](const PointSet& p, const std::shared_ptr<OrderedBasis>& b, std::size_t k, std::size_t mm) {
              return build_matrices(p, *b, k, mm);
          },
          py::arg("points"), py::arg("basis"), py::arg("k"), py::arg("m"));

    py::class_<Pseudoinverse>(m, "Pseudoinverse")
        .def(py::init<const Eigen::MatrixXd&, double>(), py::arg("A"), py::arg("rel_tol") = kRankTolerance)
        .def_property_readonly("s_min", &Pseudoinverse::s_min)
        .def_property_readonly("s_max", &Pseudoinverse::s_max)
        .def_property_readonly("rank_ok", &Pseudoinverse::rank_ok)
        .def_property_readonly("norm", &Pseudoinverse::norm)
        .def("matrix", &Pseudoinverse::matrix);

    m.def("sample_values", &sample_values, py::arg("f"), py::arg("points"));
    m.def("fit",
          [](const Pseudoinverse& P, py::array_t<double, py::array::c_style | py::array::forcecast> y,
             const PointSet& pts, const std::shared_ptr<OrderedBasis>& b) {
              auto v = to_vector(y);
              return to_coef_vector(fit(P, v, pts), b);
          },
          py::arg("pinv"), py::arg("samples"), py::arg("points"), py::arg("basis"),
          "Least-squares fit in the head space; returns the fitted CoefVector.");

    m.def("error_operator",
          [](const InfoMatrices& info, const Pseudoinverse& P, const std::shared_ptr<OrderedBasis>& b) {
              return error_operator(info, P, *b);
          });
    m.def("worst_case_error_trunc",
          [](const InfoMatrices& info, const Pseudoinverse& P, const std::shared_ptr<OrderedBasis>& b) {
              return worst_case_error_trunc(info, P, *b, info.k, info.m);
          });
    m.def("certified_upper_bound",
          [](double e, const std::shared_ptr<OrderedBasis>& b, const SpectrumSummary& s,
             const InfoMatrices& info, const Pseudoinverse& P) {
              return certified_upper_bound(e, *b, s, info, P, info.k, info.m);
          });
    m.def("empirical_error", &empirical_error, py::arg("fitted"), py::arg("f"));

    py::class_<ErrorReport>(m, "ErrorReport")
        .def_readonly("e_trunc", &ErrorReport::e_trunc)
        .def_readonly("e_upper", &ErrorReport::e_upper)
        .def_readonly("a_k", &ErrorReport::a_k)
        .def_readonly("beta_k", &ErrorReport::beta_k)
        .def_readonly("gamma_k", &ErrorReport::gamma_k)
        .def_readonly("theorem_rhs", &ErrorReport::theorem_rhs)
        .def_readonly("s_min_G", &ErrorReport::s_min_G)
        .def_readonly("s_max_Gamma", &ErrorReport::s_max_Gamma)
        .def_readonly("decomposition_rhs", &ErrorReport::decomposition_rhs)
        .def_readonly("tail_k", &ErrorReport::tail_k);
    m.def("error_report",
          [](const InfoMatrices& info, const Pseudoinverse& P, const std::shared_ptr<OrderedBasis>& b,
             const SpectrumSummary& s) { return error_report(info, P, *b, s); });

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("d", &ExperimentConfig::d)
        .def_readwrite("s", &ExperimentConfig::s)
        .def_readwrite("n_grid", &ExperimentConfig::n_grid)
        .def_readwrite("c_head", &ExperimentConfig::c_head)
        .def_readwrite("m_factor", &ExperimentConfig::m_factor)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("out", &ExperimentConfig::out);
    m.def("parse_config", [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
    });
    m.def("load_config", &load_config);
    m.def("head_size", &head_size);

    // experiment runners return (csv, summary)
    m.def("run_claims", [](const ExperimentConfig& c, bool search) {
        auto r = run_claims(c, search);
        return py::make_tuple(csv_text(r), summary_text(r));
    }, py::arg("config"), py::arg("search_threshold") = false);
    m.def("run_rates", [](const ExperimentConfig& c) {
        auto r = run_rates(c);
        return py::make_tuple(csv_text(r), summary_text(r));
    });
    m.def("run_beta_lemma", [](const ExperimentConfig& c) {
        auto r = run_beta_lemma(c);
        return py::make_tuple(csv_text(r), summary_text(r));
    });
    m.def("run_density_check", [](const ExperimentConfig& c) {
        auto r = run_density_check(c);
        return py::make_tuple(csv_text(r), summary_text(r));
    });
}
