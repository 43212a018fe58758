#include "awf/calderon.hpp"
#include "awf/config.hpp"
#include "awf/errors.hpp"
#include "awf/experiments.hpp"
#include "awf/frames.hpp"
#include "awf/group.hpp"
#include "awf/linalg.hpp"
#include "awf/wavelets.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace awf;

namespace {

JRange range(std::pair<int, int> r) { return {r.first, r.second}; }

std::vector<FrequencyBox> boxes_from(const std::vector<std::pair<Vector, Vector>>& boxes) {
    std::vector<FrequencyBox> out;
    for (const auto& [lo, hi] : boxes) {
        out.push_back({lo, hi});
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Affine wavelet systems: Calderon sums, frame bounds and quasi-lattice checks";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ScaleRangeError>(m, "ScaleRangeError", base.ptr());
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<TruncationRangeError>(m, "TruncationRangeError", base.ptr());
    py::register_exception<UnsupportedDilationError>(m, "UnsupportedDilationError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());

    py::class_<DilationDescriptor>(m, "Dilation")
        .def(py::init([](const Matrix& a, int power_cap) {
                 LinalgOptions o;
                 o.power_cap = power_cap;
                 return DilationDescriptor(a, o);
             }),
             py::arg("matrix"), py::arg("power_cap") = 64)
        .def_static("scalar", [](double a) { return DilationDescriptor::scalar(a); })
        .def_property_readonly("dim", &DilationDescriptor::dim)
        .def_property_readonly("matrix", &DilationDescriptor::matrix)
        .def_property_readonly("abs_det", &DilationDescriptor::abs_det)
        .def_property_readonly("classification",
                               [](const DilationDescriptor& a) { return std::string(to_string(classify_dilation(a))); })
        .def("power", &DilationDescriptor::power)
        .def("transpose_power", &DilationDescriptor::transpose_power);

    py::class_<GridSpec>(m, "Grid")
        .def(py::init([](int dim, double half_width, int samples) {
                 auto g = GridSpec::uniform(dim, half_width, samples);
                 g.validate();
                 return g;
             }),
             py::arg("dim"), py::arg("L"), py::arg("N"))
        .def_property_readonly("dim", &GridSpec::dim)
        .def_property_readonly("size", &GridSpec::size)
        .def_property_readonly("spacing", &GridSpec::max_spacing);

    py::class_<GridFunction>(m, "GridFunction")
        .def_property_readonly("values", [](const GridFunction& f) { return f.values(); })
        .def_property_readonly("norm_sq", &GridFunction::norm_sq)
        .def("scaled", &GridFunction::scaled);

    py::class_<FrequencyWavelet>(m, "Wavelet")
        .def_static("builtin", [](const std::string& name, int bell_degree) {
            return builtin_wavelet(name, BuiltinParams{bell_degree});
        }, py::arg("name"), py::arg("bell_degree") = 3)
        .def_static("haar", &FrequencyWavelet::haar)
        .def_static("shannon", &FrequencyWavelet::shannon)
        .def_static("meyer", &FrequencyWavelet::meyer, py::arg("bell_degree") = 3)
        .def_static("indicator", [](const std::vector<std::pair<Vector, Vector>>& boxes, double amplitude) {
            return FrequencyWavelet::indicator(boxes_from(boxes), amplitude);
        }, py::arg("boxes"), py::arg("amplitude") = 1.0)
        .def_property_readonly("name", &FrequencyWavelet::name)
        .def_property_readonly("dim", &FrequencyWavelet::dim)
        .def_property_readonly("norm_l2", &FrequencyWavelet::norm_l2)
        .def("scaled", &FrequencyWavelet::scaled)
        .def("__call__", &FrequencyWavelet::evaluate, py::arg("xi"))
        .def("power", &FrequencyWavelet::power, py::arg("xi"));

    py::class_<GroupElement>(m, "GroupElement")
        .def(py::init([](const Vector& x, int j) { return GroupElement{x, j}; }), py::arg("x"), py::arg("j"))
        .def_readonly("x", &GroupElement::x)
        .def_readonly("j", &GroupElement::j)
        .def("__repr__", [](const GroupElement& g) {
            return "GroupElement(x=" + py::repr(py::cast(g.x)).cast<std::string>() + ", j=" + std::to_string(g.j) + ")";
        });
    m.def("multiply", &multiply, py::arg("g"), py::arg("h"), py::arg("a"));
    m.def("inverse", &inverse, py::arg("g"), py::arg("a"));
    m.def("left_haar_weight", [](int j, const DilationDescriptor& a) { return haar_weight(j, a, HaarSide::left); });
    m.def("decompose", [](const GroupElement& g, const DilationDescriptor& a, const DilationDescriptor& p) {
        const auto d = decompose(g, a, p);
        return py::make_tuple(d.lambda, d.k, d.t);
    }, py::arg("g"), py::arg("a"), py::arg("p"), "(lambda, k, t) with g = lambda * (P t, 0) and t in [0,1)^d");
    m.def("covolume", &covolume_quasilattice, py::arg("p"));

    py::class_<CalderonSum>(m, "CalderonSum")
        .def_readonly("value", &CalderonSum::value)
        .def_readonly("tail_estimate", &CalderonSum::tail_estimate)
        .def_readonly("near_boundary", &CalderonSum::near_boundary);
    m.def("calderon_sum", &calderon_sum, py::arg("psi"), py::arg("a"), py::arg("xi"), py::arg("J"),
          py::arg("boundary_tol") = 1e-12);

    py::class_<CalderonReport>(m, "CalderonReport")
        .def_readonly("ess_inf", &CalderonReport::ess_inf)
        .def_readonly("ess_sup", &CalderonReport::ess_sup)
        .def_readonly("target", &CalderonReport::target)
        .def_readonly("excluded", &CalderonReport::excluded)
        .def_readonly("tail_bound", &CalderonReport::tail_bound)
        .def_readonly("passed", &CalderonReport::pass);
    m.def("calderon_report", [](const FrequencyWavelet& psi, const DilationDescriptor& a, const DilationDescriptor& p,
                                const GridSpec& grid, int J, double tolerance) {
        CalderonOptions o;
        o.tolerance = tolerance;
        return calderon_report(psi, a, p, grid, J, o);
    }, py::arg("psi"), py::arg("a"), py::arg("p"), py::arg("grid"), py::arg("J"), py::arg("tolerance") = 1e-6);

    m.def("random_band_limited", &random_band_limited, py::arg("grid"), py::arg("count"), py::arg("band_lo"),
          py::arg("band_hi"), py::arg("seed"));
    m.def("continuous_transform_norm", [](const FrequencyWavelet& psi, const DilationDescriptor& a,
                                          const GridFunction& f, std::pair<int, int> scales) {
        return continuous_transform_norm(psi, a, f, range(scales));
    }, py::arg("psi"), py::arg("a"), py::arg("f"), py::arg("j_range"));
    m.def("plancherel_ratio", [](const FrequencyWavelet& psi, const DilationDescriptor& a, const GridFunction& f,
                                 std::pair<int, int> scales) {
        return plancherel_identity_check(psi, a, f, range(scales)).ratio;
    }, py::arg("psi"), py::arg("a"), py::arg("f"), py::arg("j_range"));
    m.def("resolved_scales", [](const DilationDescriptor& a, const DilationDescriptor& p, const GridSpec& grid,
                                std::pair<int, int> within) {
        const auto r = resolved_scales(a, p, grid, range(within));
        return std::pair{r.lo, r.hi};
    }, py::arg("a"), py::arg("p"), py::arg("grid"), py::arg("within"));

    py::class_<FrameBoundsEstimate>(m, "FrameBounds")
        .def_readonly("c1", &FrameBoundsEstimate::c1)
        .def_readonly("c2", &FrameBoundsEstimate::c2)
        .def_readonly("parseval_defect", &FrameBoundsEstimate::parseval_defect)
        .def_readonly("eigenvalues", &FrameBoundsEstimate::eigenvalues)
        .def_readonly("kind", &FrameBoundsEstimate::kind);
    m.def("frame_bounds", [](const FrequencyWavelet& psi, const DilationDescriptor& a, const DilationDescriptor& p,
                             const GridSpec& grid, std::pair<int, int> scales, std::size_t dimension, double band_lo,
                             double band_hi) {
        const auto space = fourier_test_space(grid, dimension, band_lo, band_hi);
        return frame_bounds_estimate(psi, a, p, range(scales), std::nullopt, space);
    }, py::arg("psi"), py::arg("a"), py::arg("p"), py::arg("grid"), py::arg("j_range"), py::arg("dimension") = 64,
          py::arg("band_lo") = 0.25, py::arg("band_hi") = 4.0);

    m.def("subcommands", &subcommand_names);
    m.def("run_json", [](const std::string& name, const std::string& config_text, const std::string& base_dir) {
        const auto c = parse_config(config_text, base_dir);
        py::gil_scoped_release release;
        return run_experiment(name, c).report.dump();
    }, py::arg("name"), py::arg("config"), py::arg("base_dir") = ".", "Report of one subcommand as JSON text.");
    m.def("resolved_config_json", [](const std::string& config_text, const std::string& base_dir) {
        return to_json(parse_config(config_text, base_dir)).dump();
    }, py::arg("config"), py::arg("base_dir") = ".");
}
