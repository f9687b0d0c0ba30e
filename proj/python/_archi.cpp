#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "archi/bergman.hpp"
#include "archi/christoffel.hpp"
#include "archi/errors.hpp"
#include "archi/geometry.hpp"
#include "archi/moments.hpp"
#include "archi/reconstruct.hpp"
#include "archi/verify.hpp"

namespace py = pybind11;
using namespace archi;

namespace {

py::array_t<double> ring_array(const std::vector<Point>& v) {
    py::array_t<double> a({static_cast<py::ssize_t>(v.size()), py::ssize_t{2}});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        m(i, 0) = v[i].real();
        m(i, 1) = v[i].imag();
    }
    return a;
}

py::list rings(const std::vector<Polygon>& ps) {
    py::list out;
    for (const Polygon& p : ps) out.append(ring_array(p.vertices()));
    return out;
}

py::array_t<double> field_array(const ScalarField& f) {
    py::array_t<double> a({static_cast<py::ssize_t>(f.frame.ny), static_cast<py::ssize_t>(f.frame.nx)});
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    return a;
}

py::dict phase_dict(const PhaseResult& r) {
    py::dict d;
    d["feasible"] = r.feasible;
    d["degree_used"] = r.degree_used;
    d["breakdown"] = r.breakdown;
    d["frame"] = py::make_tuple(r.frame.xmin, r.frame.xmax, r.frame.ymin, r.frame.ymax);
    d["zeros"] = r.zeros;
    d["levels"] = r.levels;
    d["boundary"] = rings(r.boundary);
    d["open_contours"] = r.open_contours;
    d["warnings"] = r.warnings;
    if (!r.field.values.empty()) d["field"] = field_array(r.field);
    return d;
}

}  // namespace

PYBIND11_MODULE(_archi, m) {
    m.doc() = "Shape reconstruction from complex area moments";
    m.attr("__version__") = std::string(library_version());

    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::enum_<Precision>(m, "Precision")
        .value("double", Precision::Double)
        .value("dd", Precision::DoubleDouble)
        .value("mp", Precision::Multi);
    py::enum_<PointSet>(m, "PointSet").value("G", PointSet::G).value("GStar", PointSet::GStar).value("K", PointSet::K);

    py::class_<Scene>(m, "Scene")
        .def_static(
            "parse",
            [](const std::string& text) {
                std::istringstream is(text);
                return read_scene(is);
            },
            py::arg("text"))
        .def_static("read", &read_scene_file, py::arg("path"))
        .def("__str__", [](const Scene& s) {
            std::ostringstream os;
            write_scene(os, s);
            return os.str();
        });

    py::class_<MomentFrame>(m, "MomentFrame")
        .def(py::init<>())
        .def(py::init([](Point c, double s) { return MomentFrame{c, s}; }), py::arg("center"), py::arg("scale"))
        .def_readwrite("center", &MomentFrame::center)
        .def_readwrite("scale", &MomentFrame::scale);
    m.def("natural_frame", &natural_frame, py::arg("scene"));

    py::class_<MomentMatrix>(m, "MomentMatrix")
        .def_property_readonly("degree", &MomentMatrix::degree)
        .def_property_readonly("precision", &MomentMatrix::precision)
        .def_property_readonly("frame", &MomentMatrix::frame)
        .def("at", &MomentMatrix::at, py::arg("i"), py::arg("j"))
        .def("to_numpy", [](const MomentMatrix& mm) {
            const int d = mm.degree() + 1;
            py::array_t<std::complex<double>> a({d, d});
            auto u = a.mutable_unchecked<2>();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) u(i, j) = mm.at(i, j);
            return a;
        })
        .def("__sub__", [](const MomentMatrix& a, const MomentMatrix& b) { return a - b; })
        .def("__add__", [](const MomentMatrix& a, const MomentMatrix& b) { return a + b; });

    m.def("scene_moments", &scene_moments, py::arg("scene"), py::arg("n"), py::arg("which") = PointSet::GStar,
          py::arg("precision") = Precision::Double, py::arg("frame") = MomentFrame{});

    py::class_<BergmanBasis>(m, "BergmanBasis")
        .def_property_readonly("degree", &BergmanBasis::degree)
        .def_property_readonly("breakdown", &BergmanBasis::breakdown_degree)
        .def("gamma", &BergmanBasis::gamma, py::arg("k"))
        .def("log_gamma", &BergmanBasis::log_gamma, py::arg("k"))
        .def("max_residual", &BergmanBasis::max_residual)
        .def("zeros", [](const BergmanBasis& b, int k) { return zeros(b, k); }, py::arg("k"))
        .def("evaluate", [](const BergmanBasis& b, int k, Point z) { return evaluate(b, k, z); }, py::arg("k"),
             py::arg("z"))
        .def("log_lambda", [](const BergmanBasis& b, int n, Point z) { return log_lambda(b, n, z); }, py::arg("n"),
             py::arg("z"))
        .def(
            "field",
            [](const BergmanBasis& b, int n, std::tuple<double, double, double, double> box, int nx, int ny,
               int threads) {
                const auto [x0, x1, y0, y1] = box;
                return field_array(field(b, n, Frame{x0, x1, y0, y1, nx, ny}, FieldMeaning::LambdaSqrt, threads));
            },
            py::arg("n"), py::arg("box"), py::arg("nx") = 256, py::arg("ny") = 256, py::arg("threads") = 0,
            "lambda_n^{1/2} on the cell centers, shape (ny, nx)");

    m.def("orthogonalize", [](const MomentMatrix& mm, int n) { return orthogonalize(mm, n); }, py::arg("moments"),
          py::arg("n"));

    m.def(
        "reconstruct",
        [](const MomentMatrix& star, int degree, int nx, int ny,
           std::optional<std::tuple<double, double, double, double>> frame, std::optional<double> level,
           Precision precision, bool lakes, std::optional<MomentMatrix> mu_hat, int threads) {
            ReconstructionConfig cfg;
            cfg.degree = degree;
            cfg.nx = nx;
            cfg.ny = ny;
            if (frame) {
                const auto [x0, x1, y0, y1] = *frame;
                cfg.frame = Frame{x0, x1, y0, y1, nx, ny};
            }
            cfg.level = level;
            cfg.precision = precision;
            cfg.threads = threads;
            cfg.validate();
            ReconstructionResult r;
            {
                py::gil_scoped_release nogil;
                r = reconstruct_full(star, cfg, lakes, mu_hat);
            }
            py::dict d;
            d["phase_a"] = phase_dict(r.a);
            if (r.b) d["phase_b"] = phase_dict(*r.b);
            d["g_hat"] = rings(r.g_hat());
            d["k_hat"] = rings(r.k_hat());
            d["oracle"] = r.oracle_mu_hat;
            d["mass_floor"] = r.mass_floor;
            d["warnings"] = r.warnings;
            return d;
        },
        py::arg("moments"), py::arg("degree") = 60, py::arg("nx") = 256, py::arg("ny") = 256,
        py::arg("frame") = py::none(), py::arg("level") = py::none(), py::arg("precision") = Precision::DoubleDouble,
        py::arg("lakes") = true, py::arg("mu_hat") = py::none(), py::arg("threads") = 0);

    m.def(
        "hausdorff",
        [](const std::vector<py::array_t<double>>& rs, const Scene& scene, bool lakes) {
            std::vector<Polygon> ps;
            for (const auto& a : rs) {
                auto u = a.unchecked<2>();
                std::vector<Point> v;
                for (py::ssize_t i = 0; i < u.shape(0); ++i) v.emplace_back(u(i, 0), u(i, 1));
                ps.emplace_back(std::move(v));
            }
            return hausdorff_to_boundary(ps, scene, lakes ? BoundarySet::Lakes : BoundarySet::Gamma);
        },
        py::arg("rings"), py::arg("scene"), py::arg("lakes") = false);

    m.def("list_suites", &list_suites);
    m.def(
        "verify",
        [](const std::string& suite, int n, Precision precision) {
            VerifyOptions o;
            o.n = n;
            o.precision = precision;
            py::list out;
            for (const Check& c : verify_suite(suite, o)) {
                py::dict d;
                d["check"] = c.name;
                d["ref"] = c.ref;
                d["value"] = c.value;
                d["threshold"] = c.threshold;
                d["pass"] = c.pass;
                d["note"] = c.note;
                out.append(d);
            }
            return out;
        },
        py::arg("suite"), py::arg("n") = 0, py::arg("precision") = Precision::DoubleDouble);
}
